#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "progset/element_set.hpp"
#include "progset/error.hpp"
#include "progset/field.hpp"
#include "progset/random.hpp"

namespace progset {

enum class GenKind { RandomDensity, QuadraticResidues, Interval, Subgroup, Full, FullNonzero, Explicit };

struct GenSpec {
  GenKind kind = GenKind::RandomDensity;
  double density = 0.5;
  std::uint32_t d = 0;  // subgroup order
  std::uint32_t lo = 0, hi = 0;
  std::uint64_t seed = 1;
  std::string path;  // explicit sets
};

inline std::string_view gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::RandomDensity: return "random";
    case GenKind::QuadraticResidues: return "qr";
    case GenKind::Interval: return "interval";
    case GenKind::Subgroup: return "subgroup";
    case GenKind::Full: return "full";
    case GenKind::FullNonzero: return "full-nonzero";
    case GenKind::Explicit: return "explicit";
  }
  return "?";
}

inline GenKind parse_gen_kind(std::string_view s) {
  for (GenKind k : {GenKind::RandomDensity, GenKind::QuadraticResidues, GenKind::Interval, GenKind::Subgroup,
                    GenKind::Full, GenKind::FullNonzero, GenKind::Explicit})
    if (gen_kind_name(k) == s) return k;
  throw Error(Errc::ConfigError, "unknown generator kind '" + std::string(s) + "'");
}

/// Element idx is kept iff keyed_unit(seed, idx) < density.
inline ElementSet random_subset(const FieldTables& t, double density, std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) throw Error(Errc::BadDensity, "density must lie in (0, 1]");
  ElementSet s(t.q());
  for (std::uint32_t i = 0; i < t.q(); ++i)
    if (keyed_unit(seed, i) < density) s.insert(i);
  return s;
}

inline ElementSet quadratic_residues(const FieldTables& t) {
  if (t.p() == 2) throw Error(Errc::EvenCharacteristic, "every element of GF(2^n) is a square");
  ElementSet s(t.q());
  for (std::uint32_t j = 0; j < t.group_order(); j += 2) s.insert(t.exp(j));
  return s;
}

/// The subgroup of F_q^* of order d.
inline ElementSet multiplicative_subgroup(const FieldTables& t, std::uint32_t d) {
  if (d == 0 || t.group_order() % d != 0)
    throw Error(Errc::NotADivisor, std::to_string(d) + " does not divide q-1=" + std::to_string(t.group_order()));
  ElementSet s(t.q());
  const std::uint32_t step = t.group_order() / d;
  for (std::uint32_t j = 0; j < d; ++j) s.insert(t.exp(std::uint64_t(j) * step));
  return s;
}

inline ElementSet interval_set(const FieldTables& t, std::uint32_t lo, std::uint32_t hi) {
  if (t.n() != 1) throw Error(Errc::NotPrimeField, "intervals need a prime field");
  if (lo > hi || hi >= t.p()) throw Error(Errc::ConfigError, "interval bounds must satisfy 0 <= lo <= hi < p");
  ElementSet s(t.q());
  for (std::uint32_t i = lo; i <= hi; ++i) s.insert(i);
  return s;
}

inline ElementSet generate_set(const FieldTables& t, const GenSpec& g) {
  switch (g.kind) {
    case GenKind::RandomDensity: return random_subset(t, g.density, g.seed);
    case GenKind::QuadraticResidues: return quadratic_residues(t);
    case GenKind::Interval: return interval_set(t, g.lo, g.hi);
    case GenKind::Subgroup: return multiplicative_subgroup(t, g.d);
    case GenKind::Full: return ElementSet::full(t.q());
    case GenKind::FullNonzero: return ElementSet::full_nonzero(t.q());
    case GenKind::Explicit: {
      ElementSet s = read_element_set(g.path);
      if (s.q() != t.q()) throw Error(Errc::FieldMismatch, g.path + " is over q=" + std::to_string(s.q()));
      return s;
    }
  }
  throw Error(Errc::ConfigError, "unhandled generator");
}

}  // namespace progset
