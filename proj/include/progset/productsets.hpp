#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "progset/characters.hpp"
#include "progset/element_set.hpp"
#include "progset/error.hpp"
#include "progset/field.hpp"
#include "progset/property_report.hpp"

namespace progset {

/// counts[x] = #{(a, b) in A x B : ab = x}.
struct RepFunction {
  std::uint32_t q = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t operator[](std::uint32_t x) const { return counts[x]; }
  std::uint64_t total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }
  ElementSet support() const {
    ElementSet s(q);
    for (std::uint32_t x = 0; x < q; ++x)
      if (counts[x]) s.insert(x);
    return s;
  }
};

namespace detail {
inline void require_same_field(const FieldTables& t, const ElementSet& a, const ElementSet& b) {
  if (a.q() != t.q() || b.q() != t.q())
    throw Error(Errc::FieldMismatch, "sets over q=" + std::to_string(a.q()) + "," + std::to_string(b.q()) +
                                         " used with field q=" + std::to_string(t.q()));
}
}  // namespace detail

inline ElementSet productset(const FieldTables& t, const ElementSet& a, const ElementSet& b) {
  detail::require_same_field(t, a, b);
  ElementSet out(t.q());
  if (a.empty() || b.empty()) return out;
  if (a.contains(0u) || b.contains(0u)) out.insert(0u);
  // Nonzero products in exponent space: dlog(ab) = dlog a + dlog b.
  const auto exp = t.exp_table();
  std::vector<std::uint32_t> lb;
  b.for_each([&](std::uint32_t y) {
    if (y) lb.push_back(t.dlog_or_sentinel({y}));
  });
  std::vector<std::uint8_t> hit(t.group_order(), 0);
  a.for_each([&](std::uint32_t x) {
    if (!x) return;
    const std::uint32_t la = t.dlog_or_sentinel({x});
    for (std::uint32_t l : lb) hit[(la + l) % t.group_order()] = 1;
  });
  for (std::uint32_t j = 0; j < t.group_order(); ++j)
    if (hit[j]) out.insert(exp[j]);
  return out;
}

inline ElementSet shift_set(const FieldTables& t, const ElementSet& s, FieldElement h) {
  ElementSet out(t.q());
  s.for_each([&](std::uint32_t x) { out.insert(t.add({x}, h)); });
  return out;
}

inline ElementSet shifted_productset(const FieldTables& t, const ElementSet& a, const ElementSet& b, FieldElement h) {
  return shift_set(t, productset(t, a, b), h);
}

/// Direct O(#A #B) multiplicity count. With restrict_nonzero the zero
/// elements of A and B are dropped first, so counts[0] == 0.
inline RepFunction rep_function(const FieldTables& t, const ElementSet& a, const ElementSet& b,
                                bool restrict_nonzero) {
  detail::require_same_field(t, a, b);
  RepFunction r{t.q(), std::vector<std::uint64_t>(t.q(), 0)};
  const auto bi = b.indices();
  a.for_each([&](std::uint32_t x) {
    if (restrict_nonzero && x == 0) return;
    for (std::uint32_t y : bi) {
      if (restrict_nonzero && y == 0) continue;
      ++r.counts[t.mul({x}, {y}).idx];
    }
  });
  return r;
}

/// Checks r*(x) = (1/(q-1)) sum_t chi_t(x) conj(S_A*(chi_t)) conj(S_B*(chi_t))
/// at every nonzero x, where A* = A \ {0}, B* = B \ {0}.
inline PropertyReport verify_rep_charsum(const CharacterTable& chars, const ElementSet& a, const ElementSet& b,
                                         double tol, std::uint32_t max_q = 1u << 12) {
  const FieldTables& f = chars.field();
  detail::require_same_field(f, a, b);
  if (f.q() > max_q) throw Error(Errc::TooExpensive, "rep-function identity limited to q <= " + std::to_string(max_q));
  const RepFunction r = rep_function(f, a, b, true);
  const auto sa = chars.all_set_sums(a.without_zero());
  const auto sb = chars.all_set_sums(b.without_zero());
  const std::uint32_t m = chars.size();
  std::vector<Complex> weight(m);
  for (std::uint32_t t = 0; t < m; ++t) weight[t] = std::conj(sa[t]) * std::conj(sb[t]);
  PropertyReport rep;
  rep.suite = "repfn";
  for (std::uint32_t x = 1; x < f.q(); ++x) {
    Complex acc{0, 0};
    for (std::uint32_t t = 0; t < m; ++t) acc += chars.eval({t}, {x}) * weight[t];
    acc /= static_cast<double>(m);
    const double dev = std::abs(acc - Complex(static_cast<double>(r[x]), 0.0));
    ++rep.checks;
    rep.max_residual = std::max(rep.max_residual, dev);
    if (!(dev < tol)) rep.fail({"IdentityViolation", "x=" + std::to_string(x), dev, tol});
  }
  return rep;
}

}  // namespace progset
