#pragma once

// Multiplicative characters of F_q and the character sums that appear in the
// counting arguments. chi_t(g^j) = exp(2 pi i t j / (q-1)) and chi_t(0) = 0.
//
// Products of characters are evaluated by summing integer exponents modulo
// q - 1 and doing a single lookup into a precomputed table of roots of unity,
// so the only roundoff comes from the final summation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "progset/element_set.hpp"
#include "progset/error.hpp"
#include "progset/field.hpp"
#include "progset/parallel.hpp"
#include "progset/progressions.hpp"
#include "progset/property_report.hpp"
#include "progset/random.hpp"

namespace progset {

using Complex = std::complex<double>;

struct CharacterIndex {
  std::uint32_t t = 0;
  friend constexpr bool operator==(CharacterIndex, CharacterIndex) = default;
};

class CharacterTable {
 public:
  explicit CharacterTable(const FieldTables& field) : field_(&field), m_(field.group_order()) {
    roots_.resize(m_);
    for (std::uint32_t j = 0; j < m_; ++j) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m_);
      roots_[j] = {std::cos(a), std::sin(a)};
    }
  }

  const FieldTables& field() const noexcept { return *field_; }
  /// Number of characters, q - 1.
  std::uint32_t size() const noexcept { return m_; }

  Complex root(std::uint64_t e) const noexcept { return roots_[e % m_]; }

  Complex eval(CharacterIndex chi, FieldElement x) const noexcept {
    const std::uint32_t d = field_->dlog_or_sentinel(x);
    if (d == FieldTables::kZeroLog) return {0.0, 0.0};
    return roots_[(std::uint64_t(chi.t) * d) % m_];
  }

  CharacterIndex conj(CharacterIndex chi) const noexcept { return {chi.t == 0 ? 0 : m_ - chi.t}; }
  CharacterIndex product(CharacterIndex a, CharacterIndex b) const noexcept { return {(a.t + b.t) % m_}; }

  Complex sum_over_set(CharacterIndex chi, const ElementSet& s) const {
    Complex acc{0.0, 0.0};
    s.for_each([&](std::uint32_t i) { acc += eval(chi, {i}); });
    return acc;
  }

  /// S(chi_t) = sum_{s in S} chi_t(s) for every t, via a dlog histogram.
  std::vector<Complex> all_set_sums(const ElementSet& s) const {
    std::vector<std::uint32_t> hist(m_, 0);
    s.for_each([&](std::uint32_t i) {
      if (i != 0) ++hist[field_->dlog_or_sentinel({i})];
    });
    std::vector<Complex> out(m_);
    for (std::uint32_t t = 0; t < m_; ++t) {
      Complex acc{0.0, 0.0};
      for (std::uint32_t j = 0; j < m_; ++j)
        if (hist[j]) acc += static_cast<double>(hist[j]) * roots_[(std::uint64_t(t) * j) % m_];
      out[t] = acc;
    }
    return out;
  }

 private:
  const FieldTables* field_;
  std::uint32_t m_;
  std::vector<Complex> roots_;
};

inline Complex char_eval(const CharacterTable& chars, CharacterIndex chi, FieldElement x) { return chars.eval(chi, x); }

inline Complex char_sum_over_set(const CharacterTable& chars, CharacterIndex chi, const ElementSet& s) {
  return chars.sum_over_set(chi, s);
}

enum class TupleMode { Exhaustive, Sampled };

inline constexpr std::uint64_t kMaxExhaustiveTuples = 1'000'000;

/// Enumerates character tuples either exhaustively (last component fastest)
/// or by counter-keyed sampling.
class TupleSource {
 public:
  TupleSource(std::uint32_t m, std::uint32_t k, TupleMode mode, std::uint64_t samples, std::uint64_t seed)
      : m_(m), k_(k), mode_(mode), seed_(seed) {
    if (mode == TupleMode::Exhaustive) {
      count_ = 1;
      for (std::uint32_t i = 0; i < k; ++i) {
        count_ *= m;
        if (count_ > kMaxExhaustiveTuples)
          throw Error(Errc::TooExpensive, "exhaustive enumeration exceeds 10^6 tuples; use sampled mode");
      }
    } else {
      count_ = samples;
    }
  }

  std::uint64_t count() const noexcept { return count_; }

  void at(std::uint64_t i, std::vector<std::uint32_t>& out) const {
    out.resize(k_);
    if (mode_ == TupleMode::Exhaustive) {
      for (std::uint32_t c = k_; c-- > 0;) {
        out[c] = static_cast<std::uint32_t>(i % m_);
        i /= m_;
      }
    } else {
      for (std::uint32_t c = 0; c < k_; ++c) out[c] = static_cast<std::uint32_t>(keyed_u64(seed_, i * k_ + c) % m_);
    }
  }

 private:
  std::uint32_t m_, k_;
  TupleMode mode_;
  std::uint64_t seed_;
  std::uint64_t count_ = 0;
};

inline std::string tuple_string(std::span<const std::uint32_t> tuple) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < tuple.size(); ++i) os << (i ? "," : "") << tuple[i];
  os << ')';
  return os.str();
}

/// Rows of discrete logs for a product of characters; evaluating a tuple is
/// sum over rows of root(sum_c t_c * row[c]). Rows where some argument is zero
/// are dropped since they contribute 0.
class ExponentGrid {
 public:
  explicit ExponentGrid(std::uint32_t k) : k_(k) {}

  void add_row(std::span<const FieldElement> args, const FieldTables& f) {
    const std::size_t start = logs_.size();
    for (auto a : args) {
      const std::uint32_t d = f.dlog_or_sentinel(a);
      if (d == FieldTables::kZeroLog) {
        logs_.resize(start);
        return;
      }
      logs_.push_back(d);
    }
  }

  std::size_t rows() const noexcept { return k_ ? logs_.size() / k_ : 0; }

  Complex evaluate(const CharacterTable& chars, std::span<const std::uint32_t> tuple) const {
    const std::uint64_t m = chars.size();
    Complex acc{0.0, 0.0};
    const std::size_t n = rows();
    for (std::size_t r = 0; r < n; ++r) {
      std::uint64_t e = 0;
      const std::uint32_t* row = &logs_[r * k_];
      for (std::uint32_t c = 0; c < k_; ++c) e += std::uint64_t(tuple[c]) * row[c];
      acc += chars.root(e % m);
    }
    return acc;
  }

 private:
  std::uint32_t k_;
  std::vector<std::uint32_t> logs_;
};

namespace detail {

inline ExponentGrid weil_ap_grid(const FieldTables& f, std::uint32_t k) {
  ExponentGrid g(k);
  std::vector<FieldElement> args(k);
  for (std::uint32_t lam = 0; lam < f.q(); ++lam) {
    for (std::uint32_t i = 0; i < k; ++i) args[i] = f.add({lam}, f.from_int(i));
    g.add_row(args, f);
  }
  return g;
}

inline ExponentGrid gp_structure_grid(const FieldTables& f, std::uint32_t k, FieldElement h, const ElementSet& m_set) {
  ExponentGrid g(k);
  std::vector<FieldElement> args(k);
  const FieldElement neg_h = f.neg(h);
  for (std::uint32_t lam = 1; lam < f.q(); ++lam) {
    m_set.for_each([&](std::uint32_t mu) {
      FieldElement term{lam};
      for (std::uint32_t i = 0; i < k; ++i) {
        args[i] = f.add(term, neg_h);
        term = f.mul(term, {mu});
      }
      g.add_row(args, f);
    });
  }
  return g;
}

struct ChunkOutcome {
  std::uint64_t checks = 0;
  std::uint64_t skipped = 0;
  double max_ratio = 0;
  double max_abs = 0;
  std::optional<Violation> violation;
};

inline void merge_outcomes(PropertyReport& rep, const std::vector<ChunkOutcome>& parts, std::uint64_t& skipped) {
  for (const auto& c : parts) {
    rep.checks += c.checks;
    skipped += c.skipped;
    rep.max_ratio = std::max(rep.max_ratio, c.max_ratio);
    rep.max_residual = std::max(rep.max_residual, c.max_abs);
    if (c.violation) rep.fail(*c.violation);
  }
}

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

/// Checks the three orthogonality relations of the character group:
/// (a) sum_x chi_t(x) = 0 for t != 0, (b) sum_t chi_t(x) conj chi_t(y) = 0 for
/// x != y, (c) sum_t |chi_t(x)|^2 = q - 1. Characters are evaluated through
/// the field's dlog table, so a corrupted table surfaces here.
inline PropertyReport verify_orthogonality(const FieldTables& f, double tol, std::uint32_t max_q = 1u << 12) {
  if (f.q() > max_q) throw Error(Errc::TooExpensive, "orthogonality check limited to q <= " + std::to_string(max_q));
  CharacterTable chars(f);
  PropertyReport rep;
  rep.suite = "orthogonality";
  const std::uint32_t m = chars.size(), q = f.q();
  auto check = [&](double residual, const std::string& where) {
    ++rep.checks;
    rep.max_residual = std::max(rep.max_residual, residual);
    if (!(residual < tol)) rep.fail({"OrthogonalityViolation", where, residual, tol});
  };
  for (std::uint32_t t = 1; t < m; ++t) {
    Complex acc{0, 0};
    for (std::uint32_t x = 1; x < q; ++x) acc += chars.eval({t}, {x});
    check(std::abs(acc), "t=" + std::to_string(t));
  }
  // Column sums keyed by the character-side difference; every pair (x, y)
  // looks up the sum matching its own evaluated exponents.
  std::vector<Complex> col(m);
  for (std::uint32_t d = 0; d < m; ++d) {
    Complex acc{0, 0};
    for (std::uint32_t t = 0; t < m; ++t) acc += chars.root(std::uint64_t(t) * d);
    col[d] = acc;
  }
  for (std::uint32_t x = 1; x < q; ++x) {
    const std::uint32_t dx = f.dlog_or_sentinel({x});
    for (std::uint32_t y = 1; y < q; ++y) {
      if (x == y) continue;
      const std::uint32_t dy = f.dlog_or_sentinel({y});
      const double r = std::abs(col[(dx + m - dy) % m]);
      ++rep.checks;
      rep.max_residual = std::max(rep.max_residual, r);
      if (!(r < tol)) rep.fail({"OrthogonalityViolation", "pair=(" + std::to_string(x) + "," + std::to_string(y) + ")", r, tol});
    }
  }
  for (std::uint32_t x = 1; x < q; ++x) {
    double acc = 0;
    for (std::uint32_t t = 0; t < m; ++t) acc += std::norm(chars.eval({t}, {x}));
    check(std::abs(acc - m), "x=" + std::to_string(x));
  }
  return rep;
}

/// sum over lambda in F_q of prod_i chi_i(lambda + i - 1).
inline Complex weil_sum_ap(const CharacterTable& chars, std::span<const CharacterIndex> tuple) {
  if (tuple.size() < 2) throw Error(Errc::KTooSmall, "need at least two characters");
  const auto k = static_cast<std::uint32_t>(tuple.size());
  std::vector<std::uint32_t> t(k);
  for (std::uint32_t i = 0; i < k; ++i) t[i] = tuple[i].t;
  return detail::weil_ap_grid(chars.field(), k).evaluate(chars, t);
}

/// Checks |sum_lambda prod chi_i(lambda + i - 1)| <= (k-1) sqrt(q) for all
/// non-principal tuples, with additive slack k when some (not all) components
/// are principal. All-principal tuples are skipped.
inline PropertyReport verify_weil_bound_ap(const CharacterTable& chars, std::uint32_t k, TupleMode mode,
                                           std::uint64_t samples = 10'000, std::uint64_t seed = 1,
                                           unsigned workers = 1) {
  const FieldTables& f = chars.field();
  if (k < 2) throw Error(Errc::KTooSmall, "k must be >= 2");
  if (k >= f.p()) throw Error(Errc::KTooLarge, "k must be < p");
  const TupleSource src(chars.size(), k, mode, samples, seed);
  const ExponentGrid grid = detail::weil_ap_grid(f, k);
  const double sq = std::sqrt(static_cast<double>(f.q()));
  const double tol = 1e-9 * f.q();
  const double strict = (k - 1) * sq, slack = strict + k;
  auto parts = parallel_chunks(src.count(), workers, [&](const Chunk& c) {
    detail::ChunkOutcome out;
    std::vector<std::uint32_t> tuple;
    for (std::size_t i = c.begin; i < c.end; ++i) {
      src.at(i, tuple);
      std::uint32_t principal = 0;
      for (auto v : tuple) principal += (v == 0);
      if (principal == k) {
        ++out.skipped;
        continue;
      }
      const double bound = principal == 0 ? strict : slack;
      const double v = std::abs(grid.evaluate(chars, tuple));
      ++out.checks;
      out.max_abs = std::max(out.max_abs, v);
      out.max_ratio = std::max(out.max_ratio, v / bound);
      if (v > bound + tol && !out.violation)
        out.violation = Violation{"WeilViolation", tuple_string(tuple), v, bound};
    }
    return out;
  });
  PropertyReport rep;
  rep.suite = "weil";
  std::uint64_t skipped = 0;
  detail::merge_outcomes(rep, parts, skipped);
  rep.note("principal_tuples_skipped", std::to_string(skipped));
  rep.note("strict_bound", detail::fmt_double(strict));
  rep.note("mixed_bound", detail::fmt_double(slack));
  return rep;
}

/// sum over lambda in F_q^*, mu in M of prod_i chi_i(lambda mu^(i-1) - h).
inline Complex gp_structure_sum(const CharacterTable& chars, std::span<const CharacterIndex> tuple, FieldElement h,
                                const ElementSet& m_set) {
  if (h.is_zero()) throw Error(Errc::ZeroShift, "h must be nonzero");
  if (tuple.empty()) throw Error(Errc::KTooSmall, "need at least one character");
  const auto k = static_cast<std::uint32_t>(tuple.size());
  std::vector<std::uint32_t> t(k);
  for (std::uint32_t i = 0; i < k; ++i) t[i] = tuple[i].t;
  return detail::gp_structure_grid(chars.field(), k, h, m_set).evaluate(chars, t);
}

/// Checks |gp_structure_sum| < 2(k-1)(q-1) sqrt(q) for every tuple with a
/// non-principal component. Whether k <= sqrt(q) holds is reported, not enforced.
inline PropertyReport verify_gp_structure_bound(const CharacterTable& chars, std::uint32_t k, FieldElement h,
                                                TupleMode mode, std::uint64_t samples = 10'000,
                                                std::uint64_t seed = 1, unsigned workers = 1) {
  const FieldTables& f = chars.field();
  if (h.is_zero()) throw Error(Errc::ZeroShift, "h must be nonzero");
  if (k < 2) throw Error(Errc::KTooSmall, "k must be >= 2");
  const TupleSource src(chars.size(), k, mode, samples, seed);
  const ElementSet m_set = compute_m_set(f, k);
  const ExponentGrid grid = detail::gp_structure_grid(f, k, h, m_set);
  const double bound = 2.0 * (k - 1) * (f.q() - 1) * std::sqrt(static_cast<double>(f.q()));
  auto parts = parallel_chunks(src.count(), workers, [&](const Chunk& c) {
    detail::ChunkOutcome out;
    std::vector<std::uint32_t> tuple;
    for (std::size_t i = c.begin; i < c.end; ++i) {
      src.at(i, tuple);
      bool all_principal = true;
      for (auto v : tuple) all_principal = all_principal && v == 0;
      if (all_principal) {
        ++out.skipped;
        continue;
      }
      const double v = std::abs(grid.evaluate(chars, tuple));
      ++out.checks;
      out.max_abs = std::max(out.max_abs, v);
      out.max_ratio = std::max(out.max_ratio, v / bound);
      if (!(v < bound) && !out.violation) out.violation = Violation{"GpStructureViolation", tuple_string(tuple), v, bound};
    }
    return out;
  });
  PropertyReport rep;
  rep.suite = "gp-structure";
  std::uint64_t skipped = 0;
  detail::merge_outcomes(rep, parts, skipped);
  rep.note("principal_tuples_skipped", std::to_string(skipped));
  rep.note("bound", detail::fmt_double(bound));
  rep.note("m_set_size", std::to_string(m_set.size()));
  rep.note("k_le_sqrt_q", std::uint64_t(k) * k <= f.q() ? "true" : "false");
  return rep;
}

}  // namespace progset
