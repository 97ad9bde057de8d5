#pragma once

// Exact solution counts for the progression systems
//
//   T: lambda + (j-1) mu       = a_j b_j,      lambda in F_q,   mu in F_q^*
//   Q: lambda mu^(j-1)         = a_j b_j + h,  lambda in F_q^*, mu in M
//
// for j = 1..k, together with the main term, the error bound and the exact
// decision |count - main| <= error. Products a_j b_j are restricted to be
// nonzero (A* = A \ {0}, B* = B \ {0}), which is what the character expansion
// with chi(0) = 0 counts.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "progset/characters.hpp"
#include "progset/element_set.hpp"
#include "progset/error.hpp"
#include "progset/field.hpp"
#include "progset/parallel.hpp"
#include "progset/productsets.hpp"
#include "progset/progressions.hpp"
#include "progset/property_report.hpp"

namespace progset {

enum class CountKind { T, Q };

struct CountOptions {
  std::uint64_t max_work = 1'000'000'000;  // cap on q^2 * k
  unsigned workers = 1;
};

struct CountReport {
  CountKind kind = CountKind::T;
  std::uint32_t k = 0;
  std::uint32_t q = 0;
  std::optional<FieldElement> h;
  mpz_class count;
  mpq_class main_term;
  double error_bound = 0;
  mpz_class error_bound_sq;  // exact square of error_bound
  bool inequality_holds = false;
  bool raw_inequality_holds = false;  // same test with raw #A, #B; informational
  bool threshold_satisfied = false;   // theorem hypothesis on raw #A #B
  std::uint64_t card_a = 0, card_b = 0;
  std::uint64_t card_a_star = 0, card_b_star = 0;
  std::uint64_t m_set_size = 0;  // Q only
};

inline mpz_class mpz_pow(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline mpz_class mpz_from_u128(unsigned __int128 v) {
  mpz_class hi = static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64));
  mpz_class lo = static_cast<unsigned long>(static_cast<std::uint64_t>(v));
  return (hi << 64) + lo;
}

inline std::string to_string(const mpz_class& v) { return v.get_str(); }

/// |count - num/den| <= sqrt(err_sq), decided without rounding.
inline bool within_error(const mpz_class& count, const mpq_class& main, const mpz_class& err_sq) {
  const mpz_class diff = count * main.get_den() - main.get_num();
  return diff * diff <= main.get_den() * main.get_den() * err_sq;
}

namespace detail {

// Sums products of small integers exactly: 128-bit fast path, GMP on overflow.
class ExactSum {
 public:
  void add_product(const std::uint64_t* factors, std::uint32_t n) {
    unsigned __int128 prod = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (__builtin_mul_overflow(prod, static_cast<unsigned __int128>(factors[i]), &prod)) {
        mpz_class big = 1;
        for (std::uint32_t j = 0; j < n; ++j) big *= static_cast<unsigned long>(factors[j]);
        big_ += big;
        return;
      }
    }
    unsigned __int128 s;
    if (__builtin_add_overflow(small_, prod, &s)) {
      big_ += mpz_from_u128(small_);
      small_ = prod;
    } else {
      small_ = s;
    }
  }

  mpz_class value() const { return big_ + mpz_from_u128(small_); }

 private:
  unsigned __int128 small_ = 0;
  mpz_class big_ = 0;
};

inline void check_work(std::uint32_t q, std::uint32_t k, std::uint64_t max_work) {
  const long double work = static_cast<long double>(q) * q * k;
  if (work > static_cast<long double>(max_work))
    throw Error(Errc::TooExpensive, "q^2*k = " + std::to_string(static_cast<unsigned long long>(work)) +
                                        " exceeds work cap " + std::to_string(max_work));
}

inline mpz_class pow_z(unsigned long b, unsigned long e) { return mpz_pow(mpz_class(b), e); }

// (#A #B)^(k-1) >= coef^2 * q^(2(k-1)-1), the theorem hypotheses raised to the (k-1)th power.
inline bool threshold_holds(std::uint64_t ab, std::uint32_t k, std::uint32_t q, const mpz_class& coef_sq) {
  return pow_z(ab, k - 1) >= coef_sq * pow_z(q, 2 * (k - 1) - 1);
}

}  // namespace detail

inline bool theorem1_threshold(std::uint64_t ab, std::uint32_t k, std::uint32_t q) {
  return detail::threshold_holds(ab, k, q, mpz_class((k - 1) * (k - 1)));
}
inline bool theorem1_simplified_threshold(std::uint64_t ab, std::uint32_t k, std::uint32_t q) {
  return detail::threshold_holds(ab, k, q, detail::pow_z(2, k - 1));
}
inline bool theorem2_threshold(std::uint64_t ab, std::uint32_t k, std::uint32_t q) {
  const unsigned long c = 4ul * (k - 1);
  return detail::threshold_holds(ab, k, q, mpz_class(c * c));
}
inline bool theorem2_simplified_threshold(std::uint64_t ab, std::uint32_t k, std::uint32_t q) {
  return detail::threshold_holds(ab, k, q, detail::pow_z(8, k - 1));
}

/// Lower bound on #A #B from each theorem, as a real number (for display and density markers).
inline double theorem1_threshold_value(std::uint32_t k, std::uint32_t q) {
  return std::pow(double(k - 1), 2.0 / (k - 1)) * std::pow(double(q), 2.0 - 1.0 / (k - 1));
}
inline double theorem2_threshold_value(std::uint32_t k, std::uint32_t q) {
  return std::pow(4.0 * (k - 1), 2.0 / (k - 1)) * std::pow(double(q), 2.0 - 1.0 / (k - 1));
}

namespace detail {

inline void fill_bounds(CountReport& r, unsigned long coef) {
  const std::uint64_t ab = r.card_a_star * r.card_b_star;
  const std::uint32_t k = r.k, q = r.q;
  r.error_bound = double(coef) * (k - 1) * std::sqrt(double(q)) * std::pow(double(ab), (k + 1) / 2.0);
  const mpz_class c = coef * (k - 1);
  r.error_bound_sq = c * c * q * pow_z(ab, k + 1);
  r.inequality_holds = within_error(r.count, r.main_term, r.error_bound_sq);
}

}  // namespace detail

inline CountReport count_ap_solutions(const FieldTables& t, const ElementSet& a, const ElementSet& b, std::uint32_t k,
                                      const CountOptions& opt = {}) {
  if (k < 3) throw Error(Errc::KTooSmall, "k must be >= 3");
  if (k >= t.p()) throw Error(Errc::KTooLarge, "k must be < p");
  detail::check_work(t.q(), k, opt.max_work);
  const RepFunction r = rep_function(t, a, b, true);
  const std::uint32_t q = t.q(), p = t.p();
  const bool prime = t.n() == 1;
  auto parts = parallel_chunks(q - 1, opt.workers, [&](const Chunk& c) {
    detail::ExactSum sum;
    std::vector<std::uint64_t> f(k);
    for (std::size_t i = c.begin; i < c.end; ++i) {
      const FieldElement mu{static_cast<std::uint32_t>(i + 1)};
      for (std::uint32_t lam = 0; lam < q; ++lam) {
        FieldElement x{lam};
        std::uint32_t j = 0;
        for (; j < k; ++j) {
          f[j] = r.counts[x.idx];
          if (!f[j]) break;
          if (prime) {
            x.idx += mu.idx;
            if (x.idx >= p) x.idx -= p;
          } else {
            x = t.add(x, mu);
          }
        }
        if (j == k) sum.add_product(f.data(), k);
      }
    }
    return sum.value();
  });
  CountReport rep;
  rep.kind = CountKind::T;
  rep.k = k;
  rep.q = q;
  for (const auto& v : parts) rep.count += v;
  rep.card_a = a.size();
  rep.card_b = b.size();
  rep.card_a_star = a.without_zero().size();
  rep.card_b_star = b.without_zero().size();
  const std::uint64_t ab = rep.card_a_star * rep.card_b_star;
  rep.main_term = mpq_class(q * detail::pow_z(ab, k), detail::pow_z(q - 1, k - 1));
  rep.main_term.canonicalize();
  detail::fill_bounds(rep, 1);
  {
    const std::uint64_t raw = rep.card_a * rep.card_b;
    mpq_class raw_main(q * detail::pow_z(raw, k), detail::pow_z(q - 1, k - 1));
    raw_main.canonicalize();
    rep.raw_inequality_holds =
        within_error(rep.count, raw_main, mpz_class((k - 1) * (k - 1)) * q * detail::pow_z(raw, k + 1));
  }
  rep.threshold_satisfied = theorem1_threshold(rep.card_a * rep.card_b, k, q);
  return rep;
}

inline CountReport count_gp_solutions(const FieldTables& t, const ElementSet& a, const ElementSet& b, std::uint32_t k,
                                      FieldElement h, const CountOptions& opt = {}) {
  if (k < 3) throw Error(Errc::KTooSmall, "k must be >= 3");
  if (!t.valid(h)) throw Error(Errc::BadElement, "h outside the field");
  detail::check_work(t.q(), k, opt.max_work);
  const RepFunction r = rep_function(t, a, b, true);
  const ElementSet m_set = compute_m_set(t, k);
  const auto mus = m_set.indices();
  const std::uint32_t q = t.q();
  const FieldElement neg_h = t.neg(h);
  auto parts = parallel_chunks(q - 1, opt.workers, [&](const Chunk& c) {
    detail::ExactSum sum;
    std::vector<std::uint64_t> f(k);
    for (std::size_t i = c.begin; i < c.end; ++i) {
      const FieldElement lam{static_cast<std::uint32_t>(i + 1)};
      for (std::uint32_t mu : mus) {
        FieldElement term = lam;
        std::uint32_t j = 0;
        for (; j < k; ++j) {
          f[j] = r.counts[t.add(term, neg_h).idx];
          if (!f[j]) break;
          term = t.mul(term, {mu});
        }
        if (j == k) sum.add_product(f.data(), k);
      }
    }
    return sum.value();
  });
  CountReport rep;
  rep.kind = CountKind::Q;
  rep.k = k;
  rep.q = q;
  rep.h = h;
  for (const auto& v : parts) rep.count += v;
  rep.card_a = a.size();
  rep.card_b = b.size();
  rep.card_a_star = a.without_zero().size();
  rep.card_b_star = b.without_zero().size();
  rep.m_set_size = m_set.size();
  const std::uint64_t ab = rep.card_a_star * rep.card_b_star;
  rep.main_term = mpq_class(detail::pow_z(ab, k) * rep.m_set_size, detail::pow_z(q - 1, k - 1));
  rep.main_term.canonicalize();
  detail::fill_bounds(rep, 2);
  {
    const std::uint64_t raw = rep.card_a * rep.card_b;
    mpq_class raw_main(detail::pow_z(raw, k) * rep.m_set_size, detail::pow_z(q - 1, k - 1));
    raw_main.canonicalize();
    rep.raw_inequality_holds =
        within_error(rep.count, raw_main, mpz_class(4 * (k - 1) * (k - 1)) * q * detail::pow_z(raw, k + 1));
  }
  rep.threshold_satisfied = theorem2_threshold(rep.card_a * rep.card_b, k, q);
  return rep;
}

/// Evaluates T through the full character expansion and compares it with the
/// exact count. Also checks that the (lambda, mu) structure factor vanishes
/// for every tuple whose product is not the principal character.
inline PropertyReport verify_counting_identity_ap(const CharacterTable& chars, const ElementSet& a,
                                                  const ElementSet& b, std::uint32_t k, double tol,
                                                  unsigned workers = 1) {
  const FieldTables& f = chars.field();
  if (k < 3) throw Error(Errc::KTooSmall, "k must be >= 3");
  if (k >= f.p()) throw Error(Errc::KTooLarge, "k must be < p");
  const std::uint32_t m = chars.size();
  long double tuples = 1;
  for (std::uint32_t i = 0; i < k; ++i) tuples *= m;
  if (tuples / m > 1e5L) throw Error(Errc::TooExpensive, "(q-1)^(k-1) exceeds 10^5");
  if (tuples * f.q() * m > 5e9L) throw Error(Errc::TooExpensive, "character expansion too large");

  const CountReport exact = count_ap_solutions(f, a, b, k, {.workers = workers});
  const auto sa = chars.all_set_sums(a.without_zero());
  const auto sb = chars.all_set_sums(b.without_zero());

  ExponentGrid grid(k);
  std::vector<FieldElement> args(k);
  for (std::uint32_t mu = 1; mu < f.q(); ++mu)
    for (std::uint32_t lam = 0; lam < f.q(); ++lam) {
      FieldElement x{lam};
      for (std::uint32_t j = 0; j < k; ++j) {
        args[j] = x;
        x = f.add(x, {mu});
      }
      grid.add_row(args, f);
    }

  struct Part {
    Complex total{0, 0};
    std::uint64_t checks = 0;
    double max_vanish = 0;
    std::optional<Violation> violation;
  };
  const auto n_tuples = static_cast<std::uint64_t>(tuples);
  auto parts = parallel_chunks(n_tuples, workers, [&](const Chunk& c) {
    Part out;
    std::vector<std::uint32_t> tuple(k);
    for (std::size_t i = c.begin; i < c.end; ++i) {
      std::uint64_t v = i, tsum = 0;
      for (std::uint32_t j = k; j-- > 0;) {
        tuple[j] = static_cast<std::uint32_t>(v % m);
        v /= m;
        tsum += tuple[j];
      }
      const Complex structure = grid.evaluate(chars, tuple);
      if (tsum % m != 0) {
        const double mag = std::abs(structure);
        ++out.checks;
        out.max_vanish = std::max(out.max_vanish, mag);
        if (!(mag < tol) && !out.violation)
          out.violation = Violation{"IdentityViolation", "structure factor " + tuple_string(tuple), mag, tol};
        continue;
      }
      Complex w{1, 0};
      for (std::uint32_t j = 0; j < k; ++j) w *= std::conj(sa[tuple[j]]) * std::conj(sb[tuple[j]]);
      out.total += structure * w;
    }
    return out;
  });
  PropertyReport rep;
  rep.suite = "identity";
  Complex total{0, 0};
  for (const auto& p : parts) {
    total += p.total;
    rep.checks += p.checks;
    rep.max_residual = std::max(rep.max_residual, p.max_vanish);
    if (p.violation) rep.fail(*p.violation);
  }
  const Complex expansion = total / std::pow(static_cast<double>(m), static_cast<double>(k));
  const double dev = std::abs(expansion - Complex(exact.count.get_d(), 0.0));
  ++rep.checks;
  rep.max_residual = std::max(rep.max_residual, dev);
  if (!(dev < tol)) rep.fail({"IdentityViolation", "expansion vs count", dev, tol});
  rep.note("count", exact.count.get_str());
  rep.note("expansion_re", detail::fmt_double(expansion.real()));
  rep.note("expansion_im", detail::fmt_double(expansion.imag()));
  return rep;
}

/// Checks sum_chi |S_A*(chi)| |S_B*(chi)| <= (q-1) sqrt(#A* #B*).
inline PropertyReport verify_cauchy_step(const CharacterTable& chars, const ElementSet& a, const ElementSet& b,
                                         std::optional<double> tol = std::nullopt, std::uint32_t max_q = 1u << 12) {
  const FieldTables& f = chars.field();
  detail::require_same_field(f, a, b);
  if (f.q() > max_q) throw Error(Errc::TooExpensive, "Cauchy check limited to q <= " + std::to_string(max_q));
  const double eps = tol.value_or(1e-9 * f.q());
  const ElementSet as = a.without_zero(), bs = b.without_zero();
  const auto sa = chars.all_set_sums(as), sb = chars.all_set_sums(bs);
  double value = 0;
  for (std::uint32_t t = 0; t < chars.size(); ++t) value += std::abs(sa[t]) * std::abs(sb[t]);
  const double bound = (f.q() - 1) * std::sqrt(static_cast<double>(as.size() * bs.size()));
  PropertyReport rep;
  rep.suite = "cauchy";
  rep.checks = 1;
  rep.max_ratio = bound > 0 ? value / bound : 0;
  rep.max_residual = std::max(0.0, value - bound);
  if (value > bound + eps) rep.fail({"CauchyViolation", "sum over characters", value, bound});
  rep.note("sum", detail::fmt_double(value));
  rep.note("bound", detail::fmt_double(bound));
  return rep;
}

struct TheoremCheck {
  ProgressionKind kind = ProgressionKind::Arithmetic;
  std::uint32_t k = 0;
  std::uint32_t q = 0;
  std::optional<FieldElement> h;
  std::uint64_t card_a = 0, card_b = 0;
  double threshold_value = 0;             // right-hand side of #A #B >= ...
  double simplified_threshold_value = 0;  // with the constant 2 (resp. 8)
  bool threshold_satisfied = false;
  bool simplified_threshold_satisfied = false;
  std::uint64_t target_size = 0;  // #AB or #(AB + h)
  bool found = false;
  std::optional<ProgressionWitness> witness;

  /// Hypothesis satisfied implies a progression was found.
  bool sound() const noexcept { return !threshold_satisfied || found; }
};

inline TheoremCheck check_theorem1(const FieldTables& t, const ElementSet& a, const ElementSet& b, std::uint32_t k,
                                   unsigned workers = 1) {
  if (k < 3) throw Error(Errc::KTooSmall, "k must be >= 3");
  if (k >= t.p()) throw Error(Errc::KTooLarge, "k must be < p");
  TheoremCheck c;
  c.kind = ProgressionKind::Arithmetic;
  c.k = k;
  c.q = t.q();
  c.card_a = a.size();
  c.card_b = b.size();
  const std::uint64_t ab = c.card_a * c.card_b;
  c.threshold_value = theorem1_threshold_value(k, t.q());
  c.simplified_threshold_value = 2.0 * std::pow(double(t.q()), 2.0 - 1.0 / (k - 1));
  c.threshold_satisfied = theorem1_threshold(ab, k, t.q());
  c.simplified_threshold_satisfied = theorem1_simplified_threshold(ab, k, t.q());
  const ElementSet target = productset(t, a, b);
  c.target_size = target.size();
  c.witness = find_ap_of_length(t, target, k, workers);
  c.found = c.witness.has_value();
  return c;
}

inline TheoremCheck check_theorem2(const FieldTables& t, const ElementSet& a, const ElementSet& b, std::uint32_t k,
                                   FieldElement h, unsigned workers = 1) {
  if (k < 3) throw Error(Errc::KTooSmall, "k must be >= 3");
  if (h.is_zero()) throw Error(Errc::ZeroShift, "h must be nonzero");
  if (!t.valid(h)) throw Error(Errc::BadElement, "h outside the field");
  TheoremCheck c;
  c.kind = ProgressionKind::Geometric;
  c.k = k;
  c.q = t.q();
  c.h = h;
  c.card_a = a.size();
  c.card_b = b.size();
  const std::uint64_t ab = c.card_a * c.card_b;
  c.threshold_value = theorem2_threshold_value(k, t.q());
  c.simplified_threshold_value = 8.0 * std::pow(double(t.q()), 2.0 - 1.0 / (k - 1));
  c.threshold_satisfied = theorem2_threshold(ab, k, t.q());
  c.simplified_threshold_satisfied = theorem2_simplified_threshold(ab, k, t.q());
  const ElementSet target = shifted_productset(t, a, b, h);
  c.target_size = target.size();
  c.witness = find_gp_of_length(t, target, k, workers);
  c.found = c.witness.has_value();
  return c;
}

}  // namespace progset
