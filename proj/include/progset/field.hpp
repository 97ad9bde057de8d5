#pragma once

// Table-driven arithmetic for GF(p^n), q <= a configurable cap.
//
// Elements are stored as a single index idx = a_0 + a_1 p + ... + a_{n-1} p^{n-1}
// where a_i are the coefficients of the element in the polynomial basis
// F_p[x] / (modulus). The prime subfield is therefore idx in [0, p), and the
// integer k maps to the element k mod p.
//
// Multiplication goes through exp/dlog tables against the smallest-index
// generator. Prime-field addition is plain modular addition; extension-field
// addition uses a Zech table built once from coefficient arithmetic.

#include <cstdint>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "progset/error.hpp"
#include "progset/number_theory.hpp"

namespace progset {

inline constexpr std::uint32_t kDefaultMaxQ = 1u << 20;

struct FieldElement {
  std::uint32_t idx = 0;

  constexpr bool is_zero() const noexcept { return idx == 0; }
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

struct FieldSpec {
  std::uint32_t p = 0;
  std::uint32_t n = 1;
  /// Coefficients a_0..a_n of the monic modulus, low degree first. Empty when n == 1.
  std::vector<std::uint32_t> modulus;
  std::uint32_t q = 0;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

namespace poly {

using Poly = std::vector<std::uint64_t>;  // low degree first, trimmed

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mod(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t inv_lead = nt::powmod(m.back(), p - 2, p);
  while (a.size() > dm) {
    const std::uint64_t c = a.back() * inv_lead % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    }
    trim(a);
  }
  return a;
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return mod(std::move(r), m, p);
}

inline Poly powmod(Poly b, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly r{1};
  b = mod(std::move(b), m, p);
  while (e) {
    if (e & 1) r = mulmod(r, b, m, p);
    b = mulmod(b, b, m, p);
    e >>= 1;
  }
  return r;
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = mod(std::move(a), b, p);
    std::swap(a, b);
  }
  return a;
}

inline std::uint64_t eval(const Poly& a, std::uint64_t x, std::uint64_t p) {
  std::uint64_t r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % p;
  return r;
}

// Monic f of degree n >= 2. Root test for n <= 3, Rabin's gcd-with-Frobenius
// test otherwise.
inline bool is_irreducible(const Poly& f, std::uint64_t p) {
  const std::size_t n = f.size() - 1;
  if (n <= 3) {
    for (std::uint64_t x = 0; x < p; ++x)
      if (eval(f, x, p) == 0) return false;
    return true;
  }
  // frob[i] = x^(p^i) mod f
  std::vector<Poly> frob(n + 1);
  frob[0] = mod(Poly{0, 1}, f, p);
  for (std::size_t i = 1; i <= n; ++i) frob[i] = powmod(frob[i - 1], p, f, p);
  if (frob[n] != frob[0]) return false;
  for (std::uint64_t r : nt::prime_factors(n)) {
    Poly h = frob[n / r];
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    if (gcd(f, h, p).size() != 1) return false;
  }
  return true;
}

}  // namespace poly

namespace detail {

inline std::vector<std::uint32_t> to_digits(std::uint32_t idx, const FieldSpec& s) {
  std::vector<std::uint32_t> d(s.n, 0);
  for (std::uint32_t i = 0; i < s.n; ++i) {
    d[i] = idx % s.p;
    idx /= s.p;
  }
  return d;
}

inline std::uint32_t from_digits(const std::vector<std::uint64_t>& d, const FieldSpec& s) {
  std::uint64_t idx = 0;
  for (std::size_t i = std::min<std::size_t>(d.size(), s.n); i-- > 0;) idx = idx * s.p + d[i];
  return static_cast<std::uint32_t>(idx);
}

/// Product by coefficient arithmetic; independent of any tables.
inline std::uint32_t coeff_mul(std::uint32_t x, std::uint32_t y, const FieldSpec& s) {
  if (s.n == 1) return static_cast<std::uint32_t>(std::uint64_t(x) * y % s.p);
  auto dx = to_digits(x, s), dy = to_digits(y, s);
  poly::Poly a(dx.begin(), dx.end()), b(dy.begin(), dy.end()), m(s.modulus.begin(), s.modulus.end());
  poly::trim(a);
  poly::trim(b);
  return from_digits(poly::mulmod(a, b, m, s.p), s);
}

inline std::uint32_t coeff_add(std::uint32_t x, std::uint32_t y, const FieldSpec& s) {
  if (s.n == 1) return (x + y) % s.p;
  std::uint32_t out = 0, scale = 1;
  for (std::uint32_t i = 0; i < s.n; ++i) {
    out += ((x % s.p + y % s.p) % s.p) * scale;
    x /= s.p;
    y /= s.p;
    scale *= s.p;
  }
  return out;
}

inline std::uint32_t coeff_pow(std::uint32_t x, std::uint64_t e, const FieldSpec& s) {
  std::uint32_t r = 1;
  while (e) {
    if (e & 1) r = coeff_mul(r, x, s);
    x = coeff_mul(x, x, s);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Smallest-index element of multiplicative order q - 1, by power tests
/// against the prime factors of q - 1.
inline FieldElement find_generator(const FieldSpec& s) {
  const std::uint32_t order = s.q - 1;
  const auto factors = nt::prime_factors(order);
  for (std::uint32_t cand = 1; cand < s.q; ++cand) {
    bool ok = true;
    for (std::uint64_t r : factors) {
      if (detail::coeff_pow(cand, order / r, s) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return FieldElement{cand};
  }
  return FieldElement{1};  // unreachable for a valid field
}

struct TablesTestAccess;

class FieldTables {
 public:
  static constexpr std::uint32_t kZeroLog = 0xFFFFFFFFu;

  explicit FieldTables(FieldSpec spec) : spec_(std::move(spec)) {
    const std::uint32_t q = spec_.q, order = q - 1;
    gen_ = find_generator(spec_);
    exp_.assign(2 * std::size_t(order), 0);
    dlog_.assign(q, kZeroLog);
    std::uint32_t e = 1;
    for (std::uint32_t j = 0; j < order; ++j) {
      exp_[j] = exp_[j + order] = e;
      dlog_[e] = j;
      e = detail::coeff_mul(e, gen_.idx, spec_);
    }
    if (spec_.n > 1) {
      zech_.assign(order, kZeroLog);
      for (std::uint32_t j = 0; j < order; ++j) {
        const std::uint32_t s = detail::coeff_add(1, exp_[j], spec_);
        zech_[j] = s == 0 ? kZeroLog : dlog_[s];
      }
    }
    half_order_ = (spec_.p == 2) ? 0 : order / 2;
  }

  const FieldSpec& spec() const noexcept { return spec_; }
  std::uint32_t q() const noexcept { return spec_.q; }
  std::uint32_t p() const noexcept { return spec_.p; }
  std::uint32_t n() const noexcept { return spec_.n; }
  std::uint32_t group_order() const noexcept { return spec_.q - 1; }
  FieldElement generator() const noexcept { return gen_; }

  FieldElement zero() const noexcept { return {0}; }
  FieldElement one() const noexcept { return {1}; }
  bool valid(FieldElement x) const noexcept { return x.idx < spec_.q; }

  /// The element k * 1.
  FieldElement from_int(std::int64_t k) const noexcept {
    const std::int64_t p = spec_.p;
    return {static_cast<std::uint32_t>(((k % p) + p) % p)};
  }

  FieldElement add(FieldElement x, FieldElement y) const noexcept {
    if (spec_.n == 1) {
      std::uint32_t s = x.idx + y.idx;
      return {s >= spec_.p ? s - spec_.p : s};
    }
    if (x.idx == 0) return y;
    if (y.idx == 0) return x;
    const std::uint32_t order = spec_.q - 1;
    const std::uint32_t a = dlog_[x.idx], b = dlog_[y.idx];
    const std::uint32_t z = zech_[b >= a ? b - a : b + order - a];
    if (z == kZeroLog) return {0};
    return {exp_[a + z]};
  }

  FieldElement neg(FieldElement x) const noexcept {
    if (x.idx == 0) return x;
    if (spec_.n == 1) return {spec_.p - x.idx};
    if (spec_.p == 2) return x;
    return {exp_[dlog_[x.idx] + half_order_]};
  }

  FieldElement sub(FieldElement x, FieldElement y) const noexcept { return add(x, neg(y)); }

  FieldElement mul(FieldElement x, FieldElement y) const noexcept {
    if (x.idx == 0 || y.idx == 0) return {0};
    return {exp_[dlog_[x.idx] + dlog_[y.idx]]};
  }

  FieldElement inv(FieldElement x) const {
    if (x.idx == 0) throw Error(Errc::ZeroInverse, "inverse of zero");
    const std::uint32_t d = dlog_[x.idx];
    return {exp_[d == 0 ? 0 : group_order() - d]};
  }

  FieldElement div(FieldElement x, FieldElement y) const { return mul(x, inv(y)); }

  FieldElement pow(FieldElement x, std::uint64_t e) const noexcept {
    if (x.idx == 0) return {e == 0 ? 1u : 0u};
    return {exp_[(std::uint64_t(dlog_[x.idx]) * (e % group_order())) % group_order()]};
  }

  /// g^j for any j (reduced mod q - 1).
  FieldElement exp(std::uint64_t j) const noexcept { return {exp_[j % group_order()]}; }

  std::uint32_t dlog(FieldElement x) const {
    if (x.idx == 0) throw Error(Errc::DlogOfZero, "discrete log of zero");
    return dlog_[x.idx];
  }

  /// Raw table lookup; kZeroLog for zero.
  std::uint32_t dlog_or_sentinel(FieldElement x) const noexcept { return dlog_[x.idx]; }

  std::uint32_t order(FieldElement x) const {
    const std::uint32_t d = dlog(x);
    return group_order() / std::gcd(d, group_order());
  }

  /// exp table of length 2(q-1) so that exp[a + b] needs no reduction for a, b < q - 1.
  std::span<const std::uint32_t> exp_table() const noexcept { return exp_; }
  std::span<const std::uint32_t> dlog_table() const noexcept { return dlog_; }

 private:
  friend struct TablesTestAccess;

  FieldSpec spec_;
  FieldElement gen_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> dlog_;
  std::vector<std::uint32_t> zech_;
  std::uint32_t half_order_ = 0;
};

/// Smallest monic irreducible of degree n, ordering the non-leading
/// coefficients by their base-p value (a_{n-1} most significant).
inline std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t n) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < n; ++i) count *= p;
  for (std::uint64_t v = 0; v < count; ++v) {
    poly::Poly f(n + 1, 0);
    std::uint64_t t = v;
    for (std::uint32_t i = 0; i < n; ++i) {
      f[i] = t % p;
      t /= p;
    }
    f[n] = 1;
    if (f[0] == 0) continue;
    if (poly::is_irreducible(f, p)) return {f.begin(), f.end()};
  }
  throw Error(Errc::ReducibleModulus, "no irreducible polynomial found");  // unreachable
}

inline FieldSpec make_field_spec(std::uint32_t p, std::uint32_t n,
                                 std::optional<std::vector<std::uint32_t>> modulus = std::nullopt,
                                 std::uint32_t max_q = kDefaultMaxQ) {
  if (!nt::is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  if (n < 1) throw Error(Errc::ConfigError, "extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    q *= p;
    if (q > max_q)
      throw Error(Errc::FieldTooLarge, std::to_string(p) + "^" + std::to_string(n) + " exceeds max q " +
                                           std::to_string(max_q));
  }
  FieldSpec s;
  s.p = p;
  s.n = n;
  s.q = static_cast<std::uint32_t>(q);
  if (n == 1) {
    if (modulus && !modulus->empty()) {
      // x + c is accepted for n = 1 but carries no information.
      if (modulus->size() != 2 || (*modulus)[1] != 1)
        throw Error(Errc::BadModulus, "degree-1 modulus must be monic of length 2");
    }
    return s;
  }
  if (modulus) {
    const auto& m = *modulus;
    if (m.size() != n + 1) throw Error(Errc::BadModulus, "modulus must have n+1 coefficients");
    for (auto c : m)
      if (c >= p) throw Error(Errc::BadModulus, "modulus coefficient out of range");
    if (m[n] != 1) throw Error(Errc::BadModulus, "modulus must be monic");
    if (!poly::is_irreducible(poly::Poly(m.begin(), m.end()), p))
      throw Error(Errc::ReducibleModulus, "modulus is reducible over F_" + std::to_string(p));
    s.modulus = m;
  } else {
    s.modulus = default_modulus(p, n);
  }
  return s;
}

inline FieldTables build_field(std::uint32_t p, std::uint32_t n = 1,
                               std::optional<std::vector<std::uint32_t>> modulus = std::nullopt,
                               std::uint32_t max_q = kDefaultMaxQ) {
  return FieldTables(make_field_spec(p, n, std::move(modulus), max_q));
}

/// Builds GF(q) for a prime power q with the default modulus.
inline FieldTables build_field_q(std::uint32_t q, std::uint32_t max_q = kDefaultMaxQ) {
  auto [p, n] = nt::prime_power(q);
  if (p == 0) throw Error(Errc::NotPrime, std::to_string(q) + " is not a prime power");
  return build_field(p, n, std::nullopt, max_q);
}

// Free-function spellings of the table operations.
inline FieldElement element_add(const FieldTables& t, FieldElement x, FieldElement y) { return t.add(x, y); }
inline FieldElement element_mul(const FieldTables& t, FieldElement x, FieldElement y) { return t.mul(x, y); }
inline FieldElement element_inv(const FieldTables& t, FieldElement x) { return t.inv(x); }
inline std::uint32_t dlog(const FieldTables& t, FieldElement x) { return t.dlog(x); }

}  // namespace progset
