#pragma once

// Desk-scale experiments: density sweeps against the theorem thresholds,
// longest-progression growth across field sizes, and the quadratic-residue
// productset observation. Every trial draws its sets from a seed derived from
// (base seed, q, grid index, trial index), and results are assembled in key
// order, so output does not depend on the worker count.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "progset/counts.hpp"
#include "progset/element_set.hpp"
#include "progset/error.hpp"
#include "progset/field.hpp"
#include "progset/generators.hpp"
#include "progset/parallel.hpp"
#include "progset/productsets.hpp"
#include "progset/progressions.hpp"
#include "progset/random.hpp"

namespace progset {

inline constexpr std::uint32_t kMaxExperimentQ = 1u << 14;

template <class Fn>
auto parallel_items(std::size_t n, unsigned workers, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  auto parts = parallel_chunks(n, workers, [&](const Chunk& c) {
    std::vector<R> out;
    for (std::size_t i = c.begin; i < c.end; ++i) out.push_back(fn(i));
    return out;
  });
  std::vector<R> all;
  all.reserve(n);
  for (auto& p : parts)
    for (auto& r : p) all.push_back(std::move(r));
  return all;
}

// ---------------------------------------------------------------- sweep

struct SweepConfig {
  ProgressionKind kind = ProgressionKind::Arithmetic;
  std::uint32_t p = 0;
  std::uint32_t n = 1;
  std::uint32_t k = 3;
  std::uint32_t h = 1;  // shift index, geometric sweeps only
  std::vector<double> densities;
  std::uint32_t trials = 1;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct SweepRow {
  double density = 0;
  std::uint32_t trials = 0;
  std::uint32_t successes = 0;
  double success_fraction = 0;
  double mean_longest = 0;
  double mean_card_product = 0;
  std::uint32_t guaranteed_pairs = 0;  // trials meeting the exact hypothesis
  std::uint32_t guaranteed_successes = 0;
  std::uint32_t counterexamples = 0;
};

struct SweepCounterexample {
  double density = 0;
  std::uint32_t trial = 0;
  std::uint64_t seed_a = 0, seed_b = 0;
  std::uint64_t card_a = 0, card_b = 0;
};

struct SweepResult {
  ProgressionKind kind = ProgressionKind::Arithmetic;
  std::uint32_t q = 0, k = 0, h = 0;
  double threshold_density = 0;        // alpha with alpha^2 q^2 equal to the theorem bound
  double exact_threshold_density = 0;  // smallest c/q with #A = #B = c meeting the exact check
  std::vector<SweepRow> rows;
  std::vector<SweepCounterexample> counterexamples;

  bool sound() const noexcept { return counterexamples.empty(); }
};

inline SweepResult threshold_sweep(const SweepConfig& cfg) {
  if (cfg.trials == 0) throw Error(Errc::ConfigError, "trials must be >= 1");
  if (cfg.densities.empty()) throw Error(Errc::ConfigError, "density grid is empty");
  for (double d : cfg.densities)
    if (!(d > 0.0 && d <= 1.0)) throw Error(Errc::ConfigError, "densities must lie in (0, 1]");
  const FieldTables t = build_field(cfg.p, cfg.n);
  if (t.q() > kMaxExperimentQ) throw Error(Errc::ConfigError, "sweeps are limited to q <= 2^14");
  const bool ap = cfg.kind == ProgressionKind::Arithmetic;
  if (cfg.k < 3) throw Error(Errc::ConfigError, "k must be >= 3");
  if (ap && cfg.k >= t.p()) throw Error(Errc::ConfigError, "k must be < p for arithmetic sweeps");
  if (!ap && (cfg.h == 0 || cfg.h >= t.q())) throw Error(Errc::ConfigError, "h must be a nonzero element index");

  SweepResult res;
  res.kind = cfg.kind;
  res.q = t.q();
  res.k = cfg.k;
  res.h = ap ? 0 : cfg.h;
  const double bound = ap ? theorem1_threshold_value(cfg.k, t.q()) : theorem2_threshold_value(cfg.k, t.q());
  res.threshold_density = std::sqrt(bound) / t.q();
  res.exact_threshold_density = 0;
  for (std::uint64_t c = 1; c <= t.q(); ++c) {
    const bool ok = ap ? theorem1_threshold(c * c, cfg.k, t.q()) : theorem2_threshold(c * c, cfg.k, t.q());
    if (ok) {
      res.exact_threshold_density = double(c) / t.q();
      break;
    }
  }
  if (res.exact_threshold_density == 0) res.exact_threshold_density = INFINITY;

  struct Trial {
    bool satisfied = false, found = false;
    std::uint32_t longest = 0;
    std::uint64_t card_a = 0, card_b = 0, seed_a = 0, seed_b = 0;
  };
  const std::size_t per = cfg.trials;
  const auto trials = parallel_items(cfg.densities.size() * per, cfg.workers, [&](std::size_t i) {
    const std::size_t di = i / per, tr = i % per;
    Trial out;
    out.seed_a = derive_seed(cfg.seed, {t.q(), di, tr, 0});
    out.seed_b = derive_seed(cfg.seed, {t.q(), di, tr, 1});
    const ElementSet a = random_subset(t, cfg.densities[di], out.seed_a);
    const ElementSet b = random_subset(t, cfg.densities[di], out.seed_b);
    out.card_a = a.size();
    out.card_b = b.size();
    if (ap) {
      const TheoremCheck c = check_theorem1(t, a, b, cfg.k);
      out.satisfied = c.threshold_satisfied;
      out.found = c.found;
      out.longest = longest_ap_length(t, productset(t, a, b));
    } else {
      const TheoremCheck c = check_theorem2(t, a, b, cfg.k, {cfg.h});
      out.satisfied = c.threshold_satisfied;
      out.found = c.found;
      out.longest = longest_gp_length(t, shifted_productset(t, a, b, {cfg.h}));
    }
    return out;
  });

  for (std::size_t di = 0; di < cfg.densities.size(); ++di) {
    SweepRow row;
    row.density = cfg.densities[di];
    row.trials = cfg.trials;
    double longest = 0, cards = 0;
    for (std::size_t tr = 0; tr < per; ++tr) {
      const Trial& x = trials[di * per + tr];
      row.successes += x.found;
      longest += x.longest;
      cards += double(x.card_a) * double(x.card_b);
      if (x.satisfied) {
        ++row.guaranteed_pairs;
        row.guaranteed_successes += x.found;
        if (!x.found) {
          ++row.counterexamples;
          res.counterexamples.push_back({row.density, static_cast<std::uint32_t>(tr), x.seed_a, x.seed_b, x.card_a,
                                         x.card_b});
        }
      }
    }
    row.success_fraction = double(row.successes) / row.trials;
    row.mean_longest = longest / row.trials;
    row.mean_card_product = cards / row.trials;
    res.rows.push_back(row);
  }
  return res;
}

// ---------------------------------------------------------------- growth

struct GrowthConfig {
  ProgressionKind kind = ProgressionKind::Arithmetic;
  std::vector<std::uint32_t> qs;
  double alpha = 0.5, beta = 0.5;
  std::uint32_t trials = 1;
  std::uint64_t seed = 1;
  std::uint32_t h = 1;
  unsigned workers = 1;
};

struct GrowthRow {
  std::uint32_t q = 0, p = 0, n = 0;
  double log_q = 0;
  double mean_longest = 0;
  std::uint32_t min_longest = 0, max_longest = 0;
};

struct GrowthTable {
  ProgressionKind kind = ProgressionKind::Arithmetic;
  std::vector<GrowthRow> rows;
  double kappa_slope = 0;   // least-squares slope of min length against log q
  double kappa_origin = 0;  // least-squares fit of min length = kappa log q
};

inline GrowthTable growth_experiment(const GrowthConfig& cfg) {
  if (cfg.qs.empty()) throw Error(Errc::ConfigError, "no field sizes given");
  if (cfg.trials == 0) throw Error(Errc::ConfigError, "trials must be >= 1");
  if (!(cfg.alpha > 0 && cfg.alpha <= 1) || !(cfg.beta > 0 && cfg.beta <= 1))
    throw Error(Errc::ConfigError, "alpha and beta must lie in (0, 1]");
  std::vector<FieldTables> fields;
  for (std::uint32_t q : cfg.qs) {
    if (q > kMaxExperimentQ) throw Error(Errc::ConfigError, "growth runs are limited to q <= 2^14");
    if (nt::prime_power(q).first == 0) throw Error(Errc::ConfigError, std::to_string(q) + " is not a prime power");
    if (cfg.kind == ProgressionKind::Geometric && (cfg.h == 0 || cfg.h >= q))
      throw Error(Errc::ConfigError, "h must be a nonzero element index");
    fields.push_back(build_field_q(q));
  }
  const bool ap = cfg.kind == ProgressionKind::Arithmetic;
  const std::size_t per = cfg.trials;
  const auto lengths = parallel_items(fields.size() * per, cfg.workers, [&](std::size_t i) {
    const FieldTables& t = fields[i / per];
    const std::size_t tr = i % per;
    const ElementSet a = random_subset(t, cfg.alpha, derive_seed(cfg.seed, {t.q(), tr, 0}));
    const ElementSet b = random_subset(t, cfg.beta, derive_seed(cfg.seed, {t.q(), tr, 1}));
    return ap ? longest_ap_length(t, productset(t, a, b))
              : longest_gp_length(t, shifted_productset(t, a, b, {cfg.h}));
  });
  GrowthTable out;
  out.kind = cfg.kind;
  for (std::size_t fi = 0; fi < fields.size(); ++fi) {
    GrowthRow row;
    row.q = fields[fi].q();
    row.p = fields[fi].p();
    row.n = fields[fi].n();
    row.log_q = std::log(double(row.q));
    row.min_longest = lengths[fi * per];
    double sum = 0;
    for (std::size_t tr = 0; tr < per; ++tr) {
      const std::uint32_t v = lengths[fi * per + tr];
      sum += v;
      row.min_longest = std::min(row.min_longest, v);
      row.max_longest = std::max(row.max_longest, v);
    }
    row.mean_longest = sum / per;
    out.rows.push_back(row);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(out.rows.size());
  for (const auto& r : out.rows) {
    sx += r.log_q;
    sy += r.min_longest;
    sxx += r.log_q * r.log_q;
    sxy += r.log_q * r.min_longest;
  }
  out.kappa_origin = sxx > 0 ? sxy / sxx : 0;
  const double den = n * sxx - sx * sx;
  out.kappa_slope = (out.rows.size() >= 2 && std::abs(den) > 1e-12) ? (n * sxy - sx * sy) / den : 0;
  return out;
}

// ---------------------------------------------------------------- QR

struct QRRow {
  std::uint32_t p = 0;
  std::uint32_t qr_size = 0;
  bool closed = false;  // QR * QR == QR
  std::uint32_t longest_ap = 0;
  double p_quarter = 0;
  double p_half = 0;
  bool within_sanity = false;  // longest_ap <= sqrt(p)
  std::optional<ProgressionWitness> witness;
};

struct QRTable {
  std::vector<QRRow> rows;
  bool all_closed = true;
  bool all_within_sanity = true;
};

inline QRTable qr_experiment(const std::vector<std::uint32_t>& primes, unsigned workers = 1) {
  if (primes.empty()) throw Error(Errc::ConfigError, "no primes given");
  for (std::uint32_t p : primes) {
    if (p == 2 || !nt::is_prime(p)) throw Error(Errc::ConfigError, std::to_string(p) + " is not an odd prime");
    if (p > kMaxExperimentQ) throw Error(Errc::ConfigError, "QR experiment limited to p <= 2^14");
  }
  auto rows = parallel_items(primes.size(), workers, [&](std::size_t i) {
    const FieldTables t = build_field(primes[i]);
    const ElementSet qr = quadratic_residues(t);
    QRRow row;
    row.p = t.p();
    row.qr_size = static_cast<std::uint32_t>(qr.size());
    row.closed = productset(t, qr, qr) == qr;
    if (qr.size() >= 2) {
      auto lp = longest_ap(t, qr);
      row.longest_ap = lp.length;
      row.witness = lp.witness;
    } else {
      row.longest_ap = static_cast<std::uint32_t>(qr.size());
    }
    row.p_quarter = std::pow(double(row.p), 0.25);
    row.p_half = std::sqrt(double(row.p));
    row.within_sanity = std::uint64_t(row.longest_ap) * row.longest_ap <= row.p;
    return row;
  });
  QRTable out;
  out.rows = std::move(rows);
  for (const auto& r : out.rows) {
    out.all_closed = out.all_closed && r.closed;
    out.all_within_sanity = out.all_within_sanity && r.within_sanity;
  }
  return out;
}

}  // namespace progset
