#pragma once

// Arithmetic and geometric progression search inside subsets of F_q.
//
// Both searches fix the step mu and walk the orbits of the map x -> x + mu
// (additive cosets of F_p * mu, length p) or x -> x * mu (cosets of <mu>,
// length ord(mu)). On each orbit the longest run of members starting at
// every point is computed circularly in one backwards pass, so a full scan
// over all mu costs O(q^2).
//
// Witnesses are canonical: smallest dlog(mu) first, then smallest lambda index.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "progset/element_set.hpp"
#include "progset/error.hpp"
#include "progset/field.hpp"
#include "progset/parallel.hpp"

namespace progset {

enum class ProgressionKind { Arithmetic, Geometric };

struct ProgressionWitness {
  ProgressionKind kind = ProgressionKind::Arithmetic;
  FieldElement lambda;
  FieldElement mu;
  std::uint32_t k = 0;
  std::vector<FieldElement> terms;

  friend bool operator==(const ProgressionWitness&, const ProgressionWitness&) = default;
};

struct LongestProgression {
  std::uint32_t length = 0;
  ProgressionWitness witness;
};

inline ProgressionWitness make_witness(const FieldTables& t, ProgressionKind kind, FieldElement lambda,
                                       FieldElement mu, std::uint32_t k) {
  ProgressionWitness w{kind, lambda, mu, k, {}};
  w.terms.reserve(k);
  FieldElement x = lambda;
  for (std::uint32_t j = 0; j < k; ++j) {
    w.terms.push_back(x);
    x = kind == ProgressionKind::Arithmetic ? t.add(x, mu) : t.mul(x, mu);
  }
  return w;
}

/// Re-derives every term from (lambda, mu) and checks distinctness and membership.
inline bool validate_witness(const FieldTables& t, const ProgressionWitness& w, const ElementSet& s) {
  if (w.terms.size() != w.k || w.k == 0) return false;
  if (!t.valid(w.lambda) || !t.valid(w.mu)) return false;
  if (w.kind == ProgressionKind::Arithmetic && w.k > 1 && w.mu.is_zero()) return false;
  if (w.kind == ProgressionKind::Geometric && (w.lambda.is_zero() || w.mu.is_zero())) return false;
  for (std::uint32_t j = 0; j < w.k; ++j) {
    const FieldElement expect = w.kind == ProgressionKind::Arithmetic
                                    ? t.add(w.lambda, t.mul(t.from_int(j), w.mu))
                                    : t.mul(w.lambda, t.pow(w.mu, j));
    if (w.terms[j] != expect || !s.contains(expect)) return false;
  }
  std::vector<std::uint32_t> idx;
  for (auto x : w.terms) idx.push_back(x.idx);
  std::sort(idx.begin(), idx.end());
  return std::adjacent_find(idx.begin(), idx.end()) == idx.end();
}

/// M = { mu in F_q^* : 1, mu, ..., mu^(k-1) pairwise distinct } = { mu : ord(mu) >= k }.
inline ElementSet compute_m_set(const FieldTables& t, std::uint32_t k) {
  if (k < 1) throw Error(Errc::KTooSmall, "k must be >= 1");
  ElementSet m(t.q());
  for (std::uint32_t x = 1; x < t.q(); ++x)
    if (t.order({x}) >= k) m.insert(x);
  return m;
}

namespace detail {

struct MuScan {
  std::uint32_t max_run = 0;
  std::uint32_t lambda_at_max = 0;
  std::uint32_t first_lambda_k = std::numeric_limits<std::uint32_t>::max();
};

// run[i] = number of consecutive members starting at cycle[i], capped at the cycle length.
inline void circular_runs(std::span<const std::uint32_t> cycle, const ElementSet& s, std::vector<std::uint32_t>& run) {
  const std::size_t len = cycle.size();
  run.assign(len, 0);
  std::size_t hole = len;
  for (std::size_t i = 0; i < len; ++i)
    if (!s.contains(cycle[i])) {
      hole = i;
      break;
    }
  if (hole == len) {
    std::fill(run.begin(), run.end(), static_cast<std::uint32_t>(len));
    return;
  }
  std::uint32_t cur = 0;
  for (std::size_t step = 1; step <= len; ++step) {
    const std::size_t i = (hole + len - step) % len;
    cur = s.contains(cycle[i]) ? cur + 1 : 0;
    run[i] = cur;
  }
}

inline void fold_cycle(std::span<const std::uint32_t> cycle, const std::vector<std::uint32_t>& run,
                       std::uint32_t k_needed, MuScan& out) {
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const std::uint32_t r = run[i], lam = cycle[i];
    if (r > out.max_run || (r == out.max_run && r > 0 && lam < out.lambda_at_max)) {
      out.max_run = r;
      out.lambda_at_max = lam;
    }
    if (k_needed > 0 && r >= k_needed && lam < out.first_lambda_k) out.first_lambda_k = lam;
  }
}

inline MuScan scan_ap_mu(const FieldTables& t, const ElementSet& s, FieldElement mu, std::uint32_t k_needed,
                         std::vector<std::uint32_t>& cycle, std::vector<std::uint32_t>& run,
                         std::vector<std::uint8_t>& seen) {
  MuScan out;
  const std::uint32_t p = t.p(), q = t.q();
  if (t.n() == 1) {
    cycle.resize(p);
    std::uint32_t x = 0;
    for (std::uint32_t i = 0; i < p; ++i) {
      cycle[i] = x;
      x += mu.idx;
      if (x >= p) x -= p;
    }
    circular_runs(cycle, s, run);
    fold_cycle(cycle, run, k_needed, out);
    return out;
  }
  seen.assign(q, 0);
  for (std::uint32_t start = 0; start < q; ++start) {
    if (seen[start]) continue;
    cycle.clear();
    FieldElement x{start};
    for (std::uint32_t i = 0; i < p; ++i) {
      cycle.push_back(x.idx);
      seen[x.idx] = 1;
      x = t.add(x, mu);
    }
    circular_runs(cycle, s, run);
    fold_cycle(cycle, run, k_needed, out);
  }
  return out;
}

inline MuScan scan_gp_mu(const FieldTables& t, const ElementSet& s, std::uint32_t mu_log, std::uint32_t k_needed,
                         std::vector<std::uint32_t>& cycle, std::vector<std::uint32_t>& run) {
  MuScan out;
  const std::uint32_t order = t.group_order();
  const std::uint32_t cosets = std::gcd(mu_log, order);
  const std::uint32_t len = order / cosets;
  const auto exp = t.exp_table();
  for (std::uint32_t r = 0; r < cosets; ++r) {
    cycle.resize(len);
    std::uint32_t e = r;
    for (std::uint32_t i = 0; i < len; ++i) {
      cycle[i] = exp[e];
      e += mu_log;
      if (e >= order) e -= order;
    }
    circular_runs(cycle, s, run);
    fold_cycle(cycle, run, k_needed, out);
  }
  return out;
}

struct ScanResult {
  bool any = false;
  std::uint32_t mu_log = 0;
  MuScan scan;
};

// Scans mu = g^j for j in [first_log, q-1) in increasing j. In `find` mode
// (k_needed > 0) returns the first mu with a run >= k_needed; otherwise the
// first mu attaining the maximal run. Scanning stops early once `cap` is hit.
template <class ScanMu>
ScanResult scan_all_mu(const FieldTables& t, std::uint32_t first_log, std::uint32_t k_needed, std::uint32_t cap,
                       unsigned workers, ScanMu&& scan_mu) {
  const std::uint32_t order = t.group_order();
  if (first_log >= order) return {};
  const std::size_t count = order - first_log;
  std::atomic<std::size_t> stop_chunk{std::numeric_limits<std::size_t>::max()};
  auto chunk_results = parallel_chunks(count, workers, [&](const Chunk& c) {
    ScanResult best;
    if (c.index > stop_chunk.load()) return best;
    std::vector<std::uint32_t> cycle, run;
    std::vector<std::uint8_t> seen;
    for (std::size_t i = c.begin; i < c.end; ++i) {
      const std::uint32_t j = first_log + static_cast<std::uint32_t>(i);
      MuScan m = scan_mu(j, cycle, run, seen);
      if (k_needed > 0) {
        if (m.first_lambda_k != std::numeric_limits<std::uint32_t>::max()) {
          best = {true, j, m};
          break;
        }
      } else if (!best.any || m.max_run > best.scan.max_run) {
        best = {true, j, m};
        if (m.max_run >= cap) break;
      }
    }
    const bool done = k_needed > 0 ? best.any : (best.any && best.scan.max_run >= cap);
    if (done) {
      std::size_t cur = stop_chunk.load();
      while (c.index < cur && !stop_chunk.compare_exchange_weak(cur, c.index)) {
      }
    }
    return best;
  });
  ScanResult out;
  for (const auto& r : chunk_results) {
    if (!r.any) continue;
    if (k_needed > 0) return r;
    if (!out.any || r.scan.max_run > out.scan.max_run) out = r;
  }
  return out;
}

}  // namespace detail

/// First k-term AP in S in canonical order, or nullopt.
inline std::optional<ProgressionWitness> find_ap_of_length(const FieldTables& t, const ElementSet& s, std::uint32_t k,
                                                           unsigned workers = 1) {
  if (s.q() != t.q()) throw Error(Errc::FieldMismatch, "set and field sizes differ");
  if (k == 0) throw Error(Errc::KTooSmall, "k must be >= 1");
  if (k > t.p())
    throw Error(Errc::KExceedsCharacteristic, "k=" + std::to_string(k) + " exceeds characteristic " + std::to_string(t.p()));
  if (s.empty()) return std::nullopt;
  if (k == 1) return make_witness(t, ProgressionKind::Arithmetic, {s.indices().front()}, t.one(), 1);
  auto r = detail::scan_all_mu(t, 0, k, t.p(), workers,
                               [&](std::uint32_t j, auto& cycle, auto& run, auto& seen) {
                                 return detail::scan_ap_mu(t, s, t.exp(j), k, cycle, run, seen);
                               });
  if (!r.any) return std::nullopt;
  return make_witness(t, ProgressionKind::Arithmetic, {r.scan.first_lambda_k}, t.exp(r.mu_log), k);
}

inline LongestProgression longest_ap(const FieldTables& t, const ElementSet& s, unsigned workers = 1) {
  if (s.q() != t.q()) throw Error(Errc::FieldMismatch, "set and field sizes differ");
  if (s.size() < 2) throw Error(Errc::SetTooSmall, "longest_ap needs at least two elements");
  auto r = detail::scan_all_mu(t, 0, 0, t.p(), workers,
                               [&](std::uint32_t j, auto& cycle, auto& run, auto& seen) {
                                 return detail::scan_ap_mu(t, s, t.exp(j), 0, cycle, run, seen);
                               });
  const std::uint32_t len = r.scan.max_run;
  return {len, make_witness(t, ProgressionKind::Arithmetic, {r.scan.lambda_at_max}, t.exp(r.mu_log), len)};
}

inline std::optional<ProgressionWitness> find_gp_of_length(const FieldTables& t, const ElementSet& s, std::uint32_t k,
                                                           unsigned workers = 1) {
  if (s.q() != t.q()) throw Error(Errc::FieldMismatch, "set and field sizes differ");
  if (k == 0) throw Error(Errc::KTooSmall, "k must be >= 1");
  const ElementSet nz = s.without_zero();
  if (nz.empty() || k > t.group_order()) return std::nullopt;
  if (k == 1) return make_witness(t, ProgressionKind::Geometric, {nz.indices().front()}, t.one(), 1);
  auto r = detail::scan_all_mu(t, 1, k, t.group_order(), workers,
                               [&](std::uint32_t j, auto& cycle, auto& run, auto&) {
                                 return detail::scan_gp_mu(t, nz, j, k, cycle, run);
                               });
  if (!r.any) return std::nullopt;
  return make_witness(t, ProgressionKind::Geometric, {r.scan.first_lambda_k}, t.exp(r.mu_log), k);
}

inline LongestProgression longest_gp(const FieldTables& t, const ElementSet& s, unsigned workers = 1) {
  if (s.q() != t.q()) throw Error(Errc::FieldMismatch, "set and field sizes differ");
  const ElementSet nz = s.without_zero();
  if (nz.empty()) throw Error(Errc::SetTooSmall, "longest_gp needs a nonzero element");
  LongestProgression best{1, make_witness(t, ProgressionKind::Geometric, {nz.indices().front()}, t.one(), 1)};
  auto r = detail::scan_all_mu(t, 1, 0, t.group_order(), workers,
                               [&](std::uint32_t j, auto& cycle, auto& run, auto&) {
                                 return detail::scan_gp_mu(t, nz, j, 0, cycle, run);
                               });
  if (r.any && r.scan.max_run >= 2) {
    const std::uint32_t len = r.scan.max_run;
    best = {len, make_witness(t, ProgressionKind::Geometric, {r.scan.lambda_at_max}, t.exp(r.mu_log), len)};
  }
  return best;
}

/// Longest AP length with the degenerate sizes 0 and 1 allowed (no throw).
inline std::uint32_t longest_ap_length(const FieldTables& t, const ElementSet& s, unsigned workers = 1) {
  if (s.size() < 2) return static_cast<std::uint32_t>(s.size());
  return longest_ap(t, s, workers).length;
}

inline std::uint32_t longest_gp_length(const FieldTables& t, const ElementSet& s, unsigned workers = 1) {
  if (s.without_zero().empty()) return 0;
  return longest_gp(t, s, workers).length;
}

}  // namespace progset
