// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every selected criterion passes within its time limit.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "progset/cli.hpp"
#include "progset/counts.hpp"
#include "progset/experiments.hpp"
#include "progset/generators.hpp"
#include "progset/progressions.hpp"

using namespace progset;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;  // 0 means untimed
  std::function<Outcome()> run;
};

std::vector<std::uint32_t> odd_primes_up_to(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p : nt::primes_up_to(n))
    if (p != 2) out.push_back(p);
  return out;
}

std::vector<std::uint32_t> prime_powers_up_to(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t q = 2; q <= n; ++q)
    if (nt::prime_power(q).first) out.push_back(q);
  return out;
}

unsigned hw_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// ------------------------------------------------------------------ 1

Outcome exact_counts() {
  Outcome o;
  const auto t5 = build_field(5), t7 = build_field(7);
  const auto f5 = ElementSet::full_nonzero(5), f7 = ElementSet::full_nonzero(7);
  // reference values first, from the nested loops
  const std::uint64_t ref_t = oracle::count_T(oracle::Field(t5), f5, f5, 3);
  const std::uint64_t ref_q = oracle::count_Q(oracle::Field(t7), f7, f7, 3, 1);
  o.require(ref_t == 512, "nested-loop T(GF(5)) = " + std::to_string(ref_t));
  o.require(ref_q == 2592, "nested-loop Q(GF(7)) = " + std::to_string(ref_q));
  const auto t = count_ap_solutions(t5, f5, f5, 3);
  const auto q = count_gp_solutions(t7, f7, f7, 3, {1});
  o.require(t.count == ref_t, "T = " + t.count.get_str());
  o.require(q.count == ref_q, "Q = " + q.count.get_str());
  if (o.pass) o.detail = "T=512 Q=2592";
  return o;
}

// ------------------------------------------------------------------ 2

Outcome dual_path() {
  Outcome o;
  std::uint64_t compared = 0;
  for (std::uint32_t p : odd_primes_up_to(11)) {
    const auto t = build_field(p);
    const oracle::Field f(t);
    for (std::uint64_t i = 0; i < 50; ++i) {
      const double da = 0.3 + 0.1 * double(i % 7), db = 0.3 + 0.1 * double((i * 3) % 7);
      const auto a = random_subset(t, da, derive_seed(2, {p, i, 0}));
      const auto b = random_subset(t, db, derive_seed(2, {p, i, 1}));
      const std::string tag = " q=" + std::to_string(p) + " pair " + std::to_string(i);
      if (3 < p) {
        o.require(count_ap_solutions(t, a, b, 3).count == oracle::count_T(f, a, b, 3), "T mismatch" + tag);
        ++compared;
      }
      const std::uint32_t h = 1 + std::uint32_t(i % (p - 1));
      o.require(count_gp_solutions(t, a, b, 3, {h}).count == oracle::count_Q(f, a, b, 3, h), "Q mismatch" + tag);
      ++compared;
    }
  }
  if (o.pass) o.detail = std::to_string(compared) + " counts equal";
  return o;
}

// ------------------------------------------------------------------ 3

Outcome counting_identity() {
  Outcome o;
  double worst = 0;
  for (std::uint32_t p : {5u, 7u}) {
    const auto t = build_field(p);
    const CharacterTable chars(t);
    for (std::uint64_t i = 0; i < 10; ++i) {
      const auto a = random_subset(t, 0.6, derive_seed(3, {p, i, 0}));
      const auto b = random_subset(t, 0.6, derive_seed(3, {p, i, 1}));
      const auto r = verify_counting_identity_ap(chars, a, b, 3, 1e-5);
      o.require(r.passed, "q=" + std::to_string(p) + " pair " + std::to_string(i) + ": " +
                              (r.violation ? r.violation->kind + " at " + r.violation->location : std::string("failed")));
      worst = std::max(worst, r.max_residual);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "20 pairs, max residual %.2e", worst);
  if (o.pass) o.detail = buf;
  return o;
}

// ------------------------------------------------------------------ 4

ElementSet corpus_set(const FieldTables& t, std::uint64_t i, std::uint64_t seed) {
  const std::uint32_t q = t.q();
  switch (i % 6) {
    case 0:
      return random_subset(t, 0.3 + 0.05 * double(i % 5), seed);
    case 1:
      return random_subset(t, 0.7 + 0.05 * double(i % 5), seed);
    case 2:
      return t.p() != 2 ? quadratic_residues(t) : random_subset(t, 0.5, seed);
    case 3: {
      std::vector<std::uint32_t> divs;
      for (std::uint32_t d = 2; d <= q - 1; ++d)
        if ((q - 1) % d == 0) divs.push_back(d);
      return multiplicative_subgroup(t, divs[seed % divs.size()]);
    }
    case 4:
      if (t.n() == 1) {
        const std::uint32_t lo = std::uint32_t(seed % (q / 2)), hi = lo + q / 2;
        return interval_set(t, lo, hi);
      }
      return random_subset(t, 0.5, seed);
    default:
      return i % 2 ? ElementSet::full(q) : ElementSet::full_nonzero(q);
  }
}

Outcome proven_inequalities() {
  Outcome o;
  std::uint64_t t_cases = 0, q_cases = 0;
  for (std::uint32_t q : {5u, 7u, 9u, 11u, 13u, 25u, 27u, 49u, 101u}) {
    const auto t = build_field_q(q);
    for (std::uint32_t k : {3u, 4u, 5u}) {
      if (k >= t.p()) continue;
      for (std::uint64_t i = 0; i < 12; ++i) {
        const auto a = corpus_set(t, i, derive_seed(4, {q, k, i, 0}));
        const auto b = corpus_set(t, i + 1 + k, derive_seed(4, {q, k, i, 1}));
        const std::uint32_t h = 1 + std::uint32_t(derive_seed(4, {q, k, i, 2}) % (q - 1));
        const std::string tag = " q=" + std::to_string(q) + " k=" + std::to_string(k) + " i=" + std::to_string(i);
        const auto tr = count_ap_solutions(t, a, b, k);
        o.require(tr.inequality_holds, "T inequality violated" + tag);
        const auto qr = count_gp_solutions(t, a, b, k, {h});
        o.require(qr.inequality_holds, "Q inequality violated" + tag);
        t_cases += 1;
        q_cases += 1;
      }
    }
  }
  o.require(t_cases >= 200, "T corpus has only " + std::to_string(t_cases) + " instances");
  if (o.pass) o.detail = std::to_string(t_cases) + " T and " + std::to_string(q_cases) + " Q instances, 0 violations";
  return o;
}

// ------------------------------------------------------------------ 5

Outcome weil_suites() {
  Outcome o;
  auto take = [&](const PropertyReport& r, const std::string& tag) {
    o.require(r.passed, tag + ": " + (r.violation ? r.violation->kind + " at " + r.violation->location : std::string("failed")));
  };
  const unsigned w = hw_workers();
  for (std::uint32_t p : {5u, 7u, 31u}) {
    const auto t = build_field(p);
    const CharacterTable chars(t);
    take(verify_weil_bound_ap(chars, 3, TupleMode::Exhaustive, 0, 1, w), "weil q=" + std::to_string(p));
  }
  const auto t7 = build_field(7);
  const CharacterTable c7(t7);
  for (std::uint32_t h : {1u, 2u})
    take(verify_gp_structure_bound(c7, 3, {h}, TupleMode::Exhaustive, 0, 1, w), "gp q=7 h=" + std::to_string(h));
  const auto t101 = build_field(101);
  const CharacterTable c101(t101);
  take(verify_weil_bound_ap(c101, 4, TupleMode::Sampled, 10'000, 5, w), "sampled weil q=101");
  take(verify_gp_structure_bound(c101, 4, {1}, TupleMode::Sampled, 10'000, 5, w), "sampled gp q=101");
  if (o.pass) o.detail = "8 suites passed";
  return o;
}

// ------------------------------------------------------------------ 6

Outcome cauchy() {
  Outcome o;
  for (std::uint32_t q : {5u, 7u, 9u, 25u, 101u}) {
    const auto t = build_field_q(q);
    const CharacterTable chars(t);
    for (std::uint64_t i = 0; i < 100; ++i) {
      const double d = 0.1 + 0.09 * double(i % 10);
      const auto a = random_subset(t, d, derive_seed(6, {q, i, 0}));
      const auto b = random_subset(t, 1.0 - d * 0.8, derive_seed(6, {q, i, 1}));
      const auto r = verify_cauchy_step(chars, a, b);
      o.require(r.passed, "q=" + std::to_string(q) + " pair " + std::to_string(i));
    }
  }
  const auto t5 = build_field(5);
  const auto eq = verify_cauchy_step(CharacterTable(t5), ElementSet::full_nonzero(5), ElementSet::full_nonzero(5));
  const double sum = std::stod(eq.info_value("sum"));
  o.require(eq.passed && std::abs(sum - 16.0) < 1e-9, "equality case sum " + eq.info_value("sum"));
  if (o.pass) o.detail = "500 pairs, equality case sum 16";
  return o;
}

// ------------------------------------------------------------------ 7

Outcome sweep_soundness() {
  Outcome o;
  std::uint32_t guaranteed = 0;
  for (ProgressionKind kind : {ProgressionKind::Arithmetic, ProgressionKind::Geometric}) {
    SweepConfig c;
    c.kind = kind;
    c.p = 67;
    c.k = 3;
    c.h = 1;
    c.densities = {0.3, 0.5, 0.6, 0.7, 0.82, 0.9, 1.0};
    c.trials = 20;
    c.seed = 7;
    c.workers = hw_workers();
    const auto r = threshold_sweep(c);
    const std::string tag = kind == ProgressionKind::Arithmetic ? "ap" : "gp";
    o.require(r.sound(), tag + ": " + std::to_string(r.counterexamples.size()) + " counterexamples");
    std::uint32_t g = 0;
    for (const auto& row : r.rows) {
      o.require(row.guaranteed_successes == row.guaranteed_pairs, tag + ": guaranteed region success below 1.0");
      g += row.guaranteed_pairs;
    }
    o.require(g > 0, tag + ": no pair reached the guaranteed region");
    guaranteed += g;
  }
  if (o.pass) o.detail = std::to_string(guaranteed) + " guaranteed pairs, all found";
  return o;
}

// ------------------------------------------------------------------ 8

Outcome m_set_exactness() {
  Outcome o;
  std::uint64_t cases = 0;
  for (std::uint32_t q : prime_powers_up_to(512)) {
    const auto t = build_field_q(q);
    const oracle::Field f(t);
    for (std::uint32_t k = 2; k <= 8; ++k) {
      const auto m = compute_m_set(t, k);
      const std::string tag = " q=" + std::to_string(q) + " k=" + std::to_string(k);
      o.require(m == oracle::m_set(f, k), "mismatch" + tag);
      o.require(std::int64_t(m.size()) >= std::int64_t(q) - 1 - std::int64_t(k) * (k - 1) / 2, "size bound" + tag);
      ++cases;
    }
  }
  const auto m7 = compute_m_set(build_field(7), 3);
  const int alt = 7 - 1 - (3 - 1) * (3 - 2) / 2;
  std::cout << "  #M(q=7,k=3) = " << m7.size() << ", q-1-(k-1)(k-2)/2 = " << alt << "\n";
  o.require(m7.size() == 4, "#M(q=7,k=3) = " + std::to_string(m7.size()));
  if (o.pass) o.detail = std::to_string(cases) + " (q,k) cases match";
  return o;
}

// ------------------------------------------------------------------ 9

Outcome search_oracle() {
  Outcome o;
  std::uint64_t sets = 0;
  for (std::uint32_t q : prime_powers_up_to(31)) {
    const auto t = build_field_q(q);
    const oracle::Field f(t);
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto s = random_subset(t, 0.15 + 0.007 * double(i), derive_seed(9, {q, i}));
      const std::string tag = " q=" + std::to_string(q) + " set " + std::to_string(i);
      o.require(longest_ap_length(t, s) == oracle::longest_ap(f, s), "AP length" + tag);
      o.require(longest_gp_length(t, s) == oracle::longest_gp(f, s), "GP length" + tag);
      if (s.size() >= 2) o.require(validate_witness(t, longest_ap(t, s).witness, s), "AP witness" + tag);
      if (!s.without_zero().empty()) o.require(validate_witness(t, longest_gp(t, s).witness, s), "GP witness" + tag);
      ++sets;
    }
  }
  if (o.pass) o.detail = std::to_string(sets) + " sets agree";
  return o;
}

// ------------------------------------------------------------------ 10

Outcome qr_observation() {
  Outcome o;
  const auto tab = qr_experiment(odd_primes_up_to(1009), hw_workers());
  std::cout << "  p  longest  p^(1/4)  p^(1/2)\n";
  std::string over;
  for (const auto& r : tab.rows) {
    char line[96];
    std::snprintf(line, sizeof line, "  %u  %u  %.3f  %.3f%s\n", r.p, r.longest_ap, r.p_quarter, r.p_half,
                  r.within_sanity ? "" : "  above p^(1/2)");
    std::cout << line;
    if (!r.within_sanity) over += (over.empty() ? "" : ",") + std::to_string(r.p);
  }
  o.require(tab.all_closed, "QR * QR != QR for some prime");
  o.require(tab.all_within_sanity, "longest AP in QR(p) exceeds p^(1/2) at p=" + over);
  if (o.pass) o.detail = std::to_string(tab.rows.size()) + " primes";
  return o;
}

// ------------------------------------------------------------------ 11

std::string strip_timing(const std::string& s) {
  static const std::regex timing(R"(\n\s*"timing_ms": [^\n]*)");
  return std::regex_replace(s, timing, "");
}

Outcome worker_determinism() {
  Outcome o;
  const std::vector<std::vector<std::string>> runs = {
      {"sweep", "--kind", "ap", "--p", "67", "--k", "3", "--trials", "5", "--seed", "11"},
      {"sweep", "--kind", "gp", "--p", "67", "--k", "3", "--h", "1", "--trials", "5", "--seed", "11"},
      {"growth", "--qs", "101,211,401", "--trials", "3", "--seed", "11"},
      {"growth", "--kind", "gp", "--qs", "49,101,128", "--trials", "3", "--seed", "11"}};
  std::uint32_t compared = 0;
  for (const auto& base : runs) {
    for (const char* fmt : {"json", "csv"}) {
      std::string reference;
      for (const char* w : {"1", "2", "3", "8"}) {
        auto args = base;
        args.insert(args.end(), {"--format", fmt, "--workers", w});
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        o.require(code == 0, base[0] + " exited " + std::to_string(code) + ": " + err.str());
        const std::string body = strip_timing(out.str());
        if (reference.empty()) {
          reference = body;
        } else {
          o.require(body == reference, base[0] + " " + fmt + " differs at --workers " + w);
          ++compared;
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(compared) + " report pairs byte-identical";
  return o;
}

// ------------------------------------------------------------------ 12

Outcome performance_floor() {
  Outcome o;
  const auto t = build_field(2, 13);
  const auto s = random_subset(t, 0.5, 12);
  const auto r = longest_ap(t, s, hw_workers());
  o.require(validate_witness(t, r.witness, s), "witness does not validate");
  if (o.pass) o.detail = "q=8192, #S=" + std::to_string(s.size()) + ", longest " + std::to_string(r.length);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"progset acceptance suite"};
  std::vector<int> only;
  app.add_option("--only", only, "criterion numbers to run")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "exact counts vs nested-loop oracle", 2.0, exact_counts},
      {2, "rep-function counts equal nested loops", 60.0, dual_path},
      {3, "character counting identity", 60.0, counting_identity},
      {4, "proven inequalities over the corpus", 600.0, proven_inequalities},
      {5, "Weil-bound suites", 300.0, weil_suites},
      {6, "Cauchy step", 60.0, cauchy},
      {7, "threshold-region soundness", 120.0, sweep_soundness},
      {8, "M-set exactness", 60.0, m_set_exactness},
      {9, "search vs naive scans", 120.0, search_oracle},
      {10, "quadratic-residue observation", 120.0, qr_observation},
      {11, "worker-count determinism", 0.0, worker_determinism},
      {12, "longest AP in GF(8192)", 60.0, performance_floor},
  };

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      out.pass = false;
      out.detail = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_s) + " s";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << "criterion " << c.id << ": " << (out.pass ? "PASS" : "FAIL") << "  " << c.name << "  [" << timing
              << "]  " << out.detail << std::endl;
    failed += !out.pass;
  }
  return failed == 0 ? 0 : 1;
}
