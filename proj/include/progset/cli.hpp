#pragma once

// Command-line front end: one subcommand per operation, each emitting a
// ReportEnvelope as JSON or CSV.
//
// Exit codes: 0 success, 1 property violation / counterexample / I/O
// failure, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "progset/characters.hpp"
#include "progset/counts.hpp"
#include "progset/element_set.hpp"
#include "progset/error.hpp"
#include "progset/experiments.hpp"
#include "progset/field.hpp"
#include "progset/generators.hpp"
#include "progset/number_theory.hpp"
#include "progset/productsets.hpp"
#include "progset/progressions.hpp"
#include "progset/random.hpp"
#include "progset/report.hpp"

namespace progset {

namespace cli_detail {

struct Options {
  std::uint32_t p = 0, n = 1, k = 3, h = 1;
  std::string modulus;
  std::string set_a, set_b, set;
  std::string gen = "random";
  double density = 0.5;
  std::uint32_t d = 0, lo = 0, hi = 0;
  std::uint64_t seed = 1;
  std::uint32_t trials = 10;
  std::string format = "json";
  std::string out;
  std::uint32_t max_q = kDefaultMaxQ;
  unsigned workers = 1;
  double tol = -1;  // negative: suite default
  std::string mode = "exhaustive";
  std::uint64_t samples = 10'000;
  std::string suite;
  std::string kind = "ap";
  std::string densities = "0.3,0.5,0.7,0.82,1.0";
  std::string qs = "101,211,401,809,1601";
  double alpha = 0.5, beta = 0.5;
  std::string primes;
  std::uint32_t max_prime = 0;
  bool h_given = false;
  bool k_given = false;
};

// Thrown for usage problems detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  std::string flag;
  UsageError(const std::string& msg, std::string f) : std::runtime_error(msg), flag(std::move(f)) {}
};

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      if constexpr (std::is_floating_point_v<T>) {
        out.push_back(static_cast<T>(std::stod(item, &used)));
      } else {
        out.push_back(static_cast<T>(std::stoull(item, &used)));
      }
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse list entry '" + item + "'", flag);
    }
  }
  if (out.empty()) throw UsageError("empty list", flag);
  return out;
}

inline std::string flag_for(Errc c) {
  switch (c) {
    case Errc::KExceedsCharacteristic:
    case Errc::KTooLarge:
    case Errc::KTooSmall: return "--k";
    case Errc::NotPrime:
    case Errc::FieldTooLarge: return "--p";
    case Errc::BadModulus:
    case Errc::ReducibleModulus: return "--modulus";
    case Errc::ZeroShift: return "--h";
    case Errc::BadDensity: return "--density";
    case Errc::NotADivisor: return "--d";
    case Errc::EvenCharacteristic:
    case Errc::NotPrimeField: return "--gen";
    case Errc::TooExpensive: return "--p";
    default: return "";
  }
}

inline unsigned env_unsigned(const char* name, unsigned fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    return static_cast<unsigned>(std::stoul(v));
  } catch (const std::exception&) {
    return fallback;
  }
}

// Registers flags on a subcommand and remembers how to echo each one.
class FlagSet {
 public:
  FlagSet(CLI::App* app, Options& o) : app_(app), o_(o) {}

  template <class T>
  FlagSet& add(const std::string& name, T& target, const std::string& help) {
    app_->add_option(name, target, help);
    echo_.emplace_back(name.substr(2), [&target] { return json(target); });
    return *this;
  }

  FlagSet& field() {
    add("--p", o_.p, "characteristic (prime)");
    add("--n", o_.n, "extension degree");
    add("--modulus", o_.modulus, "comma-separated monic modulus, low to high");
    add("--max-q", o_.max_q, "field size cap");
    app_->get_option("--p")->required();
    return *this;
  }

  FlagSet& generator() {
    add("--gen", o_.gen, "random|qr|interval|subgroup|full|full-nonzero|explicit");
    add("--density", o_.density, "inclusion probability for random sets");
    add("--d", o_.d, "subgroup order");
    add("--lo", o_.lo, "interval start");
    add("--hi", o_.hi, "interval end");
    add("--seed", o_.seed, "base seed");
    return *this;
  }

  FlagSet& pair() {
    add("--set-a", o_.set_a, "element set file for A");
    add("--set-b", o_.set_b, "element set file for B");
    return generator();
  }

  FlagSet& single() {
    add("--set", o_.set, "element set file");
    return generator();
  }

  FlagSet& k() {
    app_->add_option("--k", o_.k, "progression length")->each([this](const std::string&) { o_.k_given = true; });
    echo_.emplace_back("k", [this] { return json(o_.k); });
    return *this;
  }

  FlagSet& h() {
    app_->add_option("--h", o_.h, "shift element index")->each([this](const std::string&) { o_.h_given = true; });
    echo_.emplace_back("h", [this] { return json(o_.h); });
    return *this;
  }

  FlagSet& output(bool allow_set_format = false) {
    app_->add_option("--format", o_.format, allow_set_format ? "json|csv|set" : "json|csv");
    app_->add_option("--out", o_.out, "output path (default stdout)");
    app_->add_option("--workers", o_.workers, "worker threads");
    return *this;
  }

  json echo() const {
    json j = json::object();
    for (const auto& [name, fn] : echo_) j[name] = fn();
    return j;
  }

 private:
  CLI::App* app_;
  Options& o_;
  std::vector<std::pair<std::string, std::function<json()>>> echo_;
};

inline FieldTables make_field(const Options& o) {
  std::optional<std::vector<std::uint32_t>> mod;
  if (!o.modulus.empty()) mod = parse_list<std::uint32_t>(o.modulus, "--modulus");
  return build_field(o.p, o.n, mod, o.max_q);
}

inline ElementSet load_or_generate(const FieldTables& t, const Options& o, const std::string& path,
                                   std::uint64_t seed) {
  if (!path.empty()) {
    ElementSet s = read_element_set(path);
    if (s.q() != t.q()) throw Error(Errc::FieldMismatch, path + " is over q=" + std::to_string(s.q()));
    return s;
  }
  GenSpec g;
  g.kind = parse_gen_kind(o.gen);
  g.density = o.density;
  g.d = o.d;
  g.lo = o.lo;
  g.hi = o.hi;
  g.seed = seed;
  if (g.kind == GenKind::Explicit) throw UsageError("--gen explicit needs a set file", "--gen");
  return generate_set(t, g);
}

inline std::pair<ElementSet, ElementSet> load_pair(const FieldTables& t, const Options& o) {
  return {load_or_generate(t, o, o.set_a, derive_seed(o.seed, {0})),
          load_or_generate(t, o, o.set_b, derive_seed(o.seed, {1}))};
}

inline FieldElement element_arg(const FieldTables& t, std::uint32_t idx, const std::string& flag) {
  if (idx >= t.q()) throw UsageError("element index " + std::to_string(idx) + " outside the field", flag);
  return {idx};
}

inline ProgressionKind kind_arg(const std::string& s) {
  if (s == "ap") return ProgressionKind::Arithmetic;
  if (s == "gp") return ProgressionKind::Geometric;
  throw UsageError("kind must be ap or gp", "--kind");
}

inline TupleMode mode_arg(const std::string& s) {
  if (s == "exhaustive") return TupleMode::Exhaustive;
  if (s == "sampled") return TupleMode::Sampled;
  throw UsageError("mode must be exhaustive or sampled", "--mode");
}

}  // namespace cli_detail

/// Runs one CLI invocation. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  using namespace cli_detail;
  Options o;
  o.max_q = env_unsigned("PROGSET_MAX_Q", kDefaultMaxQ);
  o.workers = std::max(1u, env_unsigned("PROGSET_WORKERS", 1));

  CLI::App app{"Progressions in productsets over finite fields", "progset"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  std::map<std::string, FlagSet> flags;
  auto sub = [&](const std::string& name, const std::string& help) -> FlagSet& {
    CLI::App* s = app.add_subcommand(name, help);
    s->set_help_flag("--help", "print help");  // -h is reserved for the shift
    return flags.emplace(name, FlagSet(s, o)).first->second;
  };

  sub("field-info", "field parameters and generator").field().output();
  sub("gen-set", "generate an element set").field().generator().output(true);
  sub("product", "productset A*B, shifted when --h is given").field().pair().h().output(true);
  sub("search-ap", "longest arithmetic progression, or one of length --k").field().single().k().output();
  sub("search-gp", "longest geometric progression, or one of length --k").field().single().k().output();
  sub("count-ap", "exact count T of k-term progressions in A*B").field().pair().k().output();
  sub("count-gp", "exact count Q of k-term geometric progressions in A*B+h").field().pair().k().h().output();
  sub("check-thm1", "hypothesis check and search for a k-AP in A*B").field().pair().k().output();
  sub("check-thm2", "hypothesis check and search for a k-GP in A*B+h").field().pair().k().h().output();
  {
    FlagSet& v = sub("verify", "numerical property suites");
    v.add("--suite", o.suite, "orthogonality|weil|gp-structure|cauchy|identity|repfn");
    v.field().pair().k().h();
    v.add("--tol", o.tol, "tolerance (suite default when omitted)");
    v.add("--mode", o.mode, "exhaustive|sampled");
    v.add("--samples", o.samples, "sampled tuple count");
    v.output();
  }
  {
    FlagSet& s = sub("sweep", "density sweep against the theorem thresholds");
    s.add("--kind", o.kind, "ap|gp").field().k().h();
    s.add("--densities", o.densities, "comma-separated densities");
    s.add("--trials", o.trials, "trials per density");
    s.add("--seed", o.seed, "base seed");
    s.output();
  }
  {
    FlagSet& g = sub("growth", "longest progression growth against log q");
    g.add("--kind", o.kind, "ap|gp");
    g.add("--qs", o.qs, "comma-separated field sizes");
    g.add("--alpha", o.alpha, "density of A");
    g.add("--beta", o.beta, "density of B");
    g.add("--trials", o.trials, "trials per field");
    g.add("--seed", o.seed, "base seed");
    g.h().output();
  }
  {
    FlagSet& q = sub("qr-experiment", "longest AP in the quadratic residues");
    q.add("--primes", o.primes, "comma-separated odd primes");
    q.add("--max-prime", o.max_prime, "all odd primes up to this bound");
    q.output();
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "progset: " << e.what() << "\n";
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  const FlagSet& fs = flags.at(cmd);
  const auto start = std::chrono::steady_clock::now();
  ReportEnvelope env;
  env.command = cmd;
  env.params = fs.echo();
  int code = 0;

  try {
    if (o.workers == 0) throw UsageError("workers must be >= 1", "--workers");
    ReportFormat fmt = ReportFormat::Json;
    bool set_format = false;
    if (o.format == "csv") {
      fmt = ReportFormat::Csv;
    } else if (o.format == "set" && (cmd == "gen-set" || cmd == "product")) {
      set_format = true;
    } else if (o.format != "json") {
      throw UsageError("unsupported format '" + o.format + "'", "--format");
    }

    // Hypothesis checks that need only p come before any set loading.
    if ((cmd == "count-ap" || cmd == "check-thm1") && o.k >= o.p && nt::is_prime(o.p))
      throw UsageError("k must be < p", "--k");
    if ((cmd == "count-ap" || cmd == "count-gp" || cmd == "check-thm1" || cmd == "check-thm2") && o.k < 3)
      throw UsageError("k must be >= 3", "--k");

    std::optional<ElementSet> set_payload;
    if (cmd == "growth") {
      GrowthConfig g;
      g.kind = kind_arg(o.kind);
      g.qs = parse_list<std::uint32_t>(o.qs, "--qs");
      g.alpha = o.alpha;
      g.beta = o.beta;
      g.trials = o.trials;
      g.seed = o.seed;
      g.h = o.h;
      g.workers = o.workers;
      const GrowthTable table = growth_experiment(g);
      env.seed = o.seed;
      env.result = growth_json(table);
      env.table = growth_table(table);
    } else if (cmd == "qr-experiment") {
      std::vector<std::uint32_t> primes;
      if (!o.primes.empty()) {
        primes = parse_list<std::uint32_t>(o.primes, "--primes");
      } else if (o.max_prime >= 3) {
        for (std::uint32_t p : nt::primes_up_to(o.max_prime))
          if (p != 2) primes.push_back(p);
      } else {
        throw UsageError("give --primes or --max-prime >= 3", "--primes");
      }
      const QRTable table = qr_experiment(primes, o.workers);
      env.result = qr_json(table);
      env.table = qr_table(table);
      if (!table.all_closed || !table.all_within_sanity) code = 1;
    } else if (cmd == "sweep") {
      SweepConfig c;
      c.kind = kind_arg(o.kind);
      c.p = o.p;
      c.n = o.n;
      c.k = o.k;
      c.h = o.h;
      c.densities = parse_list<double>(o.densities, "--densities");
      c.trials = o.trials;
      c.seed = o.seed;
      c.workers = o.workers;
      const SweepResult r = threshold_sweep(c);
      const FieldTables t = make_field(o);
      env.field = field_json(t);
      env.seed = o.seed;
      env.result = sweep_json(r);
      env.table = sweep_table(r);
      if (!r.sound()) code = 1;
    } else {
      const FieldTables t = make_field(o);
      env.field = field_json(t);
      if (cmd == "field-info") {
        env.result = field_json(t);
        env.result["group_order"] = t.group_order();
        env.table = field_table(t);
      } else if (cmd == "gen-set") {
        const ElementSet s = load_or_generate(t, o, "", o.seed);
        env.seed = o.seed;
        env.result = set_json(s);
        env.table = set_table(s);
        set_payload = s;
      } else if (cmd == "product") {
        const auto [a, b] = load_pair(t, o);
        const ElementSet prod = o.h_given ? shifted_productset(t, a, b, element_arg(t, o.h, "--h"))
                                          : productset(t, a, b);
        env.seed = o.seed;
        env.result = {{"card_a", a.size()}, {"card_b", b.size()}, {"shifted", o.h_given}, {"product", set_json(prod)}};
        env.table = set_table(prod);
        set_payload = prod;
      } else if (cmd == "search-ap" || cmd == "search-gp") {
        const bool ap = cmd == "search-ap";
        const ElementSet s = load_or_generate(t, o, o.set, o.seed);
        env.seed = o.seed;
        std::optional<ProgressionWitness> w;
        std::uint32_t length = 0;
        if (o.k_given) {
          w = ap ? find_ap_of_length(t, s, o.k, o.workers) : find_gp_of_length(t, s, o.k, o.workers);
          length = w ? o.k : 0;
        } else {
          const LongestProgression lp = ap ? longest_ap(t, s, o.workers) : longest_gp(t, s, o.workers);
          length = lp.length;
          w = lp.witness;
        }
        env.result = search_json(o.k_given ? std::optional(o.k) : std::nullopt, length, w, s.size());
        env.table = search_table(w, length);
      } else if (cmd == "count-ap" || cmd == "count-gp") {
        const auto [a, b] = load_pair(t, o);
        env.seed = o.seed;
        const CountOptions opt{.workers = o.workers};
        const CountReport r = cmd == "count-ap" ? count_ap_solutions(t, a, b, o.k, opt)
                                                : count_gp_solutions(t, a, b, o.k, element_arg(t, o.h, "--h"), opt);
        env.result = count_json(r);
        env.table = count_table(r);
        if (!r.inequality_holds) code = 1;
      } else if (cmd == "check-thm1" || cmd == "check-thm2") {
        const auto [a, b] = load_pair(t, o);
        env.seed = o.seed;
        const TheoremCheck c = cmd == "check-thm1" ? check_theorem1(t, a, b, o.k, o.workers)
                                                   : check_theorem2(t, a, b, o.k, element_arg(t, o.h, "--h"), o.workers);
        env.result = theorem_json(c);
        env.table = theorem_table(c);
        if (!c.sound()) code = 1;
      } else if (cmd == "verify") {
        const CharacterTable chars(t);
        auto tol_or = [&](double d) { return o.tol >= 0 ? o.tol : d; };
        PropertyReport r;
        if (o.suite == "orthogonality") {
          r = verify_orthogonality(t, tol_or(1e-9), o.max_q);
        } else if (o.suite == "weil") {
          env.seed = o.seed;
          r = verify_weil_bound_ap(chars, o.k, mode_arg(o.mode), o.samples, o.seed, o.workers);
        } else if (o.suite == "gp-structure") {
          env.seed = o.seed;
          r = verify_gp_structure_bound(chars, o.k, element_arg(t, o.h, "--h"), mode_arg(o.mode), o.samples, o.seed,
                                        o.workers);
        } else if (o.suite == "cauchy" || o.suite == "identity" || o.suite == "repfn") {
          const auto [a, b] = load_pair(t, o);
          env.seed = o.seed;
          if (o.suite == "cauchy") {
            r = verify_cauchy_step(chars, a, b, o.tol >= 0 ? std::optional(o.tol) : std::nullopt);
          } else if (o.suite == "identity") {
            r = verify_counting_identity_ap(chars, a, b, o.k, tol_or(1e-5), o.workers);
          } else {
            r = verify_rep_charsum(chars, a, b, tol_or(1e-6));
          }
        } else {
          throw UsageError("unknown suite '" + o.suite + "'", "--suite");
        }
        env.result = property_json(r);
        env.table = property_table(r);
        if (!r.passed) code = 1;
      }
    }

    env.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (set_format) {
      const std::string text = format_element_set(*set_payload);
      if (o.out.empty() || o.out == "-") {
        out << text;
      } else {
        std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
        if (!f || !(f << text)) throw Error(Errc::IoError, "cannot write " + o.out);
      }
    } else {
      emit_report(env, fmt, o.out, out);
    }
    return code;
  } catch (const UsageError& e) {
    err << "progset " << cmd << ": " << e.what() << " (" << e.flag << ")\n";
    return 2;
  } catch (const Error& e) {
    if (e.code() == Errc::IoError) {
      err << "progset " << cmd << ": " << e.what() << "\n";
      return 1;
    }
    const std::string flag = flag_for(e.code());
    err << "progset " << cmd << ": " << e.what();
    if (!flag.empty()) err << " (" << flag << ")";
    err << "\n";
    return 2;
  }
}

}  // namespace progset
