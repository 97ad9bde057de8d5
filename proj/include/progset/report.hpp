#pragma once

// JSON and CSV serialization of every report kind.
//
// JSON envelopes are single objects with keys command, params, field, seed,
// version, timing_ms and result. Exact integers (counts, rational parts) are
// always decimal strings; other integers become strings only above 2^53.
// CSV output is the tabular form of the result: header row, data rows, LF.

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "progset/characters.hpp"
#include "progset/counts.hpp"
#include "progset/element_set.hpp"
#include "progset/error.hpp"
#include "progset/experiments.hpp"
#include "progset/field.hpp"
#include "progset/progressions.hpp"
#include "progset/property_report.hpp"

namespace progset {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

enum class ReportFormat { Json, Csv };

inline json json_uint(std::uint64_t v) {
  if (v > (std::uint64_t{1} << 53)) return std::to_string(v);
  return v;
}

inline json json_rational(const mpq_class& r) { return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}}; }

inline std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv_bool(bool b) { return b ? "true" : "false"; }

inline std::string kind_name(ProgressionKind k) { return k == ProgressionKind::Arithmetic ? "arithmetic" : "geometric"; }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(cells[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

// ---------------------------------------------------------------- payloads

inline json field_json(const FieldTables& t) {
  return {{"p", t.p()}, {"n", t.n()}, {"q", t.q()}, {"modulus", t.spec().modulus}, {"generator", t.generator().idx}};
}

inline Table field_table(const FieldTables& t) {
  std::string mod;
  for (std::size_t i = 0; i < t.spec().modulus.size(); ++i) mod += (i ? ";" : "") + std::to_string(t.spec().modulus[i]);
  return {{"p", "n", "q", "modulus", "generator"},
          {{std::to_string(t.p()), std::to_string(t.n()), std::to_string(t.q()), mod, std::to_string(t.generator().idx)}}};
}

inline std::string terms_string(const ProgressionWitness& w) {
  std::string s;
  for (std::size_t i = 0; i < w.terms.size(); ++i) s += (i ? ";" : "") + std::to_string(w.terms[i].idx);
  return s;
}

inline json witness_json(const ProgressionWitness& w) {
  std::vector<std::uint32_t> terms;
  for (auto x : w.terms) terms.push_back(x.idx);
  return {{"kind", kind_name(w.kind)}, {"lambda", w.lambda.idx}, {"mu", w.mu.idx}, {"k", w.k}, {"terms", terms}};
}

inline json set_json(const ElementSet& s) {
  return {{"q", s.q()}, {"card", s.size()}, {"elements", s.indices()}};
}

inline Table set_table(const ElementSet& s) {
  Table t{{"index"}, {}};
  s.for_each([&](std::uint32_t i) { t.rows.push_back({std::to_string(i)}); });
  return t;
}

inline json count_json(const CountReport& r) {
  json j = {{"kind", r.kind == CountKind::T ? "T" : "Q"},
            {"q", r.q},
            {"k", r.k},
            {"count", r.count.get_str()},
            {"main_term", json_rational(r.main_term)},
            {"main_term_approx", r.main_term.get_d()},
            {"error_bound", r.error_bound},
            {"error_bound_squared", r.error_bound_sq.get_str()},
            {"inequality_holds", r.inequality_holds},
            {"raw_inequality_holds", r.raw_inequality_holds},
            {"threshold_satisfied", r.threshold_satisfied},
            {"card_a", json_uint(r.card_a)},
            {"card_b", json_uint(r.card_b)},
            {"card_a_star", json_uint(r.card_a_star)},
            {"card_b_star", json_uint(r.card_b_star)}};
  if (r.h) j["h"] = r.h->idx;
  if (r.kind == CountKind::Q) j["m_set_size"] = json_uint(r.m_set_size);
  return j;
}

inline Table count_table(const CountReport& r) {
  return {{"kind", "q", "k", "h", "count", "main_num", "main_den", "main_approx", "error_bound", "inequality_holds",
           "raw_inequality_holds", "threshold_satisfied", "card_a", "card_b", "card_a_star", "card_b_star",
           "m_set_size"},
          {{r.kind == CountKind::T ? "T" : "Q", std::to_string(r.q), std::to_string(r.k),
            r.h ? std::to_string(r.h->idx) : "", r.count.get_str(), r.main_term.get_num().get_str(),
            r.main_term.get_den().get_str(), csv_double(r.main_term.get_d()), csv_double(r.error_bound),
            csv_bool(r.inequality_holds), csv_bool(r.raw_inequality_holds), csv_bool(r.threshold_satisfied),
            std::to_string(r.card_a), std::to_string(r.card_b), std::to_string(r.card_a_star),
            std::to_string(r.card_b_star), std::to_string(r.m_set_size)}}};
}

inline json theorem_json(const TheoremCheck& c) {
  json j = {{"kind", kind_name(c.kind)},
            {"q", c.q},
            {"k", c.k},
            {"card_a", json_uint(c.card_a)},
            {"card_b", json_uint(c.card_b)},
            {"threshold_value", c.threshold_value},
            {"threshold_satisfied", c.threshold_satisfied},
            {"simplified_threshold_value", c.simplified_threshold_value},
            {"simplified_threshold_satisfied", c.simplified_threshold_satisfied},
            {"target_size", json_uint(c.target_size)},
            {"found", c.found},
            {"sound", c.sound()},
            {"witness", c.witness ? witness_json(*c.witness) : json(nullptr)}};
  if (c.h) j["h"] = c.h->idx;
  return j;
}

inline Table theorem_table(const TheoremCheck& c) {
  return {{"kind", "q", "k", "h", "card_a", "card_b", "threshold_value", "threshold_satisfied",
           "simplified_threshold_value", "simplified_threshold_satisfied", "target_size", "found", "sound", "lambda",
           "mu", "terms"},
          {{kind_name(c.kind), std::to_string(c.q), std::to_string(c.k), c.h ? std::to_string(c.h->idx) : "",
            std::to_string(c.card_a), std::to_string(c.card_b), csv_double(c.threshold_value),
            csv_bool(c.threshold_satisfied), csv_double(c.simplified_threshold_value),
            csv_bool(c.simplified_threshold_satisfied), std::to_string(c.target_size), csv_bool(c.found),
            csv_bool(c.sound()), c.witness ? std::to_string(c.witness->lambda.idx) : "",
            c.witness ? std::to_string(c.witness->mu.idx) : "", c.witness ? terms_string(*c.witness) : ""}}};
}

inline json property_json(const PropertyReport& r) {
  json info = json::object();
  for (const auto& [k, v] : r.info) info[k] = v;
  json j = {{"suite", r.suite},         {"passed", r.passed},         {"checks", json_uint(r.checks)},
            {"max_residual", r.max_residual}, {"max_ratio", r.max_ratio}, {"info", info}};
  if (r.violation) {
    j["violation"] = {{"kind", r.violation->kind},
                      {"location", r.violation->location},
                      {"magnitude", r.violation->magnitude},
                      {"bound", r.violation->bound}};
  } else {
    j["violation"] = nullptr;
  }
  return j;
}

inline Table property_table(const PropertyReport& r) {
  const bool v = r.violation.has_value();
  return {{"suite", "passed", "checks", "max_residual", "max_ratio", "violation_kind", "violation_location",
           "violation_magnitude", "violation_bound"},
          {{r.suite, csv_bool(r.passed), std::to_string(r.checks), csv_double(r.max_residual), csv_double(r.max_ratio),
            v ? r.violation->kind : "", v ? r.violation->location : "", v ? csv_double(r.violation->magnitude) : "",
            v ? csv_double(r.violation->bound) : ""}}};
}

inline json sweep_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"density", r.density},
                    {"trials", r.trials},
                    {"successes", r.successes},
                    {"success_fraction", r.success_fraction},
                    {"mean_longest", r.mean_longest},
                    {"mean_card_product", r.mean_card_product},
                    {"guaranteed_pairs", r.guaranteed_pairs},
                    {"guaranteed_successes", r.guaranteed_successes},
                    {"counterexamples", r.counterexamples}});
  json cex = json::array();
  for (const auto& c : s.counterexamples)
    cex.push_back({{"density", c.density},
                   {"trial", c.trial},
                   {"seed_a", std::to_string(c.seed_a)},
                   {"seed_b", std::to_string(c.seed_b)},
                   {"card_a", c.card_a},
                   {"card_b", c.card_b}});
  json j = {{"kind", kind_name(s.kind)},
            {"q", s.q},
            {"k", s.k},
            {"threshold_density", s.threshold_density},
            {"exact_threshold_density", s.exact_threshold_density},
            {"rows", rows},
            {"counterexamples", cex},
            {"sound", s.sound()}};
  if (s.kind == ProgressionKind::Geometric) j["h"] = s.h;
  return j;
}

inline Table sweep_table(const SweepResult& s) {
  Table t{{"density", "trials", "successes", "success_fraction", "mean_longest", "mean_card_product",
           "guaranteed_pairs", "guaranteed_successes", "counterexamples", "threshold_density",
           "exact_threshold_density"},
          {}};
  for (const auto& r : s.rows)
    t.rows.push_back({csv_double(r.density), std::to_string(r.trials), std::to_string(r.successes),
                      csv_double(r.success_fraction), csv_double(r.mean_longest), csv_double(r.mean_card_product),
                      std::to_string(r.guaranteed_pairs), std::to_string(r.guaranteed_successes),
                      std::to_string(r.counterexamples), csv_double(s.threshold_density),
                      csv_double(s.exact_threshold_density)});
  return t;
}

inline json growth_json(const GrowthTable& g) {
  json rows = json::array();
  for (const auto& r : g.rows)
    rows.push_back({{"q", r.q},
                    {"p", r.p},
                    {"n", r.n},
                    {"log_q", r.log_q},
                    {"mean_longest", r.mean_longest},
                    {"min_longest", r.min_longest},
                    {"max_longest", r.max_longest}});
  return {{"kind", kind_name(g.kind)}, {"rows", rows}, {"kappa_slope", g.kappa_slope}, {"kappa_origin", g.kappa_origin}};
}

inline Table growth_table(const GrowthTable& g) {
  Table t{{"q", "p", "n", "log_q", "mean_longest", "min_longest", "max_longest", "kappa_slope", "kappa_origin"}, {}};
  for (const auto& r : g.rows)
    t.rows.push_back({std::to_string(r.q), std::to_string(r.p), std::to_string(r.n), csv_double(r.log_q),
                      csv_double(r.mean_longest), std::to_string(r.min_longest), std::to_string(r.max_longest),
                      csv_double(g.kappa_slope), csv_double(g.kappa_origin)});
  return t;
}

inline json qr_json(const QRTable& q) {
  json rows = json::array();
  for (const auto& r : q.rows)
    rows.push_back({{"p", r.p},
                    {"qr_size", r.qr_size},
                    {"closed", r.closed},
                    {"longest_ap", r.longest_ap},
                    {"p_quarter", r.p_quarter},
                    {"p_half", r.p_half},
                    {"within_sanity", r.within_sanity},
                    {"witness", r.witness ? witness_json(*r.witness) : json(nullptr)}});
  return {{"rows", rows}, {"all_closed", q.all_closed}, {"all_within_sanity", q.all_within_sanity}};
}

inline Table qr_table(const QRTable& q) {
  Table t{{"p", "qr_size", "closed", "longest_ap", "p_quarter", "p_half", "within_sanity"}, {}};
  for (const auto& r : q.rows)
    t.rows.push_back({std::to_string(r.p), std::to_string(r.qr_size), csv_bool(r.closed), std::to_string(r.longest_ap),
                      csv_double(r.p_quarter), csv_double(r.p_half), csv_bool(r.within_sanity)});
  return t;
}

inline json search_json(std::optional<std::uint32_t> requested_k, std::uint32_t length,
                        const std::optional<ProgressionWitness>& w, std::uint64_t set_size) {
  json j = {{"found", w.has_value()}, {"length", length}, {"set_size", json_uint(set_size)},
            {"witness", w ? witness_json(*w) : json(nullptr)}};
  j["requested_k"] = requested_k ? json(*requested_k) : json(nullptr);
  return j;
}

inline Table search_table(const std::optional<ProgressionWitness>& w, std::uint32_t length) {
  return {{"found", "length", "kind", "lambda", "mu", "terms"},
          {{csv_bool(w.has_value()), std::to_string(length), w ? kind_name(w->kind) : "",
            w ? std::to_string(w->lambda.idx) : "", w ? std::to_string(w->mu.idx) : "", w ? terms_string(*w) : ""}}};
}

// ---------------------------------------------------------------- envelope

struct ReportEnvelope {
  std::string command;
  json params = json::object();
  json field = nullptr;
  std::optional<std::uint64_t> seed;
  std::string version = kVersion;
  double timing_ms = 0;
  json result = json::object();
  Table table;  // CSV rendering of result
};

inline json envelope_json(const ReportEnvelope& env) {
  return {{"command", env.command},
          {"params", env.params},
          {"field", env.field},
          {"seed", env.seed ? json(std::to_string(*env.seed)) : json(nullptr)},
          {"version", env.version},
          {"timing_ms", env.timing_ms},
          {"result", env.result}};
}

inline std::string render_report(const ReportEnvelope& env, ReportFormat fmt) {
  if (fmt == ReportFormat::Csv) return to_csv(env.table);
  return envelope_json(env).dump(2) + "\n";
}

/// Writes to `path`, or to `out` when path is empty or "-".
inline void emit_report(const ReportEnvelope& env, ReportFormat fmt, const std::string& path,
                        std::ostream& out = std::cout) {
  const std::string text = render_report(env, fmt);
  if (path.empty() || path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::IoError, "cannot write " + path);
  f << text;
  if (!f) throw Error(Errc::IoError, "write failed for " + path);
}

}  // namespace progset
