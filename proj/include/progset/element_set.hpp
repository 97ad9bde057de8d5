#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "progset/error.hpp"
#include "progset/field.hpp"

namespace progset {

/// A subset of F_q packed as a bitset over element indices.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::uint32_t q) : q_(q), words_((std::size_t(q) + 63) / 64, 0) {}

  static ElementSet full(std::uint32_t q) {
    ElementSet s(q);
    for (std::uint32_t i = 0; i < q; ++i) s.insert(i);
    return s;
  }

  static ElementSet full_nonzero(std::uint32_t q) {
    ElementSet s = full(q);
    s.erase(0);
    return s;
  }

  static ElementSet of(std::uint32_t q, std::initializer_list<std::uint32_t> idx) {
    ElementSet s(q);
    for (auto i : idx) s.insert(i);
    return s;
  }

  std::uint32_t q() const noexcept { return q_; }
  std::size_t size() const noexcept { return card_; }
  bool empty() const noexcept { return card_ == 0; }

  bool contains(std::uint32_t idx) const noexcept {
    return idx < q_ && ((words_[idx >> 6] >> (idx & 63)) & 1u);
  }
  bool contains(FieldElement x) const noexcept { return contains(x.idx); }

  void insert(std::uint32_t idx) {
    if (idx >= q_) throw Error(Errc::BadElement, "index " + std::to_string(idx) + " outside [0, q)");
    auto& w = words_[idx >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (idx & 63);
    if (!(w & bit)) {
      w |= bit;
      ++card_;
    }
  }
  void insert(FieldElement x) { insert(x.idx); }

  void erase(std::uint32_t idx) noexcept {
    if (idx >= q_) return;
    auto& w = words_[idx >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (idx & 63);
    if (w & bit) {
      w &= ~bit;
      --card_;
    }
  }

  ElementSet without_zero() const {
    ElementSet s = *this;
    s.erase(0);
    return s;
  }

  /// Calls f(idx) for every member in increasing index order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        f(static_cast<std::uint32_t>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::uint32_t> indices() const {
    std::vector<std::uint32_t> out;
    out.reserve(card_);
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
  }

  bool is_subset_of(const ElementSet& o) const noexcept {
    if (q_ != o.q_) return false;
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const ElementSet& a, const ElementSet& b) noexcept {
    return a.q_ == b.q_ && a.words_ == b.words_;
  }

 private:
  std::uint32_t q_ = 0;
  std::size_t card_ = 0;
  std::vector<std::uint64_t> words_;
};

// Text format: "q=<int>" on line 1, then "# ..." comment lines and one
// decimal element index per line. Duplicates are rejected.

inline ElementSet parse_element_set(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "empty set file");
  if (line.rfind("q=", 0) != 0) throw Error(Errc::ParseError, "line 1 must be q=<int>");
  std::uint64_t q = 0;
  try {
    std::size_t used = 0;
    q = std::stoull(line.substr(2), &used);
    if (used != line.size() - 2) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "bad q line: " + line);
  }
  if (q < 2 || q > 0xFFFFFFFFull) throw Error(Errc::ParseError, "q out of range");
  ElementSet s(static_cast<std::uint32_t>(q));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::uint64_t v = 0;
    std::size_t used = 0;
    try {
      v = std::stoull(line, &used);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": not an integer");
    }
    if (used != line.size() || line[0] == '-' || line[0] == '+')
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": not an integer");
    if (v >= q) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": index >= q");
    if (s.contains(static_cast<std::uint32_t>(v)))
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": duplicate index " + std::to_string(v));
    s.insert(static_cast<std::uint32_t>(v));
  }
  return s;
}

inline ElementSet read_element_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return parse_element_set(in);
}

inline void write_element_set(std::ostream& out, const ElementSet& s, const std::string& comment = {}) {
  out << "q=" << s.q() << '\n';
  if (!comment.empty()) out << "# " << comment << '\n';
  s.for_each([&](std::uint32_t i) { out << i << '\n'; });
}

inline std::string format_element_set(const ElementSet& s, const std::string& comment = {}) {
  std::ostringstream os;
  write_element_set(os, s, comment);
  return os.str();
}

}  // namespace progset
