#pragma once

#include <vector>

#include "progset/field.hpp"

namespace progset {

// Lets tests corrupt tables for negative controls.
struct TablesTestAccess {
  static std::vector<std::uint32_t>& dlog(FieldTables& t) { return t.dlog_; }
  static std::vector<std::uint32_t>& exp(FieldTables& t) { return t.exp_; }
};

}  // namespace progset
