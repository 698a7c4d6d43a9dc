#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nhslice/energy.hpp"
#include "nhslice/model.hpp"

namespace nhs {

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Hash of everything that fixes the discretization: s levels, A, B,
/// element count and domain length.
std::string grid_hash(const Model& m);

// Snapshot text format:
//   # nhslice snapshot
//   n <n>
//   ncol <ncol>
//   grid_hash <16 hex>
//   time <seconds>
//   <field name> then one line per column (n or n+1 values), for
//   u v w phi Theta dpids in that order. Numbers are written with 17
//   significant digits so a round trip is exact.
void write_snapshot(std::ostream& os, const Model& m, const PrognosticState& s, double time);
/// Reads a snapshot written for the same grid. Throws ConfigError on a
/// shape or grid hash mismatch.
PrognosticState read_snapshot(std::istream& is, const Model& m, double* time = nullptr);

/// Budget CSV: header row then one row per diagnostic time.
extern const std::vector<std::string> kBudgetColumns;
void write_budget_header(std::ostream& os);
void write_budget_row(std::ostream& os, const EnergyBudget& b);

}  // namespace nhs
