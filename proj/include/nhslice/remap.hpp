#pragma once

#include <span>
#include <vector>

#include "nhslice/model.hpp"

namespace nhs {

/// Piece of source layer `src` (local coordinate x0..x1 in [0, 1], measured
/// downward in pi) that lands in target layer `tgt`.
struct Overlap {
  int tgt = 0;
  int src = 0;
  double x0 = 0.0;
  double x1 = 0.0;
  double weight() const { return x1 - x0; }
};

struct RemapPlan {
  int ncol = 0;
  int n = 0;
  ColumnField pi_src;  ///< (ncol, n+1) hydrostatic pressure of the floating levels
  ColumnField pi_tgt;  ///< (ncol, n+1) reference levels A p0 + B ps
  std::vector<std::vector<Overlap>> overlaps;  ///< per column, ordered by pi

  /// Largest |pi_tgt - pi_src| relative to the column depth.
  double max_displacement() const;
};

struct RemapOptions {
  bool monotone = true;
};

/// Source pressures by cumulative sum of dpids from p_top; targets from the
/// hybrid coefficients with the column's own surface pressure. Endpoints are
/// copied so both sides carry the same column mass. Throws StateError if the
/// source levels cross.
RemapPlan build_plan(const Model& m, const PrognosticState& s);

/// Overlaps between two monotone interface sets with equal endpoints.
std::vector<Overlap> compute_overlaps(std::span<const double> pi_src, std::span<const double> pi_tgt);

/// Target layer means of a mixing ratio q (per unit pi) given on source
/// layers, via a piecewise-parabolic reconstruction in pi.
std::vector<double> remap_mixing_ratio(std::span<const double> pi_src, std::span<const double> q,
                                       std::span<const double> pi_tgt, const std::vector<Overlap>& ov,
                                       bool monotone);

/// Remaps column `col` of `src` onto the plan's targets, writing into `dst`.
void remap_column(const Model& m, const RemapPlan& plan, int col, const PrognosticState& src,
                  PrognosticState& dst, const RemapOptions& opt = {});

/// Whole-state convenience: build_plan followed by remap_column everywhere.
PrognosticState remap(const Model& m, const PrognosticState& s, const RemapOptions& opt = {});

}  // namespace nhs
