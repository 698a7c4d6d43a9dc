#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nhslice/errors.hpp"

namespace nhs {

/// Staggered vertical levels. Indexing is zero based:
///   interfaces k = 0..n   (k = 0 is the model top, k = n the surface)
///   midpoints  k = 0..n-1 (midpoint k sits between interfaces k and k+1)
/// Midpoints are centered between interfaces, and the boundary interface
/// thicknesses copy the adjacent midpoint thickness.
class LevelGrid {
 public:
  /// Builds a grid from strictly increasing interface coordinates.
  explicit LevelGrid(std::vector<double> s_int);

  int n() const { return static_cast<int>(s_mid_.size()); }
  std::span<const double> s_int() const { return s_int_; }
  std::span<const double> s_mid() const { return s_mid_; }
  std::span<const double> ds_mid() const { return ds_mid_; }
  std::span<const double> ds_int() const { return ds_int_; }

  double s_top() const { return s_int_.front(); }
  double s_bot() const { return s_int_.back(); }
  double length() const { return s_int_.back() - s_int_.front(); }

  bool operator==(const LevelGrid& other) const { return s_int_ == other.s_int_; }

 private:
  std::vector<double> s_int_;
  std::vector<double> s_mid_;
  std::vector<double> ds_mid_;
  std::vector<double> ds_int_;
};

LevelGrid build_uniform_grid(int n, double s_top = 0.0, double s_bot = 1.0);

struct PhysicalConstants {
  double g = 9.80616;
  double R = 287.04;
  double cp = 1004.64;
  double p0 = 100000.0;
  double f = 0.0;

  double cv() const { return cp - R; }
  double kappa() const { return R / cp; }
  /// Throws GridError unless cv > 0 and kappa lies in (0, 1).
  void validate() const;
};

/// Hybrid mass coordinate: pi = A * p0 + B * ps at every interface.
struct HybridCoefficients {
  std::vector<double> A_int;
  std::vector<double> B_int;
  double p0_ref = 100000.0;

  int n() const { return static_cast<int>(A_int.size()) - 1; }
  double p_top() const { return A_int.front() * p0_ref; }
};

/// Admissible surface pressure range checked at construction, as a fraction
/// of p0_ref.
inline constexpr double kMinSurfaceFraction = 0.5;
inline constexpr double kMaxSurfaceFraction = 1.5;

/// Smooth hybrid coefficients on `grid` (relabeled to [0, 1]):
///   B(eta) = eta^exponent,  A(eta) p0 = p_top + (p0 - p_top) eta - B(eta) p0.
/// exponent = 1 gives the pure sigma limit. Monotonicity of pi in k is
/// checked for ps in [0.5, 1.5] p0_ref.
HybridCoefficients build_hybrid(const LevelGrid& grid, double p_top, double p0_ref,
                                double exponent = 1.0);

/// pi at interfaces for one surface pressure. Throws StateError if ps <= 0 or
/// pi is not strictly increasing.
std::vector<double> pi_interfaces(const HybridCoefficients& h, double ps);

/// pi at interfaces for every column, column-major (ncol x (n+1)).
std::vector<double> pi_interfaces(const HybridCoefficients& h, std::span<const double> ps);

/// Plain-text table, one row per interface: "i s A B". A header line carries
/// n and p0_ref.
void write_grid_table(std::ostream& os, const LevelGrid& grid, const HybridCoefficients& h);

struct GridTable {
  LevelGrid grid;
  HybridCoefficients hybrid;
};
GridTable read_grid_table(std::istream& is);

}  // namespace nhs
