#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace nhs {

/// A field over all columns with `nlev` values per column, stored column by
/// column so that one column is a contiguous span.
class ColumnField {
 public:
  ColumnField() = default;
  ColumnField(int ncol, int nlev, double fill = 0.0)
      : ncol_(ncol), nlev_(nlev), data_(static_cast<std::size_t>(ncol) * nlev, fill) {}

  int ncol() const { return ncol_; }
  int nlev() const { return nlev_; }

  double& operator()(int col, int k) { return data_[static_cast<std::size_t>(col) * nlev_ + k]; }
  double operator()(int col, int k) const {
    return data_[static_cast<std::size_t>(col) * nlev_ + k];
  }

  std::span<double> column(int col) {
    return {data_.data() + static_cast<std::size_t>(col) * nlev_, static_cast<std::size_t>(nlev_)};
  }
  std::span<const double> column(int col) const {
    return {data_.data() + static_cast<std::size_t>(col) * nlev_, static_cast<std::size_t>(nlev_)};
  }

  /// Copies level k across all columns into `out` (size ncol).
  void gather_level(int k, std::span<double> out) const;
  void scatter_level(int k, std::span<const double> in);

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
  /// this += a * x
  void axpy(double a, const ColumnField& x);

  bool operator==(const ColumnField& o) const = default;

 private:
  int ncol_ = 0;
  int nlev_ = 0;
  std::vector<double> data_;
};

/// Prognostic variables. u, v, Theta and dpids live at the n midpoints,
/// w and phi at the n+1 interfaces.
struct PrognosticState {
  ColumnField u;
  ColumnField v;
  ColumnField w;
  ColumnField phi;
  ColumnField Theta;
  ColumnField dpids;

  PrognosticState() = default;
  PrognosticState(int ncol, int n);

  int ncol() const { return u.ncol(); }
  int n() const { return u.nlev(); }

  /// this += a * x over every field.
  void axpy(double a, const PrognosticState& x);
  void fill(double value);

  bool operator==(const PrognosticState& o) const = default;

  template <class F>
  void for_each_field(F&& f) {
    f(u);
    f(v);
    f(w);
    f(phi);
    f(Theta);
    f(dpids);
  }
  template <class F>
  void for_each_field(F&& f) const {
    f(u);
    f(v);
    f(w);
    f(phi);
    f(Theta);
    f(dpids);
  }
};

/// A tendency has the shape of the prognostic state.
using Tendency = PrognosticState;

/// Diagnosed quantities. Names follow the prognostic naming; `d*_dx` are
/// assembled horizontal derivatives on the level where the field lives.
struct DiagnosticState {
  // midpoints
  ColumnField p;
  ColumnField Pi;
  ColumnField theta_v;
  ColumnField dphids;
  ColumnField rho;
  ColumnField dPi_dx;
  ColumnField div_Theta_u;  ///< d(Theta u)/dx
  ColumnField div_mass;     ///< d(dpids u)/dx
  ColumnField dv_dx;        ///< relative vorticity in the slice
  // interfaces
  ColumnField pi_int;
  ColumnField dpds;
  ColumnField mu;
  ColumnField Sdot;
  ColumnField sdot;
  ColumnField u_tilde;
  ColumnField theta_v_tilde;
  ColumnField dphi_dx;
  ColumnField dw_dx;
  // per column
  std::vector<double> p_surf;
  double p_top = 0.0;

  DiagnosticState() = default;
  DiagnosticState(int ncol, int n);
};

}  // namespace nhs
