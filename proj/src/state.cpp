#include "nhslice/state.hpp"

#include <stdexcept>

namespace nhs {

void ColumnField::gather_level(int k, std::span<double> out) const {
  for (int c = 0; c < ncol_; ++c) out[c] = (*this)(c, k);
}

void ColumnField::scatter_level(int k, std::span<const double> in) {
  for (int c = 0; c < ncol_; ++c) (*this)(c, k) = in[c];
}

void ColumnField::axpy(double a, const ColumnField& x) {
  if (x.ncol_ != ncol_ || x.nlev_ != nlev_) throw std::invalid_argument("ColumnField::axpy: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
}

PrognosticState::PrognosticState(int ncol, int n)
    : u(ncol, n), v(ncol, n), w(ncol, n + 1), phi(ncol, n + 1), Theta(ncol, n), dpids(ncol, n) {}

void PrognosticState::axpy(double a, const PrognosticState& x) {
  u.axpy(a, x.u);
  v.axpy(a, x.v);
  w.axpy(a, x.w);
  phi.axpy(a, x.phi);
  Theta.axpy(a, x.Theta);
  dpids.axpy(a, x.dpids);
}

void PrognosticState::fill(double value) {
  for_each_field([value](ColumnField& f) { f.fill(value); });
}

DiagnosticState::DiagnosticState(int ncol, int n)
    : p(ncol, n),
      Pi(ncol, n),
      theta_v(ncol, n),
      dphids(ncol, n),
      rho(ncol, n),
      dPi_dx(ncol, n),
      div_Theta_u(ncol, n),
      div_mass(ncol, n),
      dv_dx(ncol, n),
      pi_int(ncol, n + 1),
      dpds(ncol, n + 1),
      mu(ncol, n + 1),
      Sdot(ncol, n + 1),
      sdot(ncol, n + 1),
      u_tilde(ncol, n + 1),
      theta_v_tilde(ncol, n + 1),
      dphi_dx(ncol, n + 1),
      dw_dx(ncol, n + 1),
      p_surf(ncol, 0.0) {}

}  // namespace nhs
