#pragma once

#include <span>
#include <string>
#include <utility>

#include "nhslice/hops.hpp"
#include "nhslice/state.hpp"
#include "nhslice/vcoord.hpp"
#include "nhslice/vops.hpp"

namespace nhs {

enum class VerticalMode { eulerian, lagrangian };

std::string to_string(VerticalMode mode);
VerticalMode vertical_mode_from_string(const std::string& s);

struct ModelConfig {
  VerticalMode mode = VerticalMode::eulerian;
  PhysicalConstants constants{};
  /// Horizontal hyperviscosity coefficient (m^4/s), applied to u, v, w and Theta.
  double nu = 0.0;
  /// Steps between vertical remaps in Lagrangian mode.
  int remap_interval = 3;
  /// When false the acoustic pair is treated explicitly and the implicit
  /// part of the HEVI split is identically zero.
  bool implicit_acoustics = true;

  void validate() const;
};

/// Closed-form equation of state: p from Theta and dphi/ds at a midpoint,
///   p = p0 * (R Theta / (-p0 dphids))^(cp/cv).
double eos_pressure(const PhysicalConstants& c, double Theta, double dphids);

/// The discrete nonhydrostatic slice model: diagnostics and right-hand sides
/// on a Lorenz-staggered mass coordinate over a periodic spectral-element
/// horizontal grid.
class Model {
 public:
  Model(LevelGrid vgrid, HybridCoefficients hybrid, SEGrid1D hgrid, ModelConfig config);

  const LevelGrid& vgrid() const { return vgrid_; }
  const HybridCoefficients& hybrid() const { return hybrid_; }
  const SEGrid1D& hgrid() const { return hgrid_; }
  const ModelConfig& config() const { return config_; }
  const PhysicalConstants& constants() const { return config_.constants; }
  int n() const { return vgrid_.n(); }
  int ncol() const { return hgrid_.ncol(); }
  double p_top() const { return hybrid_.p_top(); }

  PrognosticState make_state() const { return PrognosticState(ncol(), n()); }
  DiagnosticState make_diagnostics() const { return DiagnosticState(ncol(), n()); }

  /// Checks positivity of dpids and Theta and monotone geopotential.
  void validate_state(const PrognosticState& s) const;

  // ---- diagnostics, in the order `diagnose` applies them ---------------

  /// p, Pi, theta_v, dphids, rho at midpoints and hydrostatic pi at
  /// interfaces. Throws StateError naming column and level if dphids >= 0.
  void diagnose_eos(const PrognosticState& s, DiagnosticState& d) const;
  /// Assembled horizontal derivatives stored in the diagnostic state.
  void diagnose_horizontal(const PrognosticState& s, DiagnosticState& d) const;
  /// Sdot and sdot. Zero in Lagrangian mode.
  void diagnose_sdot(const PrognosticState& s, DiagnosticState& d) const;
  /// Density weighted u_tilde at interfaces.
  void diagnose_u_tilde(const PrognosticState& s, DiagnosticState& d) const;
  /// p_top, p_surf, dp/ds and mu. The surface pressure is chosen so the w
  /// equation holds at the surface with w = 0 there (flat bottom).
  void diagnose_pressure_bcs(const PrognosticState& s, DiagnosticState& d) const;
  /// theta_v_tilde at interior interfaces (Eulerian mode). Boundary values
  /// copy the adjacent midpoint theta_v and are never used.
  void diagnose_theta_tilde(const PrognosticState& s, DiagnosticState& d) const;

  DiagnosticState diagnose(const PrognosticState& s) const;
  void diagnose(const PrognosticState& s, DiagnosticState& d) const;

  // ---- right-hand sides --------------------------------------------------

  Tendency tendency(const PrognosticState& s) const;
  Tendency tendency(const PrognosticState& s, const DiagnosticState& d) const;

  /// HEVI split of the tendency. The implicit part holds -g(1 - mu) in the w
  /// equation and +g w in the phi equation at every interface above the
  /// surface; the explicit part holds everything else.
  std::pair<Tendency, Tendency> hevi_split(const PrognosticState& s) const;
  Tendency explicit_tendency(const PrognosticState& s) const;
  Tendency implicit_tendency(const PrognosticState& s) const;

  /// mu at interfaces 0..n-1 of one column from its Theta, dpids and phi
  /// through the closed-form EOS, as seen by the implicit solver. The surface
  /// entry is left untouched.
  void column_mu(std::span<const double> Theta, std::span<const double> dpids,
                 std::span<const double> phi, std::span<double> mu) const;

  /// Total mass and Theta: hint over columns of vint_mid(dpids), vint_mid(Theta).
  double total_mass(const PrognosticState& s) const;
  double total_theta(const PrognosticState& s) const;

 private:
  void explicit_part(const PrognosticState& s, const DiagnosticState& d, Tendency& t) const;
  void implicit_part(const PrognosticState& s, const DiagnosticState& d, Tendency& t) const;

  LevelGrid vgrid_;
  HybridCoefficients hybrid_;
  SEGrid1D hgrid_;
  ModelConfig config_;
};

/// Applies a horizontal operator level by level: out(:, k) = op(in(:, k)).
template <class Op>
void for_each_level(const ColumnField& in, ColumnField& out, Op&& op) {
  std::vector<double> a(in.ncol()), b(in.ncol());
  for (int k = 0; k < in.nlev(); ++k) {
    in.gather_level(k, a);
    op(std::span<const double>(a), std::span<double>(b));
    out.scatter_level(k, b);
  }
}

}  // namespace nhs
