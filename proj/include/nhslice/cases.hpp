#pragma once

#include "nhslice/config.hpp"
#include "nhslice/model.hpp"

namespace nhs {

/// Isothermal atmosphere at rest with uniform surface pressure ps. Midpoint
/// pressures are the averages of the hybrid interface pressures, which makes
/// mu = 1 at every interface and the tendency vanish.
PrognosticState init_hydrostatic_rest(const Model& m, double T0, double ps);

/// Rest state plus a potential temperature bump centred in the domain,
/// sin(pi eta) in the vertical, with its horizontal mean removed on every
/// level so the net Theta anomaly is zero. Geopotential is rebuilt so the
/// perturbed state is discretely hydrostatic; u starts at `mean_wind`.
PrognosticState init_gravity_wave(const Model& m, double T0, double ps, double amplitude,
                                  double half_width, double mean_wind);

/// Dispatch on config.test_case.
PrognosticState initial_state(const Model& m, const RunConfig& c);

}  // namespace nhs
