#pragma once

#include <span>
#include <vector>

#include "nhslice/vcoord.hpp"

// Lorenz-staggered vertical operator algebra.
//
// Every operator comes in two flavours: a span kernel that writes into a
// caller-provided buffer (used by the model inner loops) and a value-returning
// overload on the strong field types. Buffers must have the level count of the
// grid they are used with; a length mismatch is reported as GridError.
namespace nhs::vops {

template <class Tag>
struct LevelField {
  std::vector<double> values;

  LevelField() = default;
  explicit LevelField(std::vector<double> v) : values(std::move(v)) {}
  LevelField(std::size_t size, double fill) : values(size, fill) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  operator std::span<const double>() const { return values; }
  operator std::span<double>() { return values; }
};

struct MidTag;
struct IntTag;
/// Values at the n layer midpoints.
using MidField = LevelField<MidTag>;
/// Values at the n+1 layer interfaces.
using IntField = LevelField<IntTag>;

/// Boundary values closing the one-sided derivative of a midpoint field.
struct MidBoundary {
  double top = 0.0;
  double surf = 0.0;
};

MidField mid_field(const LevelGrid& grid, double fill = 0.0);
IntField int_field(const LevelGrid& grid, double fill = 0.0);

// ---- span kernels -------------------------------------------------------

void avg_i2m(const LevelGrid& g, std::span<const double> phi, std::span<double> out);
void avg_m2i(const LevelGrid& g, std::span<const double> p, std::span<double> out);
void ddn_i2m(const LevelGrid& g, std::span<const double> phi, std::span<double> out);
void ddn_m2i(const LevelGrid& g, std::span<const double> p, MidBoundary bc, std::span<double> out);
double vint_mid(const LevelGrid& g, std::span<const double> p);
double vint_int(const LevelGrid& g, std::span<const double> phi);

/// [sdot dp/ds] at midpoints, SB81 form:
///   dpids_k [sdot dp/ds]_k = (1 / ds_k) avg_i2m(Sdot * dp/ds * ds_int)_k
/// Only the interior derivative stencil enters since Sdot vanishes at the
/// top and surface. Throws ContractError otherwise.
void sb81_adv_mid(const LevelGrid& g, std::span<const double> Sdot, std::span<const double> p,
                  std::span<const double> dpids, std::span<double> out);

/// [sdot dw/ds] at interfaces, the interface generalisation of SB81:
///   avg_m2i(dpids) [sdot dw/ds] = avg_m2i( avg_i2m(Sdot) * ddn_i2m(w) )
/// Evaluated with the single-average stencil
///   interior: (Sbar_k (w_{k+1}-w_k) + Sbar_{k-1} (w_k - w_{k-1})) / (2 ds_int_k)
///   top:      Sbar_0 (w_1 - w_0) / ds_0
///   surface:  Sbar_{n-1} (w_n - w_{n-1}) / ds_{n-1}
/// with Sbar = avg_i2m(Sdot), all divided by avg_m2i(dpids).
void sb81_adv_int(const LevelGrid& g, std::span<const double> Sdot, std::span<const double> w,
                  std::span<const double> dpids, std::span<double> out);

// ---- value-returning overloads -----------------------------------------

MidField avg_i2m(const LevelGrid& g, const IntField& phi);
IntField avg_m2i(const LevelGrid& g, const MidField& p);
MidField ddn_i2m(const LevelGrid& g, const IntField& phi);
IntField ddn_m2i(const LevelGrid& g, const MidField& p, MidBoundary bc);
double vint_mid(const LevelGrid& g, const MidField& p);
double vint_int(const LevelGrid& g, const IntField& phi);
MidField sb81_adv_mid(const LevelGrid& g, const IntField& Sdot, const MidField& p,
                      const MidField& dpids);
IntField sb81_adv_int(const LevelGrid& g, const IntField& Sdot, const IntField& w,
                      const MidField& dpids);

// ---- alternative algebraic forms ---------------------------------------
//
// These evaluate the same operators through a different composition of the
// primitive operators. They exist so that equivalence of the forms can be
// checked numerically; the model uses the kernels above.

/// dpids * [sdot dp/ds] via the flux form
///   ddn_i2m( Sdot * avg_m2i(p / ds_mid) * ds_int ) - p * ddn_i2m(Sdot)
MidField sb81_mid_flux_form(const LevelGrid& g, const IntField& Sdot, const MidField& p);
/// dpids * [sdot dp/ds] via the averaged form (1/ds) avg_i2m(Sdot dp/ds ds_int).
MidField sb81_mid_average_form(const LevelGrid& g, const IntField& Sdot, const MidField& p);

/// avg_m2i(dpids) * [sdot dw/ds] via the double average
///   avg_m2i( avg_i2m(Sdot) * ddn_i2m(w) )
IntField sb81_int_average_form(const LevelGrid& g, const IntField& Sdot, const IntField& w);
/// avg_m2i(dpids) * [sdot dw/ds] via the flux form
///   ddn_m2i(avg_i2m(Sdot) * avg_i2m(w)) - w * ddn_m2i(avg_i2m(Sdot))
/// with zero boundary values (Sdot = 0 at top and surface).
IntField sb81_int_flux_form(const LevelGrid& g, const IntField& Sdot, const IntField& w);

}  // namespace nhs::vops
