#include "nhslice/energy.hpp"

#include <algorithm>
#include <cmath>

namespace nhs {

namespace {

// Weights of the primed interface sum: ds_int with halved end points.
std::vector<double> primed_weights(const LevelGrid& g) {
  const auto dsi = g.ds_int();
  std::vector<double> w(dsi.begin(), dsi.end());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

// (1/(g L)) hint(column values)
double global(const Model& m, const std::vector<double>& col) {
  return hops::hint(m.hgrid(), col) / (m.constants().g * m.hgrid().length());
}

struct ColumnRate {
  double sum = 0.0;
  double abs = 0.0;
  void add(double v) {
    sum += v;
    abs += std::abs(v);
  }
};

struct TendencyColumn {
  std::span<const double> u, v, w, phi, Theta, dpids;
};

// Contraction of the discrete functional derivatives of K + I + P with one
// column of a tendency. The phi contribution is taken in the form
//   sum' avg(dpids) phi_t + sum p ddn_i2m(phi_t) + p_top phi_t[0]
// which is the exact derivative of P + I along phi_t, surface included.
ColumnRate column_rate(const Model& m, const PrognosticState& s, const DiagnosticState& d, int col,
                       const TendencyColumn& t, const std::vector<double>& wint) {
  const auto& g = m.vgrid();
  const int n = g.n();
  const auto ds = g.ds_mid();
  const double cp = m.constants().cp;
  std::vector<double> dpids_i(n + 1), dpids_t_i(n + 1), phibar(n), w2bar(n), w2(n + 1);
  auto dpids = s.dpids.column(col);
  auto phi = s.phi.column(col);
  auto w = s.w.column(col);
  vops::avg_m2i(g, dpids, dpids_i);
  vops::avg_m2i(g, t.dpids, dpids_t_i);
  vops::avg_i2m(g, phi, phibar);

  ColumnRate r;
  for (int k = 0; k < n; ++k) {
    const double u = s.u(col, k), v = s.v(col, k);
    r.add(ds[k] * dpids[k] * u * t.u[k]);
    r.add(ds[k] * dpids[k] * v * t.v[k]);
    r.add(ds[k] * cp * d.Pi(col, k) * t.Theta[k]);
    r.add(ds[k] * (0.5 * (u * u + v * v) + phibar[k]) * t.dpids[k]);
    r.add(d.p(col, k) * (t.phi[k + 1] - t.phi[k]));
  }
  for (int k = 0; k <= n; ++k) {
    r.add(wint[k] * dpids_i[k] * w[k] * t.w[k]);
    r.add(wint[k] * dpids_i[k] * t.phi[k]);
    r.add(wint[k] * 0.5 * dpids_t_i[k] * w[k] * w[k]);
  }
  r.add(d.p_top * t.phi[0]);
  return r;
}

TendencyColumn tendency_column(const Tendency& t, int col) {
  return {t.u.column(col),   t.v.column(col),     t.w.column(col),
          t.phi.column(col), t.Theta.column(col), t.dpids.column(col)};
}

}  // namespace

Energies compute_energies(const Model& m, const PrognosticState& s, const DiagnosticState& d) {
  const auto& g = m.vgrid();
  const int n = g.n(), ncol = m.ncol();
  const auto ds = g.ds_mid();
  const auto wint = primed_weights(g);
  const double cp = m.constants().cp;
  std::vector<double> kc(ncol), ic(ncol), pc(ncol), hat(ncol);
  std::vector<double> dpids_i(n + 1), phibar(n);
  for (int c = 0; c < ncol; ++c) {
    auto dpids = s.dpids.column(c);
    vops::avg_m2i(g, dpids, dpids_i);
    vops::avg_i2m(g, s.phi.column(c), phibar);
    double k_sum = 0.0, i_sum = 0.0, p_sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const double u = s.u(c, k), v = s.v(c, k);
      k_sum += 0.5 * dpids[k] * (u * u + v * v) * ds[k];
      i_sum += (cp * s.Theta(c, k) * d.Pi(c, k) + d.dphids(c, k) * d.p(c, k)) * ds[k];
      p_sum += dpids[k] * phibar[k] * ds[k];
    }
    for (int k = 0; k <= n; ++k) k_sum += 0.5 * dpids_i[k] * s.w(c, k) * s.w(c, k) * wint[k];
    hat[c] = d.p_top * s.phi(c, 0);
    kc[c] = k_sum;
    ic[c] = i_sum + hat[c];
    pc[c] = p_sum;
  }
  Energies e;
  e.K = global(m, kc);
  e.I = global(m, ic);
  e.P = global(m, pc);
  e.p_hat_term = global(m, hat);
  return e;
}

Transfers compute_transfers(const Model& m, const PrognosticState& s, const DiagnosticState& d) {
  const auto& g = m.vgrid();
  const int n = g.n(), ncol = m.ncol();
  const auto ds = g.ds_mid();
  const auto wint = primed_weights(g);
  const double cp = m.constants().cp;
  const double grav = m.constants().g;

  enum { T1, T2, T3, S1, S2, S3, NT };
  std::vector<std::vector<double>> val(NT, std::vector<double>(ncol)), mag = val;
  std::vector<double> dpids_i(n + 1), mgp(n + 1), mgp_bar(n), wbar(n);
  for (int c = 0; c < ncol; ++c) {
    auto dpids = s.dpids.column(c);
    vops::avg_m2i(g, dpids, dpids_i);
    for (int k = 0; k <= n; ++k) mgp[k] = d.mu(c, k) * d.dphi_dx(c, k);
    vops::avg_i2m(g, mgp, mgp_bar);
    vops::avg_i2m(g, s.w.column(c), wbar);
    double v[NT] = {}, a[NT] = {};
    auto add = [&](int i, double x) {
      v[i] += x;
      a[i] += std::abs(x);
    };
    for (int k = 0; k < n; ++k) {
      const double u = s.u(c, k);
      add(T1, cp * s.Theta(c, k) * u * d.dPi_dx(c, k) * ds[k]);
      add(T3, u * dpids[k] * mgp_bar[k] * ds[k]);
      add(S1, cp * d.Pi(c, k) * d.div_Theta_u(c, k) * ds[k]);
      add(S2, grav * wbar[k] * dpids[k] * ds[k]);
    }
    for (int k = 0; k <= n; ++k) {
      const double gwdp = grav * s.w(c, k) * d.dpds(c, k) * wint[k];
      add(T2, grav * s.w(c, k) * dpids_i[k] * wint[k]);
      add(T3, -gwdp);
      add(S3, d.dpds(c, k) * d.u_tilde(c, k) * d.dphi_dx(c, k) * wint[k]);
      add(S3, -gwdp);
    }
    for (int i = 0; i < NT; ++i) {
      val[i][c] = v[i];
      mag[i][c] = a[i];
    }
  }
  Transfers tr;
  double* out[NT] = {&tr.T1, &tr.T2, &tr.T3, &tr.S1, &tr.S2, &tr.S3};
  double* out_abs[NT] = {&tr.T1_abs, &tr.T2_abs, &tr.T3_abs, &tr.S1_abs, &tr.S2_abs, &tr.S3_abs};
  for (int i = 0; i < NT; ++i) {
    *out[i] = global(m, val[i]);
    *out_abs[i] = global(m, mag[i]);
  }
  return tr;
}

Residuals compute_residuals(const Energies& e0, const Energies& e1, const Transfers& tr, double dt) {
  Residuals r;
  r.R_P = (e1.P - e0.P) / dt - tr.S2;
  r.R_I = (e1.I - e0.I) / dt + tr.S1 - tr.S3;
  r.R_K = (e1.K - e0.K) / dt + tr.T1 + tr.T2 + tr.T3;
  return r;
}

Residuals compute_residuals(const Energies& e0, const Energies& e1, const Transfers& tr0,
                            const Transfers& tr1, double dt) {
  Transfers mid;
  mid.T1 = 0.5 * (tr0.T1 + tr1.T1);
  mid.T2 = 0.5 * (tr0.T2 + tr1.T2);
  mid.T3 = 0.5 * (tr0.T3 + tr1.T3);
  mid.S1 = 0.5 * (tr0.S1 + tr1.S1);
  mid.S2 = 0.5 * (tr0.S2 + tr1.S2);
  mid.S3 = 0.5 * (tr0.S3 + tr1.S3);
  return compute_residuals(e0, e1, mid, dt);
}

double transfer_identity_error(const Transfers& tr) {
  auto rel = [](double a, double b, double scale) {
    return scale > 0 ? std::abs(a - b) / scale : std::abs(a - b);
  };
  const double e1 = rel(tr.S1, -tr.T1, std::max(tr.S1_abs, tr.T1_abs));
  const double e2 = rel(tr.S2, tr.T2, std::max(tr.S2_abs, tr.T2_abs));
  const double e3 = rel(tr.S3, tr.T3, std::max(tr.S3_abs, tr.T3_abs));
  return std::max({e1, e2, e3});
}

double energy_rate(const Model& m, const PrognosticState& s, const DiagnosticState& d,
                   const Tendency& t) {
  const auto wint = primed_weights(m.vgrid());
  std::vector<double> col(m.ncol());
  for (int c = 0; c < m.ncol(); ++c) col[c] = column_rate(m, s, d, c, tendency_column(t, c), wint).sum;
  return global(m, col);
}

double energy_rate_magnitude(const Model& m, const PrognosticState& s, const DiagnosticState& d,
                             const Tendency& t) {
  const auto wint = primed_weights(m.vgrid());
  std::vector<double> col(m.ncol());
  for (int c = 0; c < m.ncol(); ++c) col[c] = column_rate(m, s, d, c, tendency_column(t, c), wint).abs;
  return global(m, col);
}

double RelabelingResult::max_relative() const {
  double worst = 0.0;
  for (std::size_t c = 0; c < residual.size(); ++c) {
    const double r = magnitude[c] > 0 ? std::abs(residual[c]) / magnitude[c] : std::abs(residual[c]);
    worst = std::max(worst, r);
  }
  return worst;
}

RelabelingResult relabeling_residual(const Model& m, const PrognosticState& s,
                                     const DiagnosticState& d, const ColumnField& Sdot,
                                     bool naive_theta) {
  const auto& g = m.vgrid();
  const int n = g.n(), ncol = m.ncol();
  if (Sdot.ncol() != ncol || Sdot.nlev() != n + 1)
    throw GridError("relabeling_residual: Sdot has the wrong shape");
  const double cp = m.constants().cp;
  const auto wint = primed_weights(g);

  std::vector<double> tu(n), tv(n), tw(n + 1), tphi(n + 1), tTheta(n), tdp(n);
  std::vector<double> dpids_i(n + 1), phibar(n), dphibar(n + 1), flux(n + 1), theta_i(n + 1);
  std::vector<double> dPi(n + 1), dphids_i(n + 1);
  RelabelingResult res;
  res.residual.resize(ncol);
  res.magnitude.resize(ncol);
  for (int c = 0; c < ncol; ++c) {
    auto S = Sdot.column(c);
    auto dpids = s.dpids.column(c);
    auto phi = s.phi.column(c);
    vops::sb81_adv_mid(g, S, s.u.column(c), dpids, tu);
    vops::sb81_adv_mid(g, S, s.v.column(c), dpids, tv);
    vops::sb81_adv_int(g, S, s.w.column(c), dpids, tw);
    vops::avg_m2i(g, dpids, dpids_i);
    vops::avg_i2m(g, phi, phibar);
    vops::ddn_m2i(g, phibar, vops::MidBoundary{phi[0], phi[n]}, dphibar);

    // theta_v at interfaces: the tilde average built from this column's mu,
    // or the plain average for the ablation.
    if (naive_theta) {
      vops::avg_m2i(g, d.theta_v.column(c), theta_i);
    } else {
      auto Pi = d.Pi.column(c);
      vops::ddn_m2i(g, Pi, vops::MidBoundary{Pi[0], Pi[n - 1]}, dPi);
      vops::avg_m2i(g, d.dphids.column(c), dphids_i);
      theta_i[0] = theta_i[n] = 0.0;
      for (int k = 1; k < n; ++k) theta_i[k] = -(d.mu(c, k) / cp) * dphids_i[k] / dPi[k];
    }
    for (int k = 0; k <= n; ++k) flux[k] = theta_i[k] * S[k];
    vops::ddn_i2m(g, flux, tTheta);
    vops::ddn_i2m(g, S, tdp);

    for (int k = 0; k < n; ++k) {
      tu[k] = -tu[k];
      tv[k] = -tv[k];
      tTheta[k] = -tTheta[k];
      tdp[k] = -tdp[k];
    }
    for (int k = 0; k <= n; ++k) {
      tw[k] = -tw[k];
      tphi[k] = -(S[k] / dpids_i[k]) * dphibar[k];
    }
    tw[n] = 0.0;
    tphi[n] = 0.0;
    const auto r = column_rate(m, s, d, c, TendencyColumn{tu, tv, tw, tphi, tTheta, tdp}, wint);
    res.residual[c] = r.sum;
    res.magnitude[c] = r.abs;
  }
  return res;
}

}  // namespace nhs
