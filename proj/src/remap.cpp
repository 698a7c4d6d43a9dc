#include "nhslice/remap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nhs {

double RemapPlan::max_displacement() const {
  double worst = 0.0;
  for (int c = 0; c < ncol; ++c) {
    const double depth = pi_src(c, n) - pi_src(c, 0);
    for (int k = 0; k <= n; ++k)
      worst = std::max(worst, std::abs(pi_tgt(c, k) - pi_src(c, k)) / depth);
  }
  return worst;
}

std::vector<Overlap> compute_overlaps(std::span<const double> ps, std::span<const double> pt) {
  const int n = static_cast<int>(ps.size()) - 1;
  if (static_cast<int>(pt.size()) != n + 1) throw GridError("compute_overlaps: level counts differ");
  if (ps[0] != pt[0] || ps[n] != pt[n]) throw ContractError("compute_overlaps: endpoints differ");
  std::vector<Overlap> out;
  int j = 0, k = 0;
  double a = ps[0];
  while (j < n && k < n) {
    const double b = std::min(ps[j + 1], pt[k + 1]);
    if (b > a) {
      const double width = ps[j + 1] - ps[j];
      Overlap o;
      o.tgt = k;
      o.src = j;
      o.x0 = (a - ps[j]) / width;
      o.x1 = b == ps[j + 1] ? 1.0 : (b - ps[j]) / width;
      out.push_back(o);
      a = b;
    }
    if (ps[j + 1] <= b) ++j;
    if (pt[k + 1] <= b) ++k;
  }
  return out;
}

namespace {

// Interface values from the derivative of the polynomial through the
// cumulative content at up to five neighbouring interfaces.
std::vector<double> edge_values(std::span<const double> pi, std::span<const double> q) {
  const int n = static_cast<int>(q.size());
  std::vector<double> C(n + 1, 0.0), edge(n + 1);
  for (int j = 0; j < n; ++j) C[j + 1] = C[j] + q[j] * (pi[j + 1] - pi[j]);
  const int m = std::min(5, n + 1);
  for (int i = 0; i <= n; ++i) {
    const int start = std::clamp(i - 2, 0, n + 1 - m);
    const double xi = pi[i];
    double d = 0.0;
    for (int l = start; l < start + m; ++l) {
      double deriv;
      if (l == i) {
        deriv = 0.0;
        for (int r = start; r < start + m; ++r)
          if (r != i) deriv += 1.0 / (xi - pi[r]);
      } else {
        double num = 1.0, den = 1.0;
        for (int r = start; r < start + m; ++r) {
          if (r == l) continue;
          den *= pi[l] - pi[r];
          if (r != i) num *= xi - pi[r];
        }
        deriv = num / den;
      }
      d += (C[l] - C[i]) * deriv;
    }
    edge[i] = d;
  }
  return edge;
}

struct Parabola {
  double aL, aR, a6;
  // integral over [0, x] of the reconstruction, per unit local width
  double integral(double x) const {
    const double da = aR - aL;
    return aL * x + da * x * x / 2.0 + a6 * (x * x / 2.0 - x * x * x / 3.0);
  }
};

std::vector<Parabola> reconstruct(std::span<const double> pi, std::span<const double> q,
                                  bool monotone) {
  const int n = static_cast<int>(q.size());
  auto edge = edge_values(pi, q);
  if (monotone) {
    for (int i = 0; i <= n; ++i) {
      const double lo = std::min(q[std::max(i - 1, 0)], q[std::min(i, n - 1)]);
      const double hi = std::max(q[std::max(i - 1, 0)], q[std::min(i, n - 1)]);
      edge[i] = std::clamp(edge[i], lo, hi);
    }
  }
  std::vector<Parabola> par(n);
  for (int j = 0; j < n; ++j) {
    double aL = edge[j], aR = edge[j + 1];
    const double qm = q[j];
    if (monotone) {
      const double da = aR - aL;
      const double mid = qm - 0.5 * (aL + aR);
      if ((aR - qm) * (qm - aL) <= 0.0) {
        aL = aR = qm;
      } else if (da * mid > da * da / 6.0) {
        aL = 3.0 * qm - 2.0 * aR;
      } else if (-da * da / 6.0 > da * mid) {
        aR = 3.0 * qm - 2.0 * aL;
      }
    }
    par[j] = {aL, aR, 6.0 * (qm - 0.5 * (aL + aR))};
  }
  return par;
}

}  // namespace

std::vector<double> remap_mixing_ratio(std::span<const double> pi_src, std::span<const double> q,
                                       std::span<const double> pi_tgt, const std::vector<Overlap>& ov,
                                       bool monotone) {
  const int n = static_cast<int>(q.size());
  const auto par = reconstruct(pi_src, q, monotone);
  std::vector<double> content(n, 0.0);
  for (const auto& o : ov) {
    const double width = pi_src[o.src + 1] - pi_src[o.src];
    const double piece = o.x0 == 0.0 && o.x1 == 1.0
                             ? q[o.src]
                             : (par[o.src].integral(o.x1) - par[o.src].integral(o.x0)) / (o.x1 - o.x0);
    content[o.tgt] += piece * (o.x1 - o.x0) * width;
  }
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = content[k] / (pi_tgt[k + 1] - pi_tgt[k]);
  if (monotone) {
    const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
    const double slack = 1e-12 * std::max({std::abs(*lo), std::abs(*hi), 1e-300});
    for (int k = 0; k < n; ++k) {
      if (out[k] < *lo - slack || out[k] > *hi + slack) {
        std::ostringstream msg;
        msg << "remap limiter overshoot at target layer " << k << ": " << out[k] << " outside ["
            << *lo << ", " << *hi << "]";
        throw ContractError(msg.str());
      }
    }
  }
  return out;
}

RemapPlan build_plan(const Model& m, const PrognosticState& s) {
  const int n = m.n(), ncol = m.ncol();
  const auto ds = m.vgrid().ds_mid();
  RemapPlan plan;
  plan.ncol = ncol;
  plan.n = n;
  plan.pi_src = ColumnField(ncol, n + 1);
  plan.pi_tgt = ColumnField(ncol, n + 1);
  plan.overlaps.resize(ncol);
  std::vector<double> tgt(n + 1);
  for (int c = 0; c < ncol; ++c) {
    plan.pi_src(c, 0) = m.p_top();
    for (int k = 0; k < n; ++k) {
      if (!(s.dpids(c, k) > 0)) {
        std::ostringstream msg;
        msg << "build_plan: levels cross at column " << c << ", level " << k;
        throw StateError(msg.str());
      }
      plan.pi_src(c, k + 1) = plan.pi_src(c, k) + s.dpids(c, k) * ds[k];
    }
    tgt = pi_interfaces(m.hybrid(), plan.pi_src(c, n));
    tgt[0] = plan.pi_src(c, 0);
    tgt[n] = plan.pi_src(c, n);
    for (int k = 0; k <= n; ++k) {
      if (k > 0 && !(tgt[k] > tgt[k - 1])) throw StateError("build_plan: target levels not monotone");
      plan.pi_tgt(c, k) = tgt[k];
    }
    plan.overlaps[c] = compute_overlaps(plan.pi_src.column(c), plan.pi_tgt.column(c));
  }
  return plan;
}

void remap_column(const Model& m, const RemapPlan& plan, int col, const PrognosticState& src,
                  PrognosticState& dst, const RemapOptions& opt) {
  const int n = m.n();
  const auto& c = m.constants();
  const auto ds = m.vgrid().ds_mid();
  const auto ps = plan.pi_src.column(col);
  const auto pt = plan.pi_tgt.column(col);
  const auto& ov = plan.overlaps[col];

  std::vector<double> theta(n);
  for (int k = 0; k < n; ++k) theta[k] = src.Theta(col, k) / src.dpids(col, k);
  const auto theta_t = remap_mixing_ratio(ps, theta, pt, ov, opt.monotone);
  const auto u_t = remap_mixing_ratio(ps, src.u.column(col), pt, ov, opt.monotone);
  const auto v_t = remap_mixing_ratio(ps, src.v.column(col), pt, ov, opt.monotone);

  // Nonhydrostatic pressure deviation at source midpoints, carried to the
  // target midpoints by linear interpolation in pi.
  std::vector<double> pm_src(n), dev(n), pm_tgt(n);
  for (int k = 0; k < n; ++k) {
    const double D = (src.phi(col, k + 1) - src.phi(col, k)) / ds[k];
    pm_src[k] = 0.5 * (ps[k] + ps[k + 1]);
    dev[k] = eos_pressure(c, src.Theta(col, k), D) - pm_src[k];
    pm_tgt[k] = 0.5 * (pt[k] + pt[k + 1]);
  }
  auto interp = [](std::span<const double> x, std::span<const double> y, double xq) {
    const std::size_t n = x.size();
    if (xq <= x[0]) return y[0];
    if (xq >= x[n - 1]) return y[n - 1];
    const auto it = std::upper_bound(x.begin(), x.end(), xq);
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const double t = (xq - x[j - 1]) / (x[j] - x[j - 1]);
    return y[j - 1] + t * (y[j] - y[j - 1]);
  };

  for (int k = 0; k < n; ++k) {
    const double dpids = (pt[k + 1] - pt[k]) / ds[k];
    dst.dpids(col, k) = dpids;
    dst.Theta(col, k) = theta_t[k] * dpids;
    dst.u(col, k) = u_t[k];
    dst.v(col, k) = v_t[k];
  }
  for (int k = 0; k <= n; ++k) dst.w(col, k) = interp(ps, src.w.column(col), pt[k]);
  dst.w(col, 0) = src.w(col, 0);
  dst.w(col, n) = src.w(col, n);

  // phi from the EOS so diagnose_eos returns the carried pressure.
  dst.phi(col, n) = src.phi(col, n);
  const double kappa = c.kappa();
  for (int k = n - 1; k >= 0; --k) {
    const double p = pm_tgt[k] + interp(pm_src, dev, pm_tgt[k]);
    if (!(p > 0)) throw StateError("remap_column: nonpositive target pressure");
    const double Pi = std::pow(p / c.p0, kappa);
    const double dphids = -c.R * dst.Theta(col, k) * Pi / p;
    dst.phi(col, k) = dst.phi(col, k + 1) - dphids * ds[k];
  }
}

PrognosticState remap(const Model& m, const PrognosticState& s, const RemapOptions& opt) {
  const auto plan = build_plan(m, s);
  PrognosticState out = s;
  for (int c = 0; c < m.ncol(); ++c) remap_column(m, plan, c, s, out, opt);
  return out;
}

}  // namespace nhs
