#include "nhslice/driver.hpp"

#include <cfloat>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "nhslice/cases.hpp"
#include "nhslice/io.hpp"

namespace nhs {

Model make_model(const RunConfig& c, bool with_dissipation) {
  c.validate();
  LevelGrid vg = build_uniform_grid(c.n);
  HybridCoefficients hy = build_hybrid(vg, c.p_top, c.p0, c.hybrid_exponent);
  return Model(std::move(vg), std::move(hy), SEGrid1D(c.ne, c.length), c.model_config(with_dissipation));
}

namespace {

double rel_change(double a, double b) { return std::abs(b - a) / std::abs(a); }

EnergyBudget make_row(double t, const Energies& e, const Transfers& tr) {
  EnergyBudget b;
  b.time = t;
  b.energies = e;
  b.transfers = tr;
  return b;
}

int step_count(double duration, double dt) {
  const double steps = duration / dt;
  const double r = std::round(steps);
  if (std::abs(steps - r) > 1e-9 * std::max(1.0, steps))
    throw ConfigError("duration is not a whole number of time steps");
  return static_cast<int>(r);
}

}  // namespace

IntegrationResult integrate(const Model& m, const PrognosticState& s0, const ImexTableau& t,
                            const IntegrationOptions& opt, std::ostream* budget_csv) {
  IntegrationResult res;
  PrognosticState s = s0;
  double time = opt.t0;
  DiagnosticState d = m.diagnose(s);
  Energies e = compute_energies(m, s, d);
  Transfers tr = compute_transfers(m, s, d);
  res.first = e;
  res.max_transfer_error = transfer_identity_error(tr);
  res.budget.push_back(make_row(time, e, tr));
  if (budget_csv) write_budget_row(*budget_csv, res.budget.back());
  double mass = m.total_mass(s), theta = m.total_theta(s);
  const bool lagrangian = m.config().mode == VerticalMode::lagrangian;
  ColumnSolveReport report;

  for (int step = 0; step < opt.steps; ++step) {
    PrognosticState next;
    try {
      next = ark_step(m, s, opt.dt, t, report, opt.newton);
      res.max_newton_iterations = std::max(res.max_newton_iterations, report.max_iterations());
      d = m.diagnose(next);
    } catch (const SolverError& err) {
      res.failed = true;
      res.failure = err.what();
      res.failed_step = step;
      res.failed_column = err.column();
      break;
    } catch (const StateError& err) {
      res.failed = true;
      res.failure = err.what();
      res.failed_step = step;
      break;
    }
    const Energies e1 = compute_energies(m, next, d);
    const Residuals r = compute_residuals(e, e1, tr, opt.dt);
    res.max_abs_R_P = std::max(res.max_abs_R_P, std::abs(r.R_P));
    res.max_abs_R_I = std::max(res.max_abs_R_I, std::abs(r.R_I));
    res.max_abs_R_K = std::max(res.max_abs_R_K, std::abs(r.R_K));
    res.R_K_floor = std::max(
        res.R_K_floor, 64.0 * DBL_EPSILON * (e1.K / opt.dt + tr.T1_abs + tr.T2_abs + tr.T3_abs));

    double mass1 = m.total_mass(next), theta1 = m.total_theta(next);
    res.max_mass_change = std::max(res.max_mass_change, rel_change(mass, mass1));
    res.max_theta_change = std::max(res.max_theta_change, rel_change(theta, theta1));

    Energies e_end = e1;
    double dE_remap = 0.0;
    if (lagrangian && (step + 1) % opt.remap_interval == 0) {
      try {
        next = remap(m, next, opt.remap);
        d = m.diagnose(next);
      } catch (const StateError& err) {
        res.failed = true;
        res.failure = err.what();
        res.failed_step = step;
        break;
      }
      e_end = compute_energies(m, next, d);
      dE_remap = e_end.E() - e1.E();
      res.total_dE_remap += dE_remap;
      const double mass2 = m.total_mass(next), theta2 = m.total_theta(next);
      res.max_mass_change = std::max(res.max_mass_change, rel_change(mass1, mass2));
      res.max_theta_change = std::max(res.max_theta_change, rel_change(theta1, theta2));
      mass1 = mass2;
      theta1 = theta2;
    }

    s = std::move(next);
    time = opt.t0 + (step + 1) * opt.dt;
    e = e_end;
    tr = compute_transfers(m, s, d);
    mass = mass1;
    theta = theta1;
    res.steps_taken = step + 1;

    const bool record = (step + 1) % opt.diag_interval == 0 || step + 1 == opt.steps;
    if (record || opt.audit_every_step)
      res.max_transfer_error = std::max(res.max_transfer_error, transfer_identity_error(tr));
    if (record) {
      EnergyBudget row = make_row(time, e, tr);
      row.residuals = r;
      row.dE_remap = dE_remap;
      res.budget.push_back(row);
      if (budget_csv) write_budget_row(*budget_csv, row);
    }
  }
  res.last = e;
  res.final_state = std::move(s);
  res.final_time = time;
  return res;
}

namespace {

nlohmann::json summary_json(const IntegrationResult& r) {
  nlohmann::json j;
  j["steps"] = r.steps_taken;
  j["final_time"] = r.final_time;
  j["E_start"] = r.first.E();
  j["E_end"] = r.last.E();
  j["max_mass_change"] = r.max_mass_change;
  j["max_theta_change"] = r.max_theta_change;
  j["max_transfer_identity_error"] = r.max_transfer_error;
  j["max_newton_iterations"] = r.max_newton_iterations;
  j["max_abs_R_P"] = r.max_abs_R_P;
  j["max_abs_R_I"] = r.max_abs_R_I;
  j["max_abs_R_K"] = r.max_abs_R_K;
  j["total_dE_remap"] = r.total_dE_remap;
  j["failed"] = r.failed;
  if (r.failed) {
    j["failure"] = r.failure;
    j["failed_step"] = r.failed_step;
    j["failed_column"] = r.failed_column;
  }
  return j;
}

}  // namespace

RunResult run(const RunConfig& c) {
  c.validate();
  const ImexTableau tab = resolve_tableau(c.tableau);
  const Model spin_model = make_model(c, true);
  const Model audit_model = make_model(c, false);

  RunResult out;
  out.output_dir = c.output_dir;
  std::ofstream budget;
  if (!c.output_dir.empty()) {
    std::filesystem::create_directories(c.output_dir);
    budget.open(std::filesystem::path(c.output_dir) / "budget.csv");
    write_budget_header(budget);
  }

  IntegrationOptions opt;
  opt.dt = c.dt;
  opt.diag_interval = c.diag_interval;
  opt.remap_interval = c.remap_interval;
  opt.remap.monotone = c.monotone_remap;

  PrognosticState s = initial_state(spin_model, c);
  spin_model.validate_state(s);
  opt.steps = step_count(c.spinup, c.dt);
  out.spinup = integrate(spin_model, s, tab, opt);
  if (!out.spinup.failed) {
    opt.t0 = out.spinup.final_time;
    opt.steps = step_count(c.run_length, c.dt);
    out.audit = integrate(audit_model, out.spinup.final_state, tab, opt,
                          budget.is_open() ? &budget : nullptr);
  } else {
    out.audit.failed = true;
    out.audit.failure = "spin-up failed";
  }

  if (!c.output_dir.empty()) {
    const std::filesystem::path dir(c.output_dir);
    const auto& last = out.spinup.failed ? out.spinup : out.audit;
    {
      std::ofstream snap(dir / "final.snapshot");
      write_snapshot(snap, audit_model, last.final_state, last.final_time);
    }
    nlohmann::json man;
    for (const auto& k : config_keys()) man["config"][k.key] = get_config_value(c, k.key);
    man["grid_hash"] = grid_hash(audit_model);
    {
      std::ostringstream tab_text;
      write_tableau(tab_text, tab);
      man["tableau"] = {{"name", tab.name}, {"checksum", hex64(fnv1a64(tab_text.str()))}};
    }
    man["constants"] = {{"g", audit_model.constants().g},
                        {"R", audit_model.constants().R},
                        {"cp", audit_model.constants().cp},
                        {"p0", audit_model.constants().p0}};
    man["spinup"] = summary_json(out.spinup);
    man["audit"] = summary_json(out.audit);
    man["files"] = {"budget.csv", "final.snapshot"};
    std::ofstream mf(dir / "manifest.json");
    mf << man.dump(2) << "\n";
  }
  return out;
}

double fit_order(const std::vector<double>& x, const std::vector<double>& y) {
  // Zero entries (exact or underflowed) carry no slope information.
  std::size_t n = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) continue;
    ++n;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

SweepResult convergence_sweep(const RunConfig& c, const std::vector<double>& dts) {
  c.validate();
  const ImexTableau tab = resolve_tableau(c.tableau);
  const Model spin_model = make_model(c, true);
  const Model audit_model = make_model(c, false);

  IntegrationOptions opt;
  opt.dt = c.dt;
  opt.remap_interval = c.remap_interval;
  opt.remap.monotone = c.monotone_remap;
  opt.steps = step_count(c.spinup, c.dt);
  opt.diag_interval = std::max(1, opt.steps);
  const IntegrationResult spin = integrate(spin_model, initial_state(spin_model, c), tab, opt);
  if (spin.failed) throw SolverError("sweep spin-up failed: " + spin.failure, spin.failed_column);

  SweepResult out;
  for (double dt : dts) {
    SweepRow row;
    row.dt = dt;
    IntegrationOptions o = opt;
    o.dt = dt;
    o.t0 = spin.final_time;
    o.steps = step_count(c.run_length, dt);
    o.diag_interval = std::max(1, o.steps);
    o.audit_every_step = true;
    const IntegrationResult r = integrate(audit_model, spin.final_state, tab, o);
    row.dE_rel = std::abs(r.last.E() - r.first.E()) / std::abs(r.first.E());
    row.max_R_P = r.max_abs_R_P;
    row.max_R_I = r.max_abs_R_I;
    row.max_R_K = r.max_abs_R_K;
    row.R_K_floor = r.R_K_floor;
    row.max_newton_iterations = r.max_newton_iterations;
    row.max_mass_change = r.max_mass_change;
    row.max_theta_change = r.max_theta_change;
    row.max_transfer_error = r.max_transfer_error;
    row.stable = !r.failed && std::isfinite(row.dE_rel) && row.dE_rel < 1e-2;
    if (r.failed) row.note = r.failure;
    out.rows.push_back(row);
  }
  std::vector<double> x, yE, yP, yI, yK;
  for (const auto& row : out.rows) {
    if (!row.stable) continue;
    x.push_back(row.dt);
    yE.push_back(row.dE_rel);
    yP.push_back(row.max_R_P);
    yI.push_back(row.max_R_I);
    yK.push_back(row.max_R_K);
  }
  out.order_dE = fit_order(x, yE);
  out.order_R_P = fit_order(x, yP);
  out.order_R_I = fit_order(x, yI);
  out.order_R_K = fit_order(x, yK);
  return out;
}

void write_sweep(std::ostream& os, const SweepResult& r) {
  os << "dt,dE_rel,max_R_P,max_R_I,max_R_K,R_K_floor,max_newton_iterations,stable\n";
  os << std::setprecision(10);
  for (const auto& row : r.rows)
    os << row.dt << "," << row.dE_rel << "," << row.max_R_P << "," << row.max_R_I << ","
       << row.max_R_K << "," << row.R_K_floor << "," << row.max_newton_iterations << ","
       << (row.stable ? "yes" : "no") << "\n";
  os << "# order dE_rel " << r.order_dE << "\n";
  os << "# order R_P " << r.order_R_P << "\n";
  os << "# order R_I " << r.order_R_I << "\n";
  os << "# order R_K " << r.order_R_K << "\n";
}

}  // namespace nhs
