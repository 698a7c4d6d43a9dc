#include "nhslice/vcoord.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace nhs {

LevelGrid::LevelGrid(std::vector<double> s_int) : s_int_(std::move(s_int)) {
  const int n = static_cast<int>(s_int_.size()) - 1;
  if (n < 2) throw GridError("LevelGrid: need at least 2 levels (3 interfaces)");
  for (int k = 0; k < n; ++k) {
    if (!std::isfinite(s_int_[k]) || !std::isfinite(s_int_[k + 1]) || !(s_int_[k + 1] > s_int_[k])) {
      std::ostringstream msg;
      msg << "LevelGrid: interface coordinates not strictly increasing at interface " << k + 1;
      throw GridError(msg.str());
    }
  }
  s_mid_.resize(n);
  ds_mid_.resize(n);
  ds_int_.resize(n + 1);
  for (int k = 0; k < n; ++k) {
    s_mid_[k] = 0.5 * (s_int_[k] + s_int_[k + 1]);
    ds_mid_[k] = s_int_[k + 1] - s_int_[k];
  }
  ds_int_[0] = ds_mid_[0];
  ds_int_[n] = ds_mid_[n - 1];
  for (int k = 1; k < n; ++k) ds_int_[k] = s_mid_[k] - s_mid_[k - 1];
}

LevelGrid build_uniform_grid(int n, double s_top, double s_bot) {
  if (n < 2) throw GridError("build_uniform_grid: n must be >= 2");
  if (!(s_top < s_bot)) throw GridError("build_uniform_grid: require s_top < s_bot");
  std::vector<double> s(n + 1);
  const double h = (s_bot - s_top) / n;
  for (int k = 0; k <= n; ++k) s[k] = s_top + h * k;
  s[n] = s_bot;
  return LevelGrid(std::move(s));
}

void PhysicalConstants::validate() const {
  if (!(g > 0) || !(R > 0) || !(cp > 0) || !(p0 > 0))
    throw GridError("PhysicalConstants: g, R, cp, p0 must be positive");
  if (!(cv() > 0)) throw GridError("PhysicalConstants: cv = cp - R must be positive");
  if (!(kappa() > 0 && kappa() < 1)) throw GridError("PhysicalConstants: kappa must lie in (0,1)");
}

namespace {

void check_monotone(const HybridCoefficients& h, double ps) {
  const int n = h.n();
  for (int k = 0; k < n; ++k) {
    const double lo = h.A_int[k] * h.p0_ref + h.B_int[k] * ps;
    const double hi = h.A_int[k + 1] * h.p0_ref + h.B_int[k + 1] * ps;
    if (!(hi > lo)) {
      std::ostringstream msg;
      msg << "hybrid coordinate: pi not increasing between interfaces " << k << " and " << k + 1
          << " for ps = " << ps << " Pa";
      throw GridError(msg.str());
    }
  }
}

}  // namespace

HybridCoefficients build_hybrid(const LevelGrid& grid, double p_top, double p0_ref,
                                double exponent) {
  if (!(p_top > 0) || !(p_top < p0_ref)) throw GridError("build_hybrid: require 0 < p_top < p0_ref");
  if (!(exponent > 0)) throw GridError("build_hybrid: exponent must be positive");
  const int n = grid.n();
  HybridCoefficients h;
  h.p0_ref = p0_ref;
  h.A_int.resize(n + 1);
  h.B_int.resize(n + 1);
  const auto s = grid.s_int();
  for (int k = 0; k <= n; ++k) {
    const double eta = (s[k] - grid.s_top()) / grid.length();
    const double b = std::pow(eta, exponent);
    h.B_int[k] = b;
    h.A_int[k] = (p_top + (p0_ref - p_top) * eta - b * p0_ref) / p0_ref;
  }
  // Endpoint constraints are imposed exactly, not left to roundoff.
  h.B_int[0] = 0.0;
  h.A_int[0] = p_top / p0_ref;
  h.B_int[n] = 1.0;
  h.A_int[n] = 0.0;

  check_monotone(h, kMinSurfaceFraction * p0_ref);
  check_monotone(h, kMaxSurfaceFraction * p0_ref);
  // pi is affine in ps, so monotone at both ends of the range implies
  // monotone throughout; the midpoint check guards the reference state.
  check_monotone(h, p0_ref);
  return h;
}

std::vector<double> pi_interfaces(const HybridCoefficients& h, double ps) {
  if (!(ps > 0)) throw StateError("pi_interfaces: surface pressure must be positive");
  const int n = h.n();
  std::vector<double> pi(n + 1);
  for (int k = 0; k <= n; ++k) pi[k] = h.A_int[k] * h.p0_ref + h.B_int[k] * ps;
  for (int k = 0; k < n; ++k) {
    if (!(pi[k + 1] > pi[k])) {
      std::ostringstream msg;
      msg << "pi_interfaces: pi not increasing at interface " << k + 1 << " for ps = " << ps;
      throw StateError(msg.str());
    }
  }
  return pi;
}

std::vector<double> pi_interfaces(const HybridCoefficients& h, std::span<const double> ps) {
  const int np1 = h.n() + 1;
  std::vector<double> out;
  out.reserve(ps.size() * np1);
  for (double p : ps) {
    auto col = pi_interfaces(h, p);
    out.insert(out.end(), col.begin(), col.end());
  }
  return out;
}

void write_grid_table(std::ostream& os, const LevelGrid& grid, const HybridCoefficients& h) {
  if (h.n() != grid.n()) throw GridError("write_grid_table: grid/hybrid level mismatch");
  os << "# n " << grid.n() << " p0_ref " << std::setprecision(17) << h.p0_ref << "\n";
  os << "# i s A B\n";
  for (int k = 0; k <= grid.n(); ++k) {
    os << k << ' ' << std::setprecision(17) << grid.s_int()[k] << ' ' << h.A_int[k] << ' '
       << h.B_int[k] << '\n';
  }
}

GridTable read_grid_table(std::istream& is) {
  std::string line;
  int n = -1;
  double p0_ref = 0;
  std::vector<double> s, a, b;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "n") {
        std::string pkey;
        ls >> n >> pkey >> p0_ref;
      }
      continue;
    }
    int i;
    double sv, av, bv;
    if (!(ls >> i >> sv >> av >> bv)) throw GridError("read_grid_table: malformed row: " + line);
    if (i != static_cast<int>(s.size())) throw GridError("read_grid_table: rows out of order");
    s.push_back(sv);
    a.push_back(av);
    b.push_back(bv);
  }
  if (n < 0 || static_cast<int>(s.size()) != n + 1)
    throw GridError("read_grid_table: header level count does not match rows");
  HybridCoefficients h{std::move(a), std::move(b), p0_ref};
  LevelGrid g(std::move(s));
  check_monotone(h, p0_ref);
  return {std::move(g), std::move(h)};
}

}  // namespace nhs
