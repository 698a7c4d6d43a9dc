#include "nhslice/hops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nhs {

namespace {

constexpr int N = SEGrid1D::kNodes;

void expect_columns(const SEGrid1D& grid, std::size_t size, const char* what) {
  if (size != static_cast<std::size_t>(grid.ncol())) {
    std::ostringstream msg;
    msg << what << ": field has " << size << " values, grid has " << grid.ncol() << " columns";
    throw GridError(msg.str());
  }
}

}  // namespace

const std::array<double, SEGrid1D::kNodes>& SEGrid1D::ref_nodes() {
  static const std::array<double, kNodes> nodes = {-1.0, -1.0 / std::sqrt(5.0),
                                                   1.0 / std::sqrt(5.0), 1.0};
  return nodes;
}

const std::array<double, SEGrid1D::kNodes>& SEGrid1D::ref_weights() {
  static const std::array<double, kNodes> w = {1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0};
  return w;
}

SEGrid1D::SEGrid1D(int ne, double length) : ne_(ne), length_(length) {
  if (ne < 1) throw GridError("SEGrid1D: need at least one element");
  if (!(length > 0)) throw GridError("SEGrid1D: domain length must be positive");
  const auto& xi = ref_nodes();
  const auto& wr = ref_weights();
  const double h = length / ne;

  // Barycentric weights give the Lagrange derivative matrix; the diagonal is
  // fixed by requiring each row to annihilate constants.
  std::array<double, N> bary{};
  for (int j = 0; j < N; ++j) {
    double prod = 1.0;
    for (int k = 0; k < N; ++k)
      if (k != j) prod *= xi[j] - xi[k];
    bary[j] = 1.0 / prod;
  }
  for (int i = 0; i < N; ++i) {
    double diag = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      const double d = (bary[j] / bary[i]) / (xi[i] - xi[j]) * (2.0 / h);
      deriv_[i][j] = d;
      diag -= d;
    }
    deriv_[i][i] = diag;
  }
  for (int i = 0; i < N; ++i) local_w_[i] = wr[i] * 0.5 * h;

  x_.assign(ncol(), 0.0);
  weights_.assign(ncol(), 0.0);
  for (int e = 0; e < ne; ++e) {
    for (int i = 0; i < N; ++i) {
      const int j = column(e, i);
      if (i < kDegree) x_[j] = e * h + 0.5 * (xi[i] + 1.0) * h;
      weights_[j] += local_w_[i];
    }
  }
}

namespace hops {

void grad_x(const SEGrid1D& grid, std::span<const double> f, std::span<double> out) {
  expect_columns(grid, f.size(), "grad_x");
  expect_columns(grid, out.size(), "grad_x");
  const auto& D = grid.deriv_matrix();
  const auto& wl = grid.local_weights();
  const auto W = grid.weights();
  const int ncol = grid.ncol();
  std::vector<double> acc(ncol, 0.0);
  std::array<double, N> fe{};
  for (int e = 0; e < grid.ne(); ++e) {
    for (int i = 0; i < N; ++i) fe[i] = f[grid.column(e, i)];
    for (int i = 0; i < N; ++i) {
      double d = 0.0;
      for (int j = 0; j < N; ++j) d += D[i][j] * fe[j];
      acc[grid.column(e, i)] += wl[i] * d;
    }
  }
  for (int j = 0; j < ncol; ++j) out[j] = acc[j] / W[j];
}

std::vector<double> grad_x(const SEGrid1D& grid, std::span<const double> f) {
  std::vector<double> out(grid.ncol());
  grad_x(grid, f, out);
  return out;
}

void div_x(const SEGrid1D& grid, std::span<const double> F, std::span<double> out) {
  grad_x(grid, F, out);
}

std::vector<double> div_x(const SEGrid1D& grid, std::span<const double> F) {
  return grad_x(grid, F);
}

double hint(const SEGrid1D& grid, std::span<const double> f) {
  expect_columns(grid, f.size(), "hint");
  const auto W = grid.weights();
  double sum = 0.0;
  for (int j = 0; j < grid.ncol(); ++j) sum += W[j] * f[j];
  return sum;
}

void weak_laplacian(const SEGrid1D& grid, std::span<const double> f, std::span<double> out) {
  expect_columns(grid, f.size(), "weak_laplacian");
  expect_columns(grid, out.size(), "weak_laplacian");
  const auto& D = grid.deriv_matrix();
  const auto& wl = grid.local_weights();
  const auto W = grid.weights();
  std::vector<double> acc(grid.ncol(), 0.0);
  std::array<double, N> fe{}, dfe{};
  for (int e = 0; e < grid.ne(); ++e) {
    for (int i = 0; i < N; ++i) fe[i] = f[grid.column(e, i)];
    for (int q = 0; q < N; ++q) {
      double d = 0.0;
      for (int j = 0; j < N; ++j) d += D[q][j] * fe[j];
      dfe[q] = wl[q] * d;
    }
    for (int i = 0; i < N; ++i) {
      double s = 0.0;
      for (int q = 0; q < N; ++q) s += D[q][i] * dfe[q];
      acc[grid.column(e, i)] -= s;
    }
  }
  for (int j = 0; j < grid.ncol(); ++j) out[j] = acc[j] / W[j];
}

void hyperviscosity(const SEGrid1D& grid, std::span<const double> f, double nu,
                    std::span<double> out) {
  if (nu < 0) throw ContractError("hyperviscosity: nu must be nonnegative");
  expect_columns(grid, out.size(), "hyperviscosity");
  if (nu == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  std::vector<double> lap(grid.ncol());
  weak_laplacian(grid, f, lap);
  weak_laplacian(grid, lap, out);
  for (double& v : out) v *= -nu;
}

std::vector<double> hyperviscosity(const SEGrid1D& grid, std::span<const double> f, double nu) {
  std::vector<double> out(grid.ncol());
  hyperviscosity(grid, f, nu, out);
  return out;
}

}  // namespace hops
}  // namespace nhs
