#pragma once

#include <array>
#include <span>
#include <vector>

#include "nhslice/errors.hpp"

namespace nhs {

/// Periodic 1D collocated spectral-element grid of polynomial degree 3 on
/// Gauss-Lobatto-Legendre nodes. Element endpoints are shared between
/// neighbours, so there are 3 * ne unique columns. Column j = 3e + i holds
/// local node i of element e; local node 3 of element e is column 3(e+1)
/// modulo ncol.
class SEGrid1D {
 public:
  static constexpr int kDegree = 3;
  static constexpr int kNodes = kDegree + 1;

  SEGrid1D(int ne, double length);

  int ne() const { return ne_; }
  int ncol() const { return kDegree * ne_; }
  double length() const { return length_; }
  double element_width() const { return length_ / ne_; }

  /// Physical x of every unique column.
  std::span<const double> x() const { return x_; }
  /// Assembled (diagonal mass matrix) quadrature weights per column, in m.
  std::span<const double> weights() const { return weights_; }
  /// Reference GLL nodes and weights on [-1, 1].
  static const std::array<double, kNodes>& ref_nodes();
  static const std::array<double, kNodes>& ref_weights();
  /// Nodal differentiation matrix in physical units (1/m), row-major [i][j]
  /// = d l_j / dx at node i.
  const std::array<std::array<double, kNodes>, kNodes>& deriv_matrix() const { return deriv_; }
  /// Local quadrature weights in physical units (m).
  const std::array<double, kNodes>& local_weights() const { return local_w_; }

  /// Global column of local node i in element e.
  int column(int e, int i) const { return (kDegree * e + i) % ncol(); }

 private:
  int ne_;
  double length_;
  std::vector<double> x_;
  std::vector<double> weights_;
  std::array<std::array<double, kNodes>, kNodes> deriv_{};
  std::array<double, kNodes> local_w_{};
};

namespace hops {

/// d/dx: elementwise nodal differentiation followed by mass-weighted direct
/// stiffness summation. `f` holds one value per unique column.
void grad_x(const SEGrid1D& grid, std::span<const double> f, std::span<double> out);
std::vector<double> grad_x(const SEGrid1D& grid, std::span<const double> f);

/// Divergence of a flux; identical to grad_x in one dimension.
void div_x(const SEGrid1D& grid, std::span<const double> F, std::span<double> out);
std::vector<double> div_x(const SEGrid1D& grid, std::span<const double> F);

/// Quadrature sum_j W_j f_j in fixed column order.
double hint(const SEGrid1D& grid, std::span<const double> f);

/// Assembled weak Laplacian: W^-1 * DSS( -D^T W D f ).
void weak_laplacian(const SEGrid1D& grid, std::span<const double> f, std::span<double> out);

/// -nu * laplacian(laplacian(f)), two weak Laplacian applications.
void hyperviscosity(const SEGrid1D& grid, std::span<const double> f, double nu,
                    std::span<double> out);
std::vector<double> hyperviscosity(const SEGrid1D& grid, std::span<const double> f, double nu);

}  // namespace hops
}  // namespace nhs
