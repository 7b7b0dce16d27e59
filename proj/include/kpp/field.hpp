#pragma once

#include <string>

#include <Eigen/Dense>

namespace kpp {

using FieldArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class RightBoundary { dirichlet_zero, tail_extrapolation };

/// Boundary descriptor. Bottom is Dirichlet 0; left and top values live in the field's edge nodes.
struct BoundaryData {
  RightBoundary right = RightBoundary::tail_extrapolation;
  double right_rate = 0.0;        ///< decay rate used by tail extrapolation
  bool right_linear_prefactor = false;  ///< (a + b x) e^{-rate x} instead of e^{-rate x}
  std::string left;
  std::string top;
  double top_shift = 0.0;
};

/// Gridded field on [x_lo, x_lo + (nx-1) hx] x [0, (ny-1) hy]; values(j, i) at (x_i, y_j).
struct Field2D {
  double x_lo = 0.0;
  double hx = 0.05;
  double hy = 0.05;
  int nx = 0;
  int ny = 0;
  FieldArray values;
  double frame_speed_c = 0.0;  ///< speed used by the discrete operator
  double nominal_speed = 0.0;  ///< continuum speed the field represents
  BoundaryData bc;
  double residual_sup = 0.0;
  double residual_l2 = 0.0;

  static Field2D make(double x_lo, double x_hi, double y_hi, double hx, double hy);

  double x(int i) const { return x_lo + hx * i; }
  double y(int j) const { return hy * j; }
  double x_hi() const { return x(nx - 1); }
  double y_hi() const { return y(ny - 1); }

  /// Bilinear interpolation; 0 outside the grid.
  double at(double px, double py) const;
  /// Tensor cubic Lagrange interpolation (stencil clamped to the grid); 0 outside.
  double at_cubic(double px, double py) const;
  bool contains(double px, double py) const;
};

}  // namespace kpp
