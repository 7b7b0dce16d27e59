#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kpp {

struct QuarterPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Dirichlet Green function of -Laplace/2 on the quarter plane by images; throws at x = z.
double green_quarter(QuarterPoint z, QuarterPoint x);

enum class GreenRegime { near, mid, far };

/// Comparator of each regime: log((u^v)/|x-z|), (uv/|z|^2)(xy/|x-z|^2), uvxy/|x|^4.
double green_comparator(GreenRegime regime, QuarterPoint z, QuarterPoint x);

struct RatioBracket {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t samples = 0;
};

struct GreenAsymptotics {
  RatioBracket near, mid, far;
  double symmetry_max = 0.0;  ///< max |G_z(x) - G_x(z)|
  double boundary_max = 0.0;  ///< max |G_z| on both axes
};

GreenAsymptotics green_asymptotics_check(std::size_t samples, std::uint64_t seed);

using cplx = std::complex<double>;

/// z - log(z + 1)/sqrt2.
cplx eta_inverse(cplx z);
/// 1 - 1/(sqrt2 (z + 1)).
cplx eta_inverse_derivative(cplx z);
/// z + log(z + 1)/sqrt2.
cplx varpi(cplx z);
/// Newton solve of eta_inverse(w) = z seeded at varpi(z); throws after 50 iterations.
cplx eta(cplx z);

/// Upper edge sqrt(e^{2 sqrt2 x} - (1 + x)^2) of the image of the quarter plane, 0 where negative.
double lambda_upper_edge(double x);

struct EtaReport {
  std::size_t samples = 0;
  double round_trip_max = 0.0;
  double eta_minus_varpi_max = 0.0;
  double deriv_min = 0.0;
  double deriv_max = 0.0;
  double edge_residual_max = 0.0;        ///< eta(i t) against lambda_upper_edge
  double edge_residual_alt_max = 0.0;    ///< against sqrt(e^{2 sqrt2 x} - 1 - x^2)
  double real_axis_imag_max = 0.0;       ///< |Im eta(t)| for t >= 0
};

/// Samples |z| <= r_max in the quarter plane, log-uniform in radius.
EtaReport eta_check(std::size_t samples, double r_max, std::uint64_t seed);

/// (u + 1)^2 v e^{-sqrt2 u}.
double anharmonic_weight(double u, double v);

struct AnharmonicPoint {
  double x = 0.0;
  double y = 0.0;
  double integral = 0.0;
  double integral_refined = 0.0;
  double ratio = 0.0;  ///< integral / y
  bool stable = true;  ///< refinements within 5%
  double min_integrand = 0.0;
};

/// int_Q G_x(z) (u+1)^2 v e^{-sqrt2 u} dz: polar quadrature on a cut-off disk at x plus graded product panels.
AnharmonicPoint anharmonic_integral(QuarterPoint x, int quadrature_n = 200);

std::vector<AnharmonicPoint> anharmonic_bound_check(const std::vector<QuarterPoint>& points, int quadrature_n = 200);

struct HarmonicityReport {
  double h = 0.0;
  double sup_laplacian = 0.0;
  std::size_t nodes = 0;
};

/// Sup of the 5-point Laplacian of f over [x0,x1]x[y0,y1] at spacing h, skipping nodes closer than
/// exclusion_radius (>= 10 h) to any pole.
HarmonicityReport harmonicity_check(const std::function<double(double, double)>& f, double x0, double x1, double y0,
                                    double y1, double h, const std::vector<QuarterPoint>& poles = {},
                                    double exclusion_radius = 0.0);

}  // namespace kpp
