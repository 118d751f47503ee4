#pragma once

// Positive-definite spherical functions and spherical transforms.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "packlp/geometry.hpp"
#include "packlp/radial.hpp"

namespace packlp::spectra {

struct EuclidPoint {
  double lambda = 0.0;
};
struct HypReal {
  double lambda = 0.0;
};
/// The point i*s of the imaginary segment, 0 < s <= rho.
struct HypImag {
  double s = 0.0;
};
struct SpherePoint {
  int l = 0;
};
struct HeisA {
  double lambda = 1.0;
  int m = 0;
};
struct HeisB {
  double tau = 0.0;
};

using SpectralPoint = std::variant<EuclidPoint, HypReal, HypImag, SpherePoint, HeisA, HeisB>;

bool matches(const Geometry& g, const SpectralPoint& p);
/// Throws SpectrumMismatch (wrong tag) or InvalidInput (outside the spectrum).
void require_point(const Geometry& g, const SpectralPoint& p);
SpectralPoint trivial_point(const Geometry& g);
bool is_trivial(const Geometry& g, const SpectralPoint& p);
std::string to_string(const SpectralPoint& p);
bool operator<(const SpectralPoint& a, const SpectralPoint& b);
bool operator==(const SpectralPoint& a, const SpectralPoint& b);

struct GridSpec {
  double max_lambda = 40.0;  ///< real frequencies (Euclidean, hyperbolic, Heisenberg A)
  double spacing = 0.05;
  int imag_points = 16;      ///< hyperbolic samples on (0, rho]
  int max_l = 10;            ///< sphere degrees
  int max_m = 20;            ///< Heisenberg Laguerre index
  double max_tau = 20.0;     ///< Heisenberg B rays
  /// Extra real frequencies included verbatim (e.g. lattice-adapted points).
  std::vector<double> extra_lambdas;
};

struct SpectralGrid {
  Geometry geometry;
  GridSpec spec;
  std::vector<SpectralPoint> points;
};

/// Sorted, duplicate-free grid that contains the trivial character.
SpectralGrid make_grid(const Geometry& g, const GridSpec& spec);
/// Same bounds, spacing divided by factor (and imaginary samples multiplied).
SpectralGrid refine(const SpectralGrid& grid, int factor);

/// phi_sigma at radial coordinate t.
double spherical_function(const Geometry& g, const SpectralPoint& p, double t);
/// Heisenberg: phi_sigma at (t, s = |v|); HeisA returns cos(lambda t) times
/// the radial Laguerre factor (the real part of the conjugate pair).
double spherical_function(const Geometry& g, const SpectralPoint& p, double t, double s);

/// Radial Fourier kernel on R^n in angular frequency, Gamma(n/2)(2/x)^nu J_nu(x).
double euclid_kernel(int n, double x);

enum class Method { Auto, Quadrature, Analytic };

/// f^(sigma) = int f phi_sigma dm. Analytic where the profile is a Fourier
/// eigenbasis expansion (Euclidean Gauss-Laguerre, hat functions, Abel
/// pullbacks of line Gauss-Laguerre profiles, zonal expansions, Heisenberg B
/// and the t-factor of Heisenberg A); adaptive quadrature otherwise.
double spherical_transform(const Geometry& g, const RadialFunction& f, const SpectralPoint& p,
                           Method method = Method::Auto, double rel_tol = 1e-10);

bool has_analytic_transform(const Geometry& g, const RadialFunction& f);

/// Transforms of the separable products u_j(t) v_k(s) of a Heisenberg
/// profile at p, row-major in j (coefficients are ignored).
std::vector<double> heisenberg_components(const Geometry& g, const profile::HeisGaussLaguerre& h,
                                          const SpectralPoint& p, Method method = Method::Auto);

/// Transform at every grid point, in grid order. Parallel over points.
std::vector<double> transform_on_grid(const Geometry& g, const RadialFunction& f, const SpectralGrid& grid,
                                      Method method = Method::Auto);
/// Serial reference implementation of transform_on_grid.
std::vector<double> transform_on_grid_serial(const Geometry& g, const RadialFunction& f,
                                             const SpectralGrid& grid, Method method = Method::Auto);

/// Closed-form int_R g(t) cos(lambda t) dt for a line profile, or its
/// continuation to lambda = i*sigma when imaginary is set. Empty when the
/// profile has no closed form.
std::optional<double> line_transform(const profile::Profile& p, double lambda, bool imaginary = false);

/// On S^2: |avg_psi phi_l(xy - sqrt(1-x^2) sqrt(1-y^2) cos psi) - phi_l(x) phi_l(y)|.
double product_formula_residual(int l, double x, double y);

/// max |phi_sigma| over samples of the radial domain; used to detect a
/// misread spectrum (values above 1 are not positive definite).
double sampled_sup(const Geometry& g, const SpectralPoint& p, int samples = 64);

/// Dimension of the degree-l spherical harmonics on S^n.
double harmonic_dimension(int n, int l);

}  // namespace packlp::spectra
