#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature for scalar and
// vector-valued integrands on finite intervals.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace packlp::quad {

struct Tolerance {
  double rel = 1e-10;   ///< relative to the integrand's L1 mass on the interval
  double abs = 1e-300;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;   ///< estimated absolute error
  double l1 = 0.0;      ///< integral of |f|
  int intervals = 0;
  bool converged = false;
};

struct VectorResult {
  std::vector<double> value;
  std::vector<double> error;
  std::vector<double> l1;
  int intervals = 0;
  bool converged = false;
};

using ScalarFn = std::function<double(double)>;
/// Writes the integrand components at x into out (size fixed by the caller).
using VectorFn = std::function<void(double, std::span<double>)>;

/// Integrates f over [a, b]. Never throws; callers inspect `converged`.
Result integrate(const ScalarFn& f, double a, double b, const Tolerance& tol = {});

/// Integrates a vector integrand of `dim` components; every component must
/// meet the tolerance.
VectorResult integrate(const VectorFn& f, std::size_t dim, double a, double b,
                       const Tolerance& tol = {});

/// Same as integrate(), but splits [a, b] at the given interior breakpoints
/// first (useful for kinks and oscillation scales known in advance).
Result integrate_pieces(const ScalarFn& f, std::span<const double> breakpoints,
                        const Tolerance& tol = {});
VectorResult integrate_pieces(const VectorFn& f, std::size_t dim,
                              std::span<const double> breakpoints, const Tolerance& tol = {});

/// Throws IntegrationFailure when the result did not converge.
double checked(const Result& r, const char* what);
void checked(const VectorResult& r, const char* what);

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace packlp::quad
