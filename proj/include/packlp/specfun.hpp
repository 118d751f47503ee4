#pragma once

// Special functions behind the spherical functions of the supported spaces.

#include <complex>

namespace packlp::specfun {

using Complex = std::complex<double>;

/// Value plus an absolute error estimate and the local amplitude the
/// estimate should be compared against (for oscillatory continuations the
/// value itself can pass through zero).
struct Hyp2F1 {
  Complex value;
  double error = 0.0;
  double scale = 1.0;
  int steps = 0;  ///< continuation steps taken (0: direct series)
};

/// Gauss hypergeometric 2F1(a, b; c; z) for real z <= 0.
///
/// Small |z| uses the defining series. Otherwise the series value and
/// derivative at a safe starting point are continued along the negative axis
/// with a Taylor-series integrator of the hypergeometric ODE, stepping a
/// fraction of the distance to the singular point z = 0 per step.
///
/// Throws ParameterPole for c in {0, -1, -2, ...}, DomainError for z > 0,
/// InvalidInput for non-finite input. Does not throw on accuracy loss.
Hyp2F1 gauss_2f1_detail(Complex a, Complex b, Complex c, double z);

/// As gauss_2f1_detail but throws AccuracyLoss when the error estimate
/// exceeds rel_tol times max(|value|, scale).
Complex gauss_2f1(Complex a, Complex b, Complex c, double z, double rel_tol = 1e-10);

/// Bessel function of the first kind J_nu(x), nu >= 0, x >= 0.
double bessel_j(double nu, double x);

/// Generalized Laguerre polynomial of order alpha = n-1 normalized to 1 at 0:
/// (n-1)! sum_j C(m,j) (-x)^j / (j+n-1)!. Finite sum up to degree 20, the
/// three-term recurrence above.
double laguerre_norm(int m, int alpha, double x);

/// Zonal spherical function of degree l on the n-sphere S^n evaluated at
/// x = cos(angle), normalized to 1 at x = 1. Gegenbauer index (n-1)/2.
double sphere_poly(int l, int n, double x);

/// Unnormalized generalized Laguerre polynomial L_k^(alpha)(x) by the
/// three-term recurrence; T may be double or Jet.
template <class T>
T laguerre(int k, double alpha, const T& x) {
  T prev = x * 0.0 + 1.0;
  if (k == 0) return prev;
  T cur = (1.0 + alpha) - x;
  for (int j = 1; j < k; ++j) {
    T next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Coefficients d_0..d_k of L_k^(alpha)(x) = sum_j d_j x^j.
void laguerre_coefficients(int k, double alpha, double* out);

double gamma(double x);
double log_gamma(double x);

}  // namespace packlp::specfun
