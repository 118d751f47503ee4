#pragma once

// Abel transform on hyperbolic space and its inverses.
//
//   Af(r) = c_n int_{|r|}^inf sinh(s) (cosh s - cosh r)^{(n-3)/2} f(s) ds,
//   c_n = (2 pi)^{(n-1)/2} / Gamma((n-1)/2).

#include <memory>
#include <vector>

#include "packlp/radial.hpp"

namespace packlp::abel {

using EvenLineFunction = profile::LineFunction;

/// c_n.
double forward_constant(int n);

/// Af(r) by adaptive quadrature in v = sqrt(cosh s - cosh r).
double forward_value(const RadialFunction& f, double r, double rel_tol = 1e-11);

/// Af as a line function, with an envelope derived from that of f.
EvenLineFunction abel_forward(const RadialFunction& f);

/// A^{-1} g at r on H^n (any n >= 2). Odd n applies (-d/du)^{(n-1)/2},
/// u = cosh r, via Taylor jets; even n integrates (-d/du)^{n/2} G against
/// (u - cosh r)^{-1/2}. Profiles without jets fall back to Richardson
/// extrapolated finite differences in u.
double inverse_value(const EvenLineFunction& g, int n, double r);

/// (-d/du)^k G at u = cosh t with G(cosh t) = g(t).
double minus_du_power(const EvenLineFunction& g, int k, double t);

RadialFunction abel_inverse_odd(std::shared_ptr<const EvenLineFunction> g, int n);
RadialFunction abel_inverse_even(std::shared_ptr<const EvenLineFunction> g, int n);
RadialFunction abel_inverse(std::shared_ptr<const EvenLineFunction> g, int n);

/// |f^(lambda) - int_R Af(t) cos(lambda t) dt| for real lambda.
double factorization_residual(const RadialFunction& f, double lambda);
/// factorization_residual for several frequencies, sharing one tabulation of
/// the Abel transform on fixed Gauss-Legendre panels.
std::vector<double> factorization_residuals(const RadialFunction& f, const std::vector<double>& lambdas);

/// int_R g(t) cos(lambda t) dt by quadrature (closed form where available
/// is in spectra::line_cosine_transform).
double cosine_transform_quadrature(const EvenLineFunction& g, double lambda, double rel_tol = 1e-11);

}  // namespace packlp::abel
