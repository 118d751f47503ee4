#pragma once

// Bi-K-invariant functions in radial coordinates.

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "packlp/geometry.hpp"
#include "packlp/jet.hpp"

namespace packlp {

namespace profile {

/// exp(-pi (t/scale)^2) * sum_k c_k L_k^(alpha)(2 pi (t/scale)^2).
///
/// With alpha = n/2 - 1 these are eigenfunctions of the n-dimensional
/// Fourier transform, which makes the Euclidean transform available in
/// closed form.
struct GaussLaguerre {
  double scale = 1.0;
  double alpha = 0.0;
  std::vector<double> coeffs;
};

/// sum_k c_k (1 - t/w_k)_+ ; in one dimension the Fourier transform of
/// each tent is w (sin(w l/2) / (w l/2))^2.
struct Tents {
  std::vector<double> widths;
  std::vector<double> coeffs;
};

/// sum_l c_l phi_l(cos t) on S^n.
struct Zonal {
  int n = 2;
  std::vector<double> coeffs;
};

/// amplitude * exp(-a cosh t).
struct ExpCosh {
  double a = 1.0;
  double amplitude = 1.0;
};

struct LineFunction;

/// Inverse Abel transform of an even line profile, as a radial function on H^n.
struct AbelPullback {
  int n = 3;
  std::shared_ptr<const LineFunction> line;
};

/// Arbitrary callable; carries no closed forms and is not serializable.
struct Custom {
  std::function<double(double)> fn;
  std::string label = "custom";
};

using Profile = std::variant<GaussLaguerre, Tents, Zonal, ExpCosh, AbelPullback, Custom>;

/// Separable Heisenberg profile
///   h(t, s) = sum_{j,k} c_{jk} u_j(t) v_k(s),
///   u_j(t) = exp(-pi (t/a)^2) L_j^(-1/2)(2 pi (t/a)^2),
///   v_k(s) = exp(-pi (s/b)^2) L_k^(n-1)(2 pi (s/b)^2),
/// with coeffs stored row-major in j (size (J+1)(K+1)).
struct HeisGaussLaguerre {
  int n = 1;
  double scale_t = 1.0;
  double scale_s = 1.0;
  int max_j = 0;
  int max_k = 0;
  std::vector<double> coeffs;
};

}  // namespace profile

/// |f(t)| <= amplitude * E(t) * exp(-rate t^2) for t >= radius, where E is
/// cosh(t)^{-(n-1)} on H^n and 1 elsewhere. For Heisenberg the bound reads
/// |h(t,s)| <= amplitude * exp(-rate (t^2 + s^2)) for t^2 + s^2 >= radius^2.
/// A compact envelope states f = 0 beyond radius.
struct Envelope {
  double amplitude = 0.0;
  double rate = 0.0;
  double radius = 0.0;
  bool compact = false;
};

class RadialFunction {
 public:
  RadialFunction(Geometry g, profile::Profile p);
  RadialFunction(Geometry g, profile::Profile p, Envelope env);
  RadialFunction(Geometry g, profile::HeisGaussLaguerre p);

  const Geometry& geometry() const { return geom_; }
  const Envelope& envelope() const { return env_; }

  /// f at radial coordinate t (one-variable geometries).
  double operator()(double t) const;
  /// h at (t, s) (Heisenberg).
  double operator()(double t, double s) const;
  /// f(e).
  double at_identity() const;

  /// Identifier of the expansion basis ("gauss_laguerre", "tents", ...).
  std::string basis_id() const;
  std::vector<double> coefficients() const;

  const profile::Profile* line_profile() const;
  const profile::HeisGaussLaguerre* heisenberg_profile() const;

  /// Same geometry, different Haar normalization.
  RadialFunction with_geometry(const Geometry& g) const;
  /// c * f.
  RadialFunction scaled(double c) const;

  /// Radius beyond which the envelope's weighted mass is below abs_tol.
  double cutoff(double abs_tol) const;
  /// Upper bound on int_{t >= T} |f| w dt from the envelope.
  double tail_mass(double T) const;

  /// Checks the envelope at 64 log-spaced points beyond its radius; throws
  /// InvalidInput on violation.
  void validate_envelope() const;

 private:
  Geometry geom_;
  std::variant<profile::Profile, profile::HeisGaussLaguerre> rep_;
  Envelope env_;
};

namespace profile {

/// Even function on the real line (radial profile on the rank-one flat
/// factor), with an optional closed form enabling analytic derivatives.
struct LineFunction {
  Profile profile;
  Envelope envelope;

  double operator()(double t) const;
  /// Taylor jet at t0; throws DifferentiationInstability when the profile
  /// has no analytic representation.
  Jet jet(double t0, std::size_t order) const;
  bool has_jet() const;
};

LineFunction make_line(Profile p);

double evaluate(const Profile& p, double t);
/// Jet of the profile (GaussLaguerre, ExpCosh, Tents away from kinks).
Jet evaluate_jet(const Profile& p, const Jet& t);
bool supports_jet(const Profile& p);

/// Envelope of a 1-D profile used as a radial function on g.
Envelope derive_envelope(const Geometry& g, const Profile& p);

/// Monomial coefficients P_j of the polynomial part of a GaussLaguerre
/// profile in x = 2 pi (t/scale)^2.
std::vector<double> monomial_coefficients(const GaussLaguerre& p);

/// Unit basis profile with a single nonzero coefficient.
GaussLaguerre gauss_laguerre_unit(double scale, double alpha, int k);

double evaluate(const HeisGaussLaguerre& p, double t, double s);
double heis_u(const HeisGaussLaguerre& p, int j, double t);
double heis_v(const HeisGaussLaguerre& p, int k, double s);

}  // namespace profile

}  // namespace packlp
