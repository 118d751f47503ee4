#pragma once

// The four commutative spaces: radial coordinates, Haar density, ball volumes.

#include <cmath>
#include <string>

namespace packlp {

class RadialFunction;

enum class GeometryKind { Euclidean, Hyperbolic, Sphere, Heisenberg };

/// One of R^n (radial functions), H^n, S^n or the Heisenberg group H_n with
/// the Cygan-Koranyi metric. `measure_scale` multiplies the Haar measure; the
/// packing bound does not depend on it.
struct Geometry {
  GeometryKind kind = GeometryKind::Euclidean;
  int n = 1;
  double measure_scale = 1.0;

  static Geometry euclidean(int n);
  static Geometry hyperbolic(int n);
  static Geometry sphere(int n);
  static Geometry heisenberg(int n);
  /// Parses "euclidean" | "hyperbolic" | "sphere" | "heisenberg".
  static Geometry from_name(const std::string& name, int n);

  Geometry with_measure_scale(double c) const;

  /// (n-1)/2; only meaningful for hyperbolic space.
  double rho() const { return 0.5 * (n - 1); }
  /// Dilation degree 2n+2 of the Heisenberg ball volume.
  int homogeneous_dimension() const { return 2 * n + 2; }
  bool two_dimensional() const { return kind == GeometryKind::Heisenberg; }
  /// Upper end of the radial domain (pi for the sphere).
  double radial_max() const;
  std::string name() const;
  std::string label() const;  ///< e.g. "hyperbolic(3)"

  bool operator==(const Geometry& o) const { return kind == o.kind && n == o.n; }
};

/// Angular factor of the radial Haar density: |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
/// for the rank-one spaces, 2 pi^n / Gamma(n) (the sphere in C^n) for Heisenberg;
/// includes measure_scale.
double surface_constant(const Geometry& g);

/// w(t) with  int_G F dm_G = int F(t) w(t) dt  for bi-K-invariant F. For
/// Heisenberg use the two-variable overload.
double radial_density(const Geometry& g, double t);
/// Heisenberg density in coordinates (t, s = |v|), integrated over t in R.
double radial_density(const Geometry& g, double t, double s);

/// m_X(B(x0, r)).
double ball_volume(const Geometry& g, double r);

/// Cygan-Koranyi unit-ball volume C_n (measure_scale 1), computed once per n.
double heisenberg_unit_ball(int n);

/// Total Haar integral of f, i.e. the spherical transform at the trivial
/// character. Throws IntegrationFailure.
double trivial_transform(const Geometry& g, const RadialFunction& f, double rel_tol = 1e-10);

/// Cygan-Koranyi norm (t^2 + s^4)^{1/4} of (t, v) with s = |v|, homogeneous
/// of degree one under the dilations (t, v) -> (r^2 t, r v).
inline double ck_norm(double t, double s) {
  const double s2 = s * s;
  return std::sqrt(std::sqrt(t * t + s2 * s2));
}

}  // namespace packlp

