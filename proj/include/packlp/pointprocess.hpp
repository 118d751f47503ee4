#pragma once

// Explicit packings: lattice densities, Poisson summation on lattices and
// the disjoint-ball count bound.

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "packlp/geometry.hpp"
#include "packlp/radial.hpp"

namespace packlp::pointprocess {

/// Largest dimension handled by exhaustive enumeration.
inline constexpr int kMaxEnumerationDimension = 8;

/// Lattice generated by the rows of `basis`.
struct LatticeSpec {
  Eigen::MatrixXd basis;

  int dimension() const { return static_cast<int>(basis.rows()); }
  /// |det basis| (Lebesgue).
  double covolume() const;
  Eigen::MatrixXd gram() const { return basis * basis.transpose(); }
};

/// Validates a square, finite, invertible basis.
LatticeSpec make_lattice(const Eigen::MatrixXd& basis);
LatticeSpec integer_lattice(int n);
/// Hexagonal lattice with basis (1, 0), (1/2, sqrt(3)/2).
LatticeSpec hexagonal_lattice();
/// Integer vectors with even coordinate sum.
LatticeSpec d4_lattice();
/// Standard E8 basis (D8 plus the half-integer coset).
LatticeSpec e8_lattice();
/// "A2", "Z:n", "D4" or "E8".
LatticeSpec lattice_by_name(const std::string& name);
/// Inverse-transpose basis.
LatticeSpec dual_lattice(const LatticeSpec& lat);

struct LatticeVector {
  std::vector<long> coords;  ///< integer coordinates in the basis
  Eigen::VectorXd point;
  double norm = 0.0;
};

/// Every lattice vector with norm <= radius (the origin included), sorted by
/// norm and then coordinates. Fincke-Pohst enumeration, parallel over the
/// outermost coordinate. Throws DimensionTooLarge for n > 8.
std::vector<LatticeVector> short_vectors(const LatticeSpec& lat, double radius);
std::vector<LatticeVector> short_vectors_serial(const LatticeSpec& lat, double radius);

/// Length of a shortest nonzero vector. Throws DimensionTooLarge for n > 8.
double min_distance(const LatticeSpec& lat);

/// ball_volume(R^n, lambda_1 / 2) / covolume.
double lattice_density(const LatticeSpec& lat);

struct PoissonReport {
  double intensity = 0.0;   ///< 1 / covolume in the Haar measure of f
  double fe = 0.0;
  double fhat_one = 0.0;
  double lattice_sum = 0.0;  ///< sum over the lattice of f
  double lattice_tail = 0.0; ///< bound on the omitted terms
  double dual_sum = 0.0;     ///< sum over the dual lattice of f^
  double dual_tail = 0.0;
  std::size_t lattice_terms = 0;
  std::size_t dual_terms = 0;
  double eta_plus = 0.0;     ///< i * lattice_sum
  double eta_plus_dual = 0.0;///< i^2 * dual_sum
  double equality_gap = 0.0; ///< |lattice_sum - i dual_sum|
  double upper_slack = 0.0;  ///< i f(e) - eta_plus
  double lower_slack = 0.0;  ///< eta_plus_dual - i^2 f^(1)
  bool passed = false;
};

/// Both sides of Poisson summation for a Euclidean radial f on the lattice,
/// with envelope tail bounds, and the chain
///   i f(e) >= eta^+(f^) >= i^2 f^(1).
/// Throws TailBoundFailure when the truncation cannot be bounded.
PoissonReport poisson_chain_check(const LatticeSpec& lat, const RadialFunction& f, double equality_tol = 1e-9,
                                  double slack_tol = 1e-10);

/// Finite point set in R^n, or unit vectors of R^{n+1} for S^n (distances
/// are then angles).
struct PointConfig {
  Geometry space = Geometry::euclidean(2);
  std::vector<Eigen::VectorXd> points;
  double separation = 0.0;
};

double distance(const Geometry& space, const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double min_pairwise_distance(const PointConfig& p);
/// Throws InvalidInput when a point is malformed or two points are closer
/// than the declared separation.
void validate(const PointConfig& p);

/// The 12 vertices of the icosahedron on S^2, separation atan(2).
PointConfig icosahedron();
/// Lattice points within distance R of the origin, separation lambda_1.
PointConfig lattice_patch(const LatticeSpec& lat, double R);

struct CountReport {
  std::size_t count = 0;
  double bound = 0.0;  ///< ball_volume(R + r) / ball_volume(r), r = separation / 2
  bool passed = false;
};

/// Number of points within distance R of center against the disjoint-ball
/// bound.
CountReport packing_count_check(const PointConfig& p, const Eigen::VectorXd& center, double R);

}  // namespace packlp::pointprocess
