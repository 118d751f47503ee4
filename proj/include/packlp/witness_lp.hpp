#pragma once

// Witness search as a linear program over basis coefficients:
//
//   minimize f(e)  subject to  f^(1) = 1,  f^ >= 0 on a spectral grid,
//                              f <= 0 on a grid of {d >= 2r}.

#include <optional>
#include <string>
#include <vector>

#include "packlp/geometry.hpp"
#include "packlp/lp.hpp"
#include "packlp/radial.hpp"
#include "packlp/spectra.hpp"

namespace packlp::witness {

enum class Family {
  GaussPoly,       ///< Gaussian times even polynomial (Abel pullback on H^n)
  Hat,             ///< nonnegative combinations of tents of width <= 2r, Euclidean n = 1
  SphereHarmonic,  ///< zonal expansion on S^n
  HeisGaussPoly,   ///< separable t/s Gaussian times polynomials on H_n
};

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct WitnessBasis {
  Geometry geometry;
  Family family = Family::GaussPoly;
  double r = 0.5;
  /// Gauss-Laguerre elements L_0..L_top (gauss_poly), zonal degrees 0..top,
  /// tents 1..top, Heisenberg t-degrees 0..top.
  int top = 11;
  double scale = 1.0;    ///< Gaussian scale (s-scale for Heisenberg)
  double scale_t = 1.0;  ///< Heisenberg t-scale
  int top_s = 3;         ///< Heisenberg s-degrees 0..top_s
  std::vector<double> widths;

  std::size_t size() const;
  /// The radial function with coefficient vector c.
  RadialFunction combine(const std::vector<double>& c) const;
  RadialFunction element(std::size_t k) const;
  /// Same family on the geometry g (e.g. another measure normalization).
  WitnessBasis on(const Geometry& g) const;
};

/// Default basis of a family. degree is the polynomial degree in t
/// (gauss_poly: the top Laguerre index is the largest odd number <= degree/2),
/// the maximal zonal degree (sphere) or the number of tents (hat).
WitnessBasis make_basis(const Geometry& g, Family family, double r, int degree);
/// Family used when none is requested.
Family default_family(const Geometry& g);

struct SpatialPoint {
  double t = 0.0;
  double s = 0.0;  ///< Heisenberg only
};

struct SpatialGridSpec {
  double spacing = 0.01;
  /// Upper end of the forbidden-region grid; 0 selects the basis truncation
  /// radius.
  double t_max = 0.0;
  int boundary_points = 400;  ///< Heisenberg CK-sphere samples
  std::vector<double> extra;  ///< extra radii (or CK angles for Heisenberg)
};

struct Margins {
  /// Relative margins, with B = max_k |b_k^(1)|: rows are enforced as
  /// f^(sigma) >= spectral * max_k |b_k^(sigma)| / B and
  /// f(t) <= -spatial * max_k |b_k(t)| / B.
  double spectral = 1e-9;
  double spatial = 1e-9;
  /// Heisenberg monomial rows: p_il <= -monomial * max|row| / B.
  double monomial = 1e-9;
  /// Leading Gauss-Laguerre coefficient must be at least leading / B.
  double leading = 1e-6;
  /// Absolute negativity tolerated in spectral rows (0: none). When positive,
  /// coefficients are boxed by coefficient_cap / B and rows whose values
  /// cannot exceed the floor under that box are dropped.
  double spectral_floor = 0.0;
  double coefficient_cap = 1e6;
};

/// Defaults per family; Heisenberg type-A rows get a floor of 5e-13.
Margins default_margins(const WitnessBasis& b);

/// Tail rows bound the sign polynomial of a Gaussian family beyond the
/// truncation radius, where f itself is below double precision.
enum class RowKind { Spectral, Spatial, Leading, Monomial, Box, Sign, Tail };

struct RowInfo {
  RowKind kind = RowKind::Spectral;
  spectra::SpectralPoint point;
  SpatialPoint where;
  int index = 0;
};

struct LPInstance {
  WitnessBasis basis;
  spectra::SpectralGrid spectral;
  SpatialGridSpec spatial_spec;
  std::vector<SpatialPoint> spatial;
  Margins margins;
  lp::LinearProgram program;
  std::vector<RowInfo> rows;  ///< one per inequality row
  double t_env = 0.0;         ///< basis truncation radius
  int dropped_rows = 0;       ///< spectral rows below the floor
};

/// Spectral grid defaults adapted to the basis scale.
spectra::GridSpec default_grid_spec(const WitnessBasis& b);
SpatialGridSpec default_spatial_spec(const WitnessBasis& b);

/// Radius beyond which every basis element is negligible (relative 1e-16).
double truncation_radius(const WitnessBasis& b);

/// Assembles the LP; rows are computed in parallel. Without margins the
/// family defaults apply.
LPInstance build_lp(const WitnessBasis& b, const spectra::SpectralGrid& grid, const SpatialGridSpec& spatial,
                    const std::optional<Margins>& margins = std::nullopt);
/// Serial reference assembly.
LPInstance build_lp_serial(const WitnessBasis& b, const spectra::SpectralGrid& grid,
                           const SpatialGridSpec& spatial, const std::optional<Margins>& margins = std::nullopt);

/// Basis rows: values of every element at a spatial point, transforms at a
/// spectral point, and the objective/normalization rows.
std::vector<double> spatial_row(const WitnessBasis& b, const SpatialPoint& p);
std::vector<double> spectral_row(const WitnessBasis& b, const spectra::SpectralPoint& p);
std::vector<double> identity_row(const WitnessBasis& b);

struct LPSolution {
  lp::Status status = lp::Status::Stalled;
  std::vector<double> coefficients;
  double objective = 0.0;  ///< f(e) with f^(1) = 1
  std::vector<double> duals;
  double residual = 0.0;
  int iterations = 0;
};

LPSolution solve_lp(const LPInstance& inst);

/// m_X(B(x0, r)) f(e) / f^(1). Throws DegenerateWitness when f^(1) <= 0.
double bound_from_witness(const Geometry& g, double r, const RadialFunction& f);
/// Code-cardinality form on S^n: m(S^n) f(e) / f^(1).
double code_bound_from_witness(const Geometry& g, const RadialFunction& f);

/// LP bound on the size of a code on S^n with minimal angle theta, degree <= L.
/// Infinite when no polynomial of degree <= L is admissible.
double delsarte_code_bound(int n, double theta, int L);

}  // namespace packlp::witness
