#pragma once

// A posteriori witness verification: dense sign checks of f on the forbidden
// region and of its transform on the spectrum, with tail arguments beyond the
// sampled ranges. Floating-point, not interval arithmetic.

#include <cstdint>
#include <string>
#include <vector>

#include "packlp/geometry.hpp"
#include "packlp/radial.hpp"
#include "packlp/spectra.hpp"
#include "packlp/witness_lp.hpp"

namespace packlp::certify {

struct Policy {
  /// W1 sampling step in t (Heisenberg: CK-sphere angle step).
  double w1_spacing = 1e-3;
  /// The LP's spectral grid; W2 is checked on it and on its refinement.
  spectra::GridSpec spectral;
  int refine_factor = 4;
  double w2_tolerance = 1e-12;
  double fhat_min = 1e-9;
  /// Random W1 re-check of a certified function.
  std::uint64_t seed = 0x5eed;
  int random_points = 2000;
  double random_tolerance = 1e-10;
  /// Cap on the number of tail samples of a polynomial sign check.
  long max_tail_samples = 2'000'000;
};

/// Policy matched to an LP instance: W1 at a quarter of the LP spatial step.
Policy default_policy(const witness::WitnessBasis& b, const spectra::GridSpec& lp_grid,
                      const witness::SpatialGridSpec& lp_spatial);

struct W1Report {
  double spacing = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;       ///< end of the sampled range (T_env)
  double max_value = 0.0;   ///< max f over the sampled forbidden region
  double argmax_t = 0.0;
  double argmax_s = 0.0;
  double tail_bound = 0.0;  ///< sup |f| beyond t_end from the envelope
  double tail_radius = 0.0; ///< radius beyond which the tail argument applies
  std::string tail_argument;
  bool tail_ok = false;
  std::size_t samples = 0;
  /// Local maxima above -1e-6 * scale (refinement hints).
  std::vector<double> near_zero;
};

struct W2Report {
  spectra::GridSpec grid;
  int refine_factor = 1;
  std::size_t samples = 0;
  double min_value = 0.0;
  spectra::SpectralPoint argmin;
  double imag_min = 0.0;    ///< hyperbolic imaginary segment, else 0
  bool has_imag = false;
  double tail_start = 0.0;
  std::string tail_argument;
  bool tail_ok = false;
  std::vector<double> near_zero;  ///< real frequencies of local minima
};

struct WitnessCertificate {
  Geometry geometry;
  double r = 0.0;
  RadialFunction f;
  double fe = 0.0;
  double fhat_one = 0.0;
  W1Report w1;
  W2Report w2;
  double recheck_max = 0.0;
  std::uint64_t recheck_seed = 0;
  bool certified = false;
  std::string reason;  ///< empty when certified

  /// ball_volume(r) f(e) / f^(1).
  double bound() const;
};

/// Deterministic verdict; rejection is a verdict, never an exception.
WitnessCertificate certify_witness(const Geometry& g, double r, const RadialFunction& f, const Policy& policy);

/// f on a list of radii (Heisenberg: pairs (t, s) interleaved), parallel.
std::vector<double> evaluate_on_grid(const RadialFunction& f, const std::vector<double>& ts);
std::vector<double> evaluate_on_grid_serial(const RadialFunction& f, const std::vector<double>& ts);

struct RefineOptions {
  int budget = 6;
  spectra::GridSpec spectral;
  witness::SpatialGridSpec spatial;
  witness::Margins margins;
  /// Margin factor for rounds without a measured sign violation.
  double margin_growth = 10.0;
};

RefineOptions default_refine_options(const witness::WitnessBasis& b);

struct RefineResult {
  WitnessCertificate certificate;
  double bound = 0.0;
  int rounds = 0;
  witness::LPSolution lp;
  RefineOptions final_grids;  ///< grids and margins of the certified round
};

/// Alternates build_lp/solve_lp and certify_witness. After a rejection the
/// grids are halved, the located extremal points are inserted and the
/// margins are raised to half the observed violation. Throws
/// BudgetExhausted with the last diagnostics when no round certifies.
RefineResult refine_until_certified(const witness::WitnessBasis& b, const RefineOptions& options);

struct PushforwardReport {
  double w1_max = 0.0;  ///< max of Af on [2r, T]
  double w2_min = 0.0;  ///< min of the cosine transform of Af
  double g_zero = 0.0;     ///< Af(0)
  double ghat_zero = 0.0;  ///< integral of Af over the line
  /// Euclidean n = 1 bound 2r Af(0) / (Af)^(0) carried by the pushed witness.
  double line_bound = 0.0;
  std::size_t samples = 0;
  bool passed = false;
};

/// Abel transform g = Af of a hyperbolic witness, checked as a witness on the
/// real line: g <= tol for |t| >= 2r and g^ >= -tol on a frequency grid.
PushforwardReport witness_pushforward(const WitnessCertificate& cert, double tol = 1e-10);

/// Upper bound for the positive real roots of sum_j a_j x^j (Fujiwara);
/// 0 when the polynomial is constant.
double positive_root_bound(const std::vector<double>& a);

}  // namespace packlp::certify
