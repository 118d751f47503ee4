#include "packlp/witness_lp.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <numbers>

#include "packlp/abel.hpp"
#include "packlp/error.hpp"
#include "packlp/specfun.hpp"

namespace packlp::witness {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_gauss(const WitnessBasis& b) { return b.family == Family::GaussPoly; }

double laguerre_alpha(const WitnessBasis& b) {
  return b.geometry.kind == GeometryKind::Euclidean ? 0.5 * b.geometry.n - 1.0 : -0.5;
}

// Smallest x with exp(-x/2) * max_k sum_j |d_kj| x^j <= 1e-16 max(1, ...).
double envelope_x(int top, double alpha) {
  std::vector<std::vector<double>> d(top + 1, std::vector<double>(top + 2));
  for (int k = 0; k <= top; ++k) specfun::laguerre_coefficients(k, alpha, d[k].data());
  auto bound = [&](double x) {
    double m = 0.0;
    for (int k = 0; k <= top; ++k) {
      double s = 0.0, p = 1.0;
      for (int j = 0; j <= k; ++j, p *= x) s += std::abs(d[k][j]) * p;
      m = std::max(m, s);
    }
    return m * std::exp(-0.5 * x);
  };
  double x = 8.0;
  while (bound(x) > 1e-16) x *= 1.1;
  return x;
}

std::shared_ptr<const profile::LineFunction> unit_line(const WitnessBasis& b, int k) {
  return std::make_shared<profile::LineFunction>(
      profile::make_line(profile::gauss_laguerre_unit(b.scale, -0.5, k)));
}

profile::HeisGaussLaguerre heis_profile(const WitnessBasis& b, std::vector<double> c) {
  return profile::HeisGaussLaguerre{b.geometry.n, b.scale_t, b.scale, b.top, b.top_s, std::move(c)};
}

// Per-build cache of the basis elements.
class Rows {
 public:
  explicit Rows(const WitnessBasis& b) : b_(b) {
    if (b.family != Family::HeisGaussPoly)
      for (std::size_t k = 0; k < b.size(); ++k) elements_.push_back(b.element(k));
    if (b.geometry.kind == GeometryKind::Hyperbolic)
      for (int k = 0; k <= b.top; ++k) lines_.push_back(unit_line(b, k));
  }

  std::vector<double> spatial(const SpatialPoint& p) const {
    const std::size_t N = b_.size();
    std::vector<double> row(N);
    if (b_.family == Family::HeisGaussPoly) {
      const auto h = heis_profile(b_, {});
      for (int j = 0; j <= b_.top; ++j) {
        const double u = profile::heis_u(h, j, p.t);
        for (int k = 0; k <= b_.top_s; ++k) row[j * (b_.top_s + 1) + k] = u * profile::heis_v(h, k, p.s);
      }
      return row;
    }
    if (b_.geometry.kind == GeometryKind::Hyperbolic && is_gauss(b_)) {
      for (std::size_t k = 0; k < N; ++k) row[k] = abel::inverse_value(*lines_[k], b_.geometry.n, p.t);
      return row;
    }
    for (std::size_t k = 0; k < N; ++k) row[k] = elements_[k](p.t);
    return row;
  }

  // Monomial coefficients (in x = 2 pi t^2 / s^2) of the polynomial whose sign
  // is the sign of element k far out; empty when there is none.
  std::vector<double> tail_polynomial(std::size_t k) const {
    if (!is_gauss(b_)) return {};
    if (b_.geometry.kind == GeometryKind::Euclidean)
      return profile::monomial_coefficients(std::get<profile::GaussLaguerre>(*elements_[k].line_profile()));
    if (b_.geometry.kind == GeometryKind::Hyperbolic && b_.geometry.n == 3) {
      const auto p = profile::monomial_coefficients(std::get<profile::GaussLaguerre>(lines_[k]->profile));
      std::vector<double> q(p.size(), 0.0);
      for (std::size_t j = 0; j < p.size(); ++j) {
        q[j] = 0.5 * p[j];
        if (j + 1 < p.size()) q[j] -= (j + 1.0) * p[j + 1];
      }
      return q;
    }
    return {};
  }

  std::vector<double> tail(double x) const {
    std::vector<double> row(b_.size(), 0.0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const auto q = tail_polynomial(k);
      double v = 0.0;
      for (std::size_t j = q.size(); j-- > 0;) v = v * x + q[j];
      row[k] = v;
    }
    return row;
  }

  bool has_tail() const { return !tail_polynomial(0).empty(); }

  std::vector<double> spectral(const spectra::SpectralPoint& p) const {
    if (b_.family == Family::HeisGaussPoly) {
      const auto h = heis_profile(b_, std::vector<double>(b_.size(), 0.0));
      return spectra::heisenberg_components(b_.geometry, h, p);
    }
    std::vector<double> row(b_.size());
    for (std::size_t k = 0; k < row.size(); ++k)
      row[k] = spectra::spherical_transform(b_.geometry, elements_[k], p);
    return row;
  }

  std::vector<double> identity() const {
    if (b_.family == Family::HeisGaussPoly) return spatial({0.0, 0.0});
    if (b_.geometry.kind == GeometryKind::Hyperbolic && is_gauss(b_)) return spatial({0.0, 0.0});
    std::vector<double> row(b_.size());
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = elements_[k].at_identity();
    return row;
  }

 private:
  const WitnessBasis& b_;
  std::vector<RadialFunction> elements_;
  std::vector<std::shared_ptr<const profile::LineFunction>> lines_;
};

std::vector<SpatialPoint> spatial_points(const WitnessBasis& b, const SpatialGridSpec& spec, double t_env) {
  if (!(spec.spacing > 0.0)) throw Error(ErrorKind::GridError, "spatial spacing must be positive");
  std::vector<SpatialPoint> pts;
  const double lo = 2.0 * b.r;
  if (b.family == Family::HeisGaussPoly) {
    // h even in t; the forbidden region is handled through its boundary.
    const double R = lo;
    const int m = std::max(spec.boundary_points, 2);
    std::vector<double> angles;
    for (int i = 0; i <= m; ++i) angles.push_back(0.5 * kPi * i / m);
    for (double a : spec.extra) angles.push_back(std::clamp(a, 0.0, 0.5 * kPi));
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    for (double a : angles) pts.push_back({R * R * std::sin(a), R * std::sqrt(std::cos(a))});
    return pts;
  }
  double hi = spec.t_max > 0.0 ? spec.t_max : t_env;
  if (b.geometry.kind == GeometryKind::Sphere) hi = kPi;
  if (spec.t_max > 0.0 && spec.t_max < t_env && b.geometry.kind != GeometryKind::Sphere)
    throw Error(ErrorKind::GridError, "spatial grid ends before the basis truncation radius");
  if (b.family == Family::Hat) return pts;  // every tent vanishes beyond 2r
  std::vector<double> ts;
  if (lo <= hi) {
    const int n = static_cast<int>(std::ceil((hi - lo) / spec.spacing - 1e-9));
    for (int i = 0; i <= n; ++i) ts.push_back(std::min(lo + i * spec.spacing, hi));
  }
  // Extra points may lie past the truncation radius (refinement hints there).
  for (double t : spec.extra)
    if (t >= lo && (t <= hi || b.geometry.kind != GeometryKind::Sphere)) ts.push_back(t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (double t : ts) pts.push_back({t, 0.0});
  return pts;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <bool Parallel>
LPInstance assemble(const WitnessBasis& b, const spectra::SpectralGrid& grid, const SpatialGridSpec& spatial,
                    const Margins& margins) {
  if (!(grid.geometry == b.geometry)) throw Error(ErrorKind::SpectrumMismatch, "grid and basis geometries differ");
  if (!(b.r > 0.0)) throw Error(ErrorKind::InvalidInput, "packing radius must be positive");
  LPInstance inst;
  inst.basis = b;
  inst.spectral = grid;
  inst.spatial_spec = spatial;
  inst.margins = margins;
  inst.t_env = truncation_radius(b);
  inst.spatial = spatial_points(b, spatial, inst.t_env);

  const Rows rows(b);
  const auto N = static_cast<Eigen::Index>(b.size());
  const spectra::SpectralPoint trivial = spectra::trivial_point(b.geometry);

  std::vector<RowInfo> info;
  for (const auto& p : grid.points)
    if (!(p == trivial)) info.push_back({RowKind::Spectral, p, {}, 0});
  if (margins.spectral_floor > 0.0)
    for (int k = 0; k < 2 * static_cast<int>(N); ++k) info.push_back({RowKind::Box, {}, {}, k});
  for (const auto& q : inst.spatial) info.push_back({RowKind::Spatial, {}, q, 0});
  if (is_gauss(b) && b.top % 2 == 1) info.push_back({RowKind::Leading, {}, {}, b.top});
  std::vector<double> tail_x;
  if (rows.has_tail()) {
    // At the spatial spacing up to 1.5 t_env, geometric beyond.
    const double t0 = std::max(inst.t_env, 2.0 * b.r);
    auto x_of = [&](double t) { return 2.0 * kPi * (t / b.scale) * (t / b.scale); };
    for (double t = t0; t < 1.5 * t0; t += spatial.spacing) tail_x.push_back(x_of(t));
    for (double x = x_of(1.5 * t0), x1 = 1e3 * x_of(t0); x <= x1; x *= 1.05) tail_x.push_back(x);
    for (int i = 0; i < static_cast<int>(tail_x.size()); ++i) info.push_back({RowKind::Tail, {}, {}, i});
  }
  if (b.family == Family::Hat)
    for (int k = 0; k < static_cast<int>(N); ++k) info.push_back({RowKind::Sign, {}, {}, k});
  std::vector<std::vector<double>> heis_d, heis_e;
  if (b.family == Family::HeisGaussPoly) {
    heis_d.assign(b.top + 1, std::vector<double>(b.top + 2));
    heis_e.assign(b.top_s + 1, std::vector<double>(b.top_s + 2));
    for (int j = 0; j <= b.top; ++j) specfun::laguerre_coefficients(j, -0.5, heis_d[j].data());
    for (int k = 0; k <= b.top_s; ++k) specfun::laguerre_coefficients(k, b.geometry.n - 1.0, heis_e[k].data());
    for (int i = 0; i <= b.top; ++i)
      for (int l = 0; l <= b.top_s; ++l)
        if (i + l > 0) info.push_back({RowKind::Monomial, {}, {}, i * (b.top_s + 1) + l});
  }

  const auto eq = rows.spectral(trivial);
  // Coefficients scale like 1 / eq_max under f^(1) = 1; margins and the box
  // follow so that the program is invariant under rescaling of the basis.
  const double eq_max = max_abs(eq);
  if (!(eq_max > 0.0)) throw Error(ErrorKind::DegenerateWitness, "every basis element has f^(1) = 0");
  const double cap = margins.coefficient_cap / eq_max;
  const auto M = static_cast<long>(info.size());
  Eigen::MatrixXd A(M, N);
  Eigen::VectorXd rhs(M);
  std::exception_ptr err;
  auto fill = [&](long i) {
    const RowInfo& ri = info[i];
    std::vector<double> row;
    double bound = 0.0;
    switch (ri.kind) {
      case RowKind::Spectral: {
        row = rows.spectral(ri.point);
        const double m = margins.spectral * max_abs(row) / eq_max;
        if (margins.spectral_floor > 0.0 && N * cap * max_abs(row) <= margins.spectral_floor) {
          row.assign(N, 0.0);  // dropped below
          bound = 0.0;
          break;
        }
        for (double& x : row) x = -x;
        bound = (b.family == Family::Hat) ? 0.0 : margins.spectral_floor - m;
        break;
      }
      case RowKind::Spatial:
        row = rows.spatial(ri.where);
        bound = -margins.spatial * max_abs(row) / eq_max;
        break;
      case RowKind::Tail:
        row = rows.tail(tail_x[ri.index]);
        if (const double m = max_abs(row); m > 0.0)
          for (double& x : row) x /= m;
        // Unit rows: the margin must clear the solver's feasibility tolerance.
        bound = -std::max(margins.spatial, 1e-7) / eq_max;
        break;
      case RowKind::Leading:
        row.assign(N, 0.0);
        row[ri.index] = -1.0;
        bound = -margins.leading / eq_max;
        break;
      case RowKind::Sign:
        row.assign(N, 0.0);
        row[ri.index] = -1.0;
        bound = 0.0;
        break;
      case RowKind::Box:
        row.assign(N, 0.0);
        row[ri.index / 2] = ri.index % 2 ? -1.0 : 1.0;
        bound = cap;
        break;
      case RowKind::Monomial: {
        const int i_deg = ri.index / (b.top_s + 1), l_deg = ri.index % (b.top_s + 1);
        row.assign(N, 0.0);
        for (int j = i_deg; j <= b.top; ++j)
          for (int k = l_deg; k <= b.top_s; ++k) row[j * (b.top_s + 1) + k] = heis_d[j][i_deg] * heis_e[k][l_deg];
        bound = -margins.monomial * max_abs(row) / eq_max;
        break;
      }
    }
    for (Eigen::Index k = 0; k < N; ++k) A(i, k) = row[k];
    rhs[i] = bound;
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < M; ++i) {
      try {
        fill(i);
      } catch (...) {
#pragma omp critical(packlp_lp_error)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (long i = 0; i < M; ++i) fill(i);
  }

  // Remove the rows that were dropped under the floor.
  std::vector<long> keep;
  for (long i = 0; i < M; ++i)
    if (!(info[i].kind == RowKind::Spectral && A.row(i).cwiseAbs().maxCoeff() == 0.0 && rhs[i] == 0.0 &&
          margins.spectral_floor > 0.0))
      keep.push_back(i);
  inst.dropped_rows = static_cast<int>(M - keep.size());
  if (inst.dropped_rows > 0) {
    Eigen::MatrixXd A2(keep.size(), N);
    Eigen::VectorXd r2(keep.size());
    std::vector<RowInfo> info2;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      A2.row(i) = A.row(keep[i]);
      r2[i] = rhs[keep[i]];
      info2.push_back(info[keep[i]]);
    }
    A = std::move(A2);
    rhs = std::move(r2);
    info = std::move(info2);
  }

  const auto obj = rows.identity();
  inst.program.c = Eigen::Map<const Eigen::VectorXd>(obj.data(), N);
  inst.program.A_eq = Eigen::Map<const Eigen::MatrixXd>(eq.data(), 1, N);
  inst.program.b_eq = Eigen::VectorXd::Ones(1);
  inst.program.A_in = std::move(A);
  inst.program.b_in = std::move(rhs);
  inst.rows = std::move(info);
  return inst;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::GaussPoly: return "gauss_poly";
    case Family::Hat: return "hat";
    case Family::SphereHarmonic: return "sphere_harmonic";
    case Family::HeisGaussPoly: return "heis_gauss_poly";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "gauss_poly") return Family::GaussPoly;
  if (s == "hat") return Family::Hat;
  if (s == "sphere_harmonic") return Family::SphereHarmonic;
  if (s == "heis_gauss_poly") return Family::HeisGaussPoly;
  throw Error(ErrorKind::InvalidInput, "unknown basis family '" + s + "'");
}

std::size_t WitnessBasis::size() const {
  switch (family) {
    case Family::GaussPoly: return top + 1;
    case Family::Hat: return widths.size();
    case Family::SphereHarmonic: return top + 1;
    case Family::HeisGaussPoly: return (top + 1) * (top_s + 1);
  }
  return 0;
}

RadialFunction WitnessBasis::combine(const std::vector<double>& c) const {
  if (c.size() != size()) throw Error(ErrorKind::InvalidInput, "coefficient count does not match the basis");
  switch (family) {
    case Family::GaussPoly:
      if (geometry.kind == GeometryKind::Euclidean)
        return RadialFunction(geometry, profile::GaussLaguerre{scale, laguerre_alpha(*this), c});
      if (geometry.kind == GeometryKind::Hyperbolic) {
        auto line = std::make_shared<profile::LineFunction>(profile::make_line(profile::GaussLaguerre{scale, -0.5, c}));
        return abel::abel_inverse(line, geometry.n).with_geometry(geometry);
      }
      break;
    case Family::Hat:
      if (geometry.kind == GeometryKind::Euclidean && geometry.n == 1)
        return RadialFunction(geometry, profile::Tents{widths, c});
      break;
    case Family::SphereHarmonic:
      if (geometry.kind == GeometryKind::Sphere) return RadialFunction(geometry, profile::Zonal{geometry.n, c});
      break;
    case Family::HeisGaussPoly:
      if (geometry.kind == GeometryKind::Heisenberg) return RadialFunction(geometry, heis_profile(*this, c));
      break;
  }
  throw Error(ErrorKind::InvalidInput, "basis family " + to_string(family) + " does not fit " + geometry.label());
}

RadialFunction WitnessBasis::element(std::size_t k) const {
  std::vector<double> c(size(), 0.0);
  c.at(k) = 1.0;
  return combine(c);
}

WitnessBasis WitnessBasis::on(const Geometry& g) const {
  WitnessBasis b = *this;
  b.geometry = g;
  return b;
}

Family default_family(const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::Euclidean: return g.n == 1 ? Family::Hat : Family::GaussPoly;
    case GeometryKind::Hyperbolic: return Family::GaussPoly;
    case GeometryKind::Sphere: return Family::SphereHarmonic;
    case GeometryKind::Heisenberg: return Family::HeisGaussPoly;
  }
  return Family::GaussPoly;
}

WitnessBasis make_basis(const Geometry& g, Family family, double r, int degree) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "packing radius must be positive");
  if (degree < 0) throw Error(ErrorKind::InvalidInput, "degree must be nonnegative");
  WitnessBasis b;
  b.geometry = g;
  b.family = family;
  b.r = r;
  switch (family) {
    case Family::GaussPoly: {
      int top = degree / 2;
      if (top >= 1 && top % 2 == 0) --top;
      b.top = top;
      b.scale = 2.0 * r;
      break;
    }
    case Family::Hat: {
      b.top = std::max(degree, 1);
      for (int j = 1; j <= b.top; ++j) b.widths.push_back(2.0 * r * j / b.top);
      break;
    }
    case Family::SphereHarmonic:
      b.top = degree;
      break;
    case Family::HeisGaussPoly:
      b.top = std::max(degree / 2, 0);
      b.top_s = std::max(degree / 2, 0);
      b.scale = 2.0 * r;
      b.scale_t = 1.5 * (2.0 * r) * (2.0 * r);
      break;
  }
  b.combine(std::vector<double>(b.size(), 0.0));  // validates the family/geometry pairing
  return b;
}

double truncation_radius(const WitnessBasis& b) {
  switch (b.family) {
    case Family::GaussPoly: {
      const double x = envelope_x(b.top, laguerre_alpha(b));
      return std::max(b.scale * std::sqrt(x / (2.0 * kPi)), 2.0 * b.r);
    }
    case Family::Hat: return b.widths.empty() ? 0.0 : *std::max_element(b.widths.begin(), b.widths.end());
    case Family::SphereHarmonic: return kPi;
    case Family::HeisGaussPoly: return 2.0 * b.r;
  }
  return 0.0;
}

spectra::GridSpec default_grid_spec(const WitnessBasis& b) {
  spectra::GridSpec s;
  switch (b.family) {
    case Family::GaussPoly: {
      const double y = envelope_x(b.top, b.geometry.kind == GeometryKind::Euclidean ? laguerre_alpha(b) : -0.5);
      s.max_lambda = std::sqrt(2.0 * kPi * y) / b.scale;
      s.spacing = (2.0 * kPi / b.scale) / 64.0;
      s.imag_points = 16;
      break;
    }
    case Family::Hat: {
      const double zero = 2.0 * kPi / (2.0 * b.r);
      s.spacing = zero / 8.0;
      s.max_lambda = 40.0 * zero;
      break;
    }
    case Family::SphereHarmonic:
      s.max_l = b.top;
      break;
    case Family::HeisGaussPoly: {
      const double yt = envelope_x(b.top, -0.5), ys = envelope_x(b.top_s, b.geometry.n - 1.0);
      s.max_lambda = std::sqrt(2.0 * kPi * yt) / b.scale_t;
      s.max_tau = std::sqrt(2.0 * kPi * ys) / b.scale;
      s.spacing = std::min(s.max_lambda, s.max_tau) / 40.0;
      s.max_m = 20;
      break;
    }
  }
  return s;
}

Margins default_margins(const WitnessBasis& b) {
  Margins m;
  if (b.family == Family::HeisGaussPoly) m.spectral_floor = 5e-13;
  return m;
}

SpatialGridSpec default_spatial_spec(const WitnessBasis& b) {
  SpatialGridSpec s;
  switch (b.family) {
    case Family::GaussPoly: s.spacing = b.scale / 200.0; break;
    case Family::Hat: s.spacing = 2.0 * b.r / 100.0; break;
    case Family::SphereHarmonic: s.spacing = kPi / 2000.0; break;
    case Family::HeisGaussPoly: s.boundary_points = 400; break;
  }
  return s;
}

LPInstance build_lp(const WitnessBasis& b, const spectra::SpectralGrid& grid, const SpatialGridSpec& spatial,
                    const std::optional<Margins>& margins) {
  return assemble<true>(b, grid, spatial, margins.value_or(default_margins(b)));
}

LPInstance build_lp_serial(const WitnessBasis& b, const spectra::SpectralGrid& grid, const SpatialGridSpec& spatial,
                           const std::optional<Margins>& margins) {
  return assemble<false>(b, grid, spatial, margins.value_or(default_margins(b)));
}

std::vector<double> spatial_row(const WitnessBasis& b, const SpatialPoint& p) { return Rows(b).spatial(p); }
std::vector<double> spectral_row(const WitnessBasis& b, const spectra::SpectralPoint& p) {
  return Rows(b).spectral(p);
}
std::vector<double> identity_row(const WitnessBasis& b) { return Rows(b).identity(); }

LPSolution solve_lp(const LPInstance& inst) {
  const lp::Solution s = lp::solve(inst.program);
  LPSolution out;
  out.status = s.status;
  out.iterations = s.iterations;
  if (s.status != lp::Status::Optimal) return out;
  out.coefficients.assign(s.x.data(), s.x.data() + s.x.size());
  out.objective = s.objective;
  out.duals.assign(s.duals_in.data(), s.duals_in.data() + s.duals_in.size());
  out.residual = s.residual;
  return out;
}

double bound_from_witness(const Geometry& g, double r, const RadialFunction& f) {
  const double fhat = spectra::spherical_transform(g, f, spectra::trivial_point(g));
  if (!(fhat > 0.0)) throw Error(ErrorKind::DegenerateWitness, "f^(1) must be positive");
  return ball_volume(g, r) * f.at_identity() / fhat;
}

double code_bound_from_witness(const Geometry& g, const RadialFunction& f) {
  if (g.kind != GeometryKind::Sphere) throw Error(ErrorKind::InvalidInput, "code bounds live on spheres");
  const double fhat = spectra::spherical_transform(g, f, spectra::trivial_point(g));
  if (!(fhat > 0.0)) throw Error(ErrorKind::DegenerateWitness, "f^(1) must be positive");
  return ball_volume(g, kPi) * f.at_identity() / fhat;
}

double delsarte_code_bound(int n, double theta, int L) {
  if (!(theta > 0.0) || L < 1) throw Error(ErrorKind::InvalidInput, "need theta > 0 and L >= 1");
  const Geometry g = Geometry::sphere(n);
  const WitnessBasis b = make_basis(g, Family::SphereHarmonic, 0.5 * theta, L);
  const auto inst = build_lp(b, spectra::make_grid(g, default_grid_spec(b)), default_spatial_spec(b));
  const auto sol = solve_lp(inst);
  // No admissible polynomial of this degree: the LP gives no bound.
  if (sol.status == lp::Status::Infeasible) return std::numeric_limits<double>::infinity();
  if (sol.status != lp::Status::Optimal)
    throw Error(ErrorKind::CertificationFailure, std::string("code LP ended ") + lp::to_string(sol.status));
  return ball_volume(g, kPi) * sol.objective;
}

}  // namespace packlp::witness
