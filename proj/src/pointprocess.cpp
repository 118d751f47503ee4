#include "packlp/pointprocess.hpp"

#include <algorithm>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <exception>
#include <numbers>
#include <variant>

#include "packlp/error.hpp"
#include "packlp/spectra.hpp"

namespace packlp::pointprocess {
namespace {

constexpr double kPi = std::numbers::pi;

void require_enumerable(const LatticeSpec& lat) {
  if (lat.dimension() > kMaxEnumerationDimension)
    throw Error(ErrorKind::DimensionTooLarge,
                "lattice enumeration is limited to dimension " + std::to_string(kMaxEnumerationDimension));
}

// Fincke-Pohst: x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
struct Enumerator {
  int n;
  Eigen::MatrixXd q;
  double bound;

  Enumerator(const LatticeSpec& lat, double radius) : n(lat.dimension()), q(lat.gram()) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        q(j, i) = q(i, j);
        q(i, j) /= q(i, i);
      }
      for (int k = i + 1; k < n; ++k)
        for (int l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
    }
    bound = radius * radius * (1.0 + 1e-10) + 1e-300;
  }

  double center(int i, const std::vector<long>& x) const {
    double c = 0.0;
    for (int j = i + 1; j < n; ++j) c -= q(i, j) * x[j];
    return c;
  }

  std::pair<long, long> range(int i, double budget, const std::vector<long>& x) const {
    const double c = center(i, x), h = std::sqrt(std::max(budget, 0.0) / q(i, i));
    return {static_cast<long>(std::ceil(c - h)), static_cast<long>(std::floor(c + h))};
  }

  template <class Out>
  void descend(int i, double budget, std::vector<long>& x, Out& out) const {
    const auto [lo, hi] = range(i, budget, x);
    const double c = center(i, x);
    for (long v = lo; v <= hi; ++v) {
      x[i] = v;
      const double rest = budget - q(i, i) * (v - c) * (v - c);
      if (rest < 0.0) continue;
      if (i == 0)
        out.push_back(x);
      else
        descend(i - 1, rest, x, out);
    }
    x[i] = 0;
  }
};

std::vector<LatticeVector> finish(const LatticeSpec& lat, const std::vector<std::vector<long>>& coords, double radius) {
  std::vector<LatticeVector> out;
  out.reserve(coords.size());
  for (const auto& c : coords) {
    Eigen::VectorXd x(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) x[i] = static_cast<double>(c[i]);
    LatticeVector v{c, lat.basis.transpose() * x, 0.0};
    v.norm = v.point.norm();
    if (v.norm <= radius * (1.0 + 1e-12)) out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end(), [](const LatticeVector& a, const LatticeVector& b) {
    return a.norm != b.norm ? a.norm < b.norm : a.coords < b.coords;
  });
  return out;
}

template <bool Parallel>
std::vector<LatticeVector> enumerate(const LatticeSpec& lat, double radius) {
  require_enumerable(lat);
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw Error(ErrorKind::InvalidInput, "radius must be finite and >= 0");
  const Enumerator e(lat, radius);
  const int top = e.n - 1;
  std::vector<long> x0(e.n, 0);
  const auto [lo, hi] = e.range(top, e.bound, x0);
  const long count = hi - lo + 1;
  std::vector<std::vector<std::vector<long>>> parts(std::max(count, 0L));
  auto work = [&](long k) {
    std::vector<long> x(e.n, 0);
    const long v = lo + k;
    const double rest = e.bound - e.q(top, top) * static_cast<double>(v) * v;
    if (rest < 0.0) return;
    x[top] = v;
    if (top == 0)
      parts[k].push_back(x);
    else
      e.descend(top - 1, rest, x, parts[k]);
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < count; ++k) work(k);
  } else {
    for (long k = 0; k < count; ++k) work(k);
  }
  std::vector<std::vector<long>> all;
  for (auto& p : parts) all.insert(all.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return finish(lat, all, radius);
}

// Neumaier summation in the given order.
double compensated_sum(const std::vector<double>& v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

// Points of a lattice with minimum distance lambda in the shell
// (R + j lambda, R + (j+1) lambda] number at most ((2(R+(j+1)lambda) + lambda)/lambda)^n.
double gaussian_tail(double A, double rate, double R, double lambda, int n) {
  double total = 0.0;
  for (int j = 0; j < 1000000; ++j) {
    const double rho = R + (j + 1) * lambda;
    const double term = std::pow((2.0 * rho + lambda) / lambda, n) * A * std::exp(-rate * (R + j * lambda) * (R + j * lambda));
    total += term;
    if (term < 1e-300 || (j > 8 && term < 1e-20 * total)) break;
  }
  return total;
}

// Smallest radius (geometric search) where the shell bound drops below tol.
double tail_radius(double A, double rate, double start, double lambda, int n, double tol) {
  if (!(rate > 0.0)) throw Error(ErrorKind::TailBoundFailure, "envelope has no Gaussian decay");
  double R = std::max(start, lambda);
  while (gaussian_tail(A, rate, R, lambda, n) > tol) {
    R *= 1.1;
    if (R > 1e4) throw Error(ErrorKind::TailBoundFailure, "lattice tail does not reach tolerance");
  }
  return R;
}

template <class F>
std::vector<double> evaluate_parallel(const std::vector<LatticeVector>& vs, F fn) {
  std::vector<double> out(vs.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < static_cast<long>(vs.size()); ++i) {
    try {
      out[i] = fn(vs[i].norm);
    } catch (...) {
#pragma omp critical(packlp_pp_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace

double LatticeSpec::covolume() const { return std::abs(basis.determinant()); }

LatticeSpec make_lattice(const Eigen::MatrixXd& basis) {
  if (basis.rows() < 1 || basis.rows() != basis.cols())
    throw Error(ErrorKind::InvalidInput, "lattice basis must be a nonempty square matrix");
  if (!basis.allFinite()) throw Error(ErrorKind::InvalidInput, "lattice basis has non-finite entries");
  LatticeSpec lat{basis};
  double scale = 1.0;
  for (Eigen::Index i = 0; i < basis.rows(); ++i) scale *= basis.row(i).norm();
  if (!(lat.covolume() > 1e-12 * scale)) throw Error(ErrorKind::InvalidInput, "lattice basis is singular");
  return lat;
}

LatticeSpec integer_lattice(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "dimension must be >= 1");
  return make_lattice(Eigen::MatrixXd::Identity(n, n));
}

LatticeSpec hexagonal_lattice() {
  Eigen::MatrixXd b(2, 2);
  b << 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0;
  return make_lattice(b);
}

LatticeSpec d4_lattice() {
  Eigen::MatrixXd b(4, 4);
  b << 2, 0, 0, 0,
      -1, 1, 0, 0,
       0, -1, 1, 0,
       0, 0, -1, 1;
  return make_lattice(b);
}

LatticeSpec e8_lattice() {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(8, 8);
  b(0, 0) = 2.0;
  for (int i = 1; i < 7; ++i) {
    b(i, i - 1) = -1.0;
    b(i, i) = 1.0;
  }
  b.row(7).setConstant(0.5);
  return make_lattice(b);
}

LatticeSpec lattice_by_name(const std::string& name) {
  if (name == "A2") return hexagonal_lattice();
  if (name == "D4") return d4_lattice();
  if (name == "E8") return e8_lattice();
  if (name.rfind("Z:", 0) == 0) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(name.substr(2), &used);
      if (used + 2 == name.size()) return integer_lattice(n);
    } catch (const std::logic_error&) {
    }
  }
  throw Error(ErrorKind::InvalidInput, "unknown lattice '" + name + "' (A2, Z:n, D4, E8)");
}

LatticeSpec dual_lattice(const LatticeSpec& lat) { return make_lattice(lat.basis.inverse().transpose()); }

std::vector<LatticeVector> short_vectors(const LatticeSpec& lat, double radius) {
  return enumerate<true>(lat, radius);
}

std::vector<LatticeVector> short_vectors_serial(const LatticeSpec& lat, double radius) {
  return enumerate<false>(lat, radius);
}

double min_distance(const LatticeSpec& lat) {
  require_enumerable(lat);
  const Eigen::MatrixXd G = lat.gram();
  const double R = std::sqrt(G.diagonal().minCoeff());
  double best = INFINITY;
  for (const auto& v : short_vectors(lat, R))
    if (v.norm > 0.0) best = std::min(best, v.norm);
  return best;
}

double lattice_density(const LatticeSpec& lat) {
  return ball_volume(Geometry::euclidean(lat.dimension()), 0.5 * min_distance(lat)) / lat.covolume();
}

PoissonReport poisson_chain_check(const LatticeSpec& lat, const RadialFunction& f, double equality_tol,
                                  double slack_tol) {
  const Geometry& g = f.geometry();
  const int n = lat.dimension();
  if (g.kind != GeometryKind::Euclidean || g.n != n)
    throw Error(ErrorKind::InvalidInput, "Poisson check needs a Euclidean function of the lattice dimension");
  const profile::Profile* prof = f.line_profile();
  if (!prof) throw Error(ErrorKind::TailBoundFailure, "function has no radial profile");

  PoissonReport rep;
  const double c = g.measure_scale;
  const double covol = c * lat.covolume();
  rep.intensity = 1.0 / covol;
  rep.fe = f.at_identity();
  auto fhat = [&](double norm) {
    return spectra::spherical_transform(g, f, spectra::EuclidPoint{2.0 * kPi * norm});
  };
  rep.fhat_one = fhat(0.0);

  const LatticeSpec dual = dual_lattice(lat);
  const double lam = min_distance(lat), lam_dual = min_distance(dual);
  constexpr double tail_tol = 1e-13;

  // Lattice side.
  const Envelope& e = f.envelope();
  double R;
  if (e.compact) {
    R = e.radius;
  } else {
    R = tail_radius(e.amplitude, e.rate, e.radius, lam, n, tail_tol);
    rep.lattice_tail = gaussian_tail(e.amplitude, e.rate, R, lam, n);
  }
  const auto pts = short_vectors(lat, R);
  rep.lattice_sum = compensated_sum(evaluate_parallel(pts, [&](double t) { return f(t); }));
  rep.lattice_terms = pts.size();

  // Dual side.
  double dual_estimate = 0.0;
  if (const auto* gl = std::get_if<profile::GaussLaguerre>(prof)) {
    if (std::abs(gl->alpha - (0.5 * n - 1.0)) > 1e-15)
      throw Error(ErrorKind::TailBoundFailure, "Gauss-Laguerre profile is not a Fourier eigenbasis in this dimension");
    // f^(2 pi |mu|) = c s^n D(s^2 |mu|) with D the profile with coefficients (-1)^k c_k.
    profile::GaussLaguerre d = *gl;
    for (std::size_t k = 1; k < d.coeffs.size(); k += 2) d.coeffs[k] = -d.coeffs[k];
    const Envelope de = profile::derive_envelope(g, d);
    const double s = gl->scale, amp = c * std::pow(s, n) * de.amplitude, rate = de.rate * s * s * s * s;
    const double Rd = tail_radius(amp, rate, de.radius / (s * s), lam_dual, n, tail_tol);
    rep.dual_tail = gaussian_tail(amp, rate, Rd, lam_dual, n);
    const auto mus = short_vectors(dual, Rd);
    rep.dual_sum = compensated_sum(evaluate_parallel(mus, fhat));
    rep.dual_terms = mus.size();
  } else if (const auto* tents = std::get_if<profile::Tents>(prof); tents && n == 1) {
    // f^(2 pi k / a) = sum_j c_j a^2 sin^2(pi w_j k / a) / (pi^2 w_j k^2). For
    // |k| > K the sin^2 = (1 - cos)/2 split gives the trigamma term exactly
    // and an Abel-summation bound on the oscillating part.
    const double a = lat.covolume();
    double need = 0.0;
    for (std::size_t j = 0; j < tents->widths.size(); ++j) {
      const double sn = std::abs(std::sin(kPi * tents->widths[j] / a));
      if (sn > 1e-12) need += std::abs(tents->coeffs[j]) * a * a / (kPi * kPi * tents->widths[j]) * 2.0 / sn;
    }
    const long K = std::clamp(static_cast<long>(std::ceil(std::sqrt(c * need / tail_tol))), 64L, 20'000'000L);
    std::vector<double> vals(2 * K + 1);
#pragma omp parallel for schedule(static)
    for (long k = -K; k <= K; ++k) vals[k + K] = fhat(std::abs(static_cast<double>(k)) / a);
    // Deterministic order: increasing |k|.
    std::vector<double> ordered{vals[K]};
    for (long k = 1; k <= K; ++k) {
      ordered.push_back(vals[K + k]);
      ordered.push_back(vals[K - k]);
    }
    const double psi = boost::math::trigamma(static_cast<double>(K + 1));
    for (std::size_t j = 0; j < tents->widths.size(); ++j) {
      const double w = tents->widths[j], sn = std::abs(std::sin(kPi * w / a));
      const double scale = c * tents->coeffs[j] * a * a / (kPi * kPi * w);
      if (sn > 1e-12) {
        dual_estimate += scale * psi;
        rep.dual_tail += std::abs(scale) * 2.0 / (sn * (K + 1.0) * (K + 1.0));
      }
    }
    ordered.push_back(dual_estimate);
    rep.dual_sum = compensated_sum(ordered);
    rep.dual_terms = vals.size();
  } else {
    throw Error(ErrorKind::TailBoundFailure, "no envelope for the transform of this profile");
  }

  const double i = rep.intensity;
  rep.eta_plus = i * rep.lattice_sum;
  rep.eta_plus_dual = i * i * rep.dual_sum;
  rep.equality_gap = std::abs(rep.lattice_sum - i * rep.dual_sum);
  rep.upper_slack = i * rep.fe - rep.eta_plus;
  rep.lower_slack = rep.eta_plus_dual - i * i * rep.fhat_one;
  const double budget = equality_tol * std::max(1.0, std::abs(rep.lattice_sum));
  rep.passed = rep.equality_gap + rep.lattice_tail + i * rep.dual_tail <= budget && rep.upper_slack >= -slack_tol &&
               rep.lower_slack >= -slack_tol;
  return rep;
}

double distance(const Geometry& space, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (space.kind == GeometryKind::Sphere) return 2.0 * std::asin(std::min(1.0, 0.5 * (a - b).norm()));
  return (a - b).norm();
}

double min_pairwise_distance(const PointConfig& p) {
  double best = INFINITY;
  for (std::size_t i = 0; i < p.points.size(); ++i)
    for (std::size_t j = i + 1; j < p.points.size(); ++j) best = std::min(best, distance(p.space, p.points[i], p.points[j]));
  return best;
}

void validate(const PointConfig& p) {
  if (p.space.kind != GeometryKind::Euclidean && p.space.kind != GeometryKind::Sphere)
    throw Error(ErrorKind::InvalidInput, "point configurations live in R^n or on S^n");
  if (!(p.separation > 0.0)) throw Error(ErrorKind::InvalidInput, "separation must be positive");
  const Eigen::Index dim = p.space.kind == GeometryKind::Sphere ? p.space.n + 1 : p.space.n;
  for (const auto& x : p.points) {
    if (x.size() != dim || !x.allFinite()) throw Error(ErrorKind::InvalidInput, "point of the wrong dimension");
    if (p.space.kind == GeometryKind::Sphere && std::abs(x.norm() - 1.0) > 1e-12)
      throw Error(ErrorKind::InvalidInput, "sphere points must be unit vectors");
  }
  if (min_pairwise_distance(p) < p.separation * (1.0 - 1e-12))
    throw Error(ErrorKind::InvalidInput, "points closer than the declared separation");
}

PointConfig icosahedron() {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  PointConfig p{Geometry::sphere(2), {}, std::atan(2.0)};
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      const double u = s1, v = s2 * phi;
      for (int rot = 0; rot < 3; ++rot) {
        Eigen::Vector3d x;
        x[rot] = 0.0;
        x[(rot + 1) % 3] = u;
        x[(rot + 2) % 3] = v;
        p.points.push_back(x.normalized());
      }
    }
  return p;
}

PointConfig lattice_patch(const LatticeSpec& lat, double R) {
  PointConfig p{Geometry::euclidean(lat.dimension()), {}, min_distance(lat)};
  for (auto& v : short_vectors(lat, R)) p.points.push_back(std::move(v.point));
  return p;
}

CountReport packing_count_check(const PointConfig& p, const Eigen::VectorXd& center, double R) {
  validate(p);
  if (!(R >= 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be >= 0");
  CountReport rep;
  for (const auto& x : p.points)
    if (distance(p.space, center, x) <= R) ++rep.count;
  const double r = 0.5 * p.separation;
  const double outer = p.space.kind == GeometryKind::Sphere ? std::min(R + r, kPi) : R + r;
  rep.bound = ball_volume(p.space, outer) / ball_volume(p.space, r);
  rep.passed = static_cast<double>(rep.count) <= rep.bound * (1.0 + 1e-12);
  return rep;
}

}  // namespace packlp::pointprocess
