#include "packlp/certify.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "packlp/abel.hpp"
#include "packlp/error.hpp"
#include "packlp/quadrature.hpp"
#include "packlp/specfun.hpp"

namespace packlp::certify {
namespace {

constexpr double kPi = std::numbers::pi;

enum class Shape { EuclidGauss, HypGauss, Tents, Zonal, Heis, Other };

struct Structure {
  Shape shape = Shape::Other;
  const profile::GaussLaguerre* gauss = nullptr;  // Euclidean profile or line profile of a pullback
  const profile::Tents* tents = nullptr;
  const profile::Zonal* zonal = nullptr;
  const profile::HeisGaussLaguerre* heis = nullptr;
};

Structure inspect(const RadialFunction& f) {
  Structure s;
  if ((s.heis = f.heisenberg_profile())) {
    s.shape = Shape::Heis;
    return s;
  }
  const profile::Profile* p = f.line_profile();
  if (!p) return s;
  if ((s.gauss = std::get_if<profile::GaussLaguerre>(p)) && f.geometry().kind == GeometryKind::Euclidean) {
    s.shape = Shape::EuclidGauss;
  } else if (const auto* ap = std::get_if<profile::AbelPullback>(p)) {
    s.gauss = ap->line ? std::get_if<profile::GaussLaguerre>(&ap->line->profile) : nullptr;
    if (s.gauss && f.geometry().kind == GeometryKind::Hyperbolic) s.shape = Shape::HypGauss;
  } else if ((s.tents = std::get_if<profile::Tents>(p))) {
    s.shape = Shape::Tents;
  } else if ((s.zonal = std::get_if<profile::Zonal>(p))) {
    s.shape = Shape::Zonal;
  }
  if (s.shape == Shape::Other) s.gauss = nullptr;
  return s;
}

long double horner(const std::vector<double>& a, long double x) {
  long double v = 0.0L;
  for (std::size_t j = a.size(); j-- > 0;) v = v * x + a[j];
  return v;
}

void trim(std::vector<double>& a) {
  while (!a.empty() && a.back() == 0.0) a.pop_back();
}

// P/2 - P' in monomials.
std::vector<double> half_minus_derivative(const std::vector<double>& p) {
  std::vector<double> q(p.size(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    q[j] = 0.5 * p[j];
    if (j + 1 < p.size()) q[j] -= (j + 1.0) * p[j + 1];
  }
  return q;
}

double envelope_value(const RadialFunction& f, double t) {
  const Envelope& e = f.envelope();
  if (e.compact) return t >= e.radius ? 0.0 : e.amplitude;
  const Geometry& g = f.geometry();
  const double E = g.kind == GeometryKind::Hyperbolic ? std::pow(std::cosh(t), -(g.n - 1.0)) : 1.0;
  return e.amplitude * E * std::exp(-e.rate * t * t);
}

// Smallest sampled radius past which the envelope is below 1e-16 |f(e)|.
double envelope_radius(const RadialFunction& f, double start) {
  const Geometry& g = f.geometry();
  if (g.kind == GeometryKind::Sphere) return kPi;
  const Envelope& e = f.envelope();
  if (e.compact) return std::max(start, e.radius);
  const double target = 1e-16 * std::max(std::abs(f.at_identity()), 1e-300);
  double lo = std::max(start, e.radius), hi = std::max(lo, 1.0);
  if (envelope_value(f, lo) <= target) return lo;
  while (envelope_value(f, hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) return hi;
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (envelope_value(f, mid) > target ? lo : hi) = mid;
  }
  return hi;
}

std::vector<double> sample(double a, double b, double h) {
  std::vector<double> ts;
  if (!(b >= a)) return ts;
  const long n = std::max(1L, static_cast<long>(std::ceil((b - a) / h - 1e-9)));
  for (long i = 0; i <= n; ++i) ts.push_back(std::min(a + i * h, b));
  return ts;
}

// Maximizes phi on [a, b]; returns (argmax, max).
template <class F>
std::pair<double, double> locate_max(F phi, double a, double b) {
  const auto r = boost::math::tools::brent_find_minima([&](double x) { return -phi(x); }, a, b, 40);
  return {r.first, -r.second};
}

// Sign of a polynomial tail on (x0, X] for X its positive-root bound.
struct PolyTail {
  bool ok = false;
  double radius_x = 0.0;
  double bad_x = 0.0;  ///< first sample with the wrong sign
  std::string note;
};

PolyTail polynomial_tail(std::vector<double> a, double x0, double u_step, int want_sign, long cap) {
  PolyTail out;
  trim(a);
  if (a.empty()) {
    out.ok = true;
    return out;
  }
  if ((a.back() > 0.0 ? 1 : -1) != want_sign) {
    out.note = "leading coefficient has the wrong sign";
    return out;
  }
  const double X = positive_root_bound(a);
  out.radius_x = X;
  if (X <= x0) {
    out.ok = true;
    return out;
  }
  // Samples uniform in u = sqrt(x).
  const double u0 = std::sqrt(std::max(x0, 0.0)), u1 = std::sqrt(X);
  long n = static_cast<long>(std::ceil((u1 - u0) / u_step));
  n = std::clamp(n, 1L, cap);
  for (long i = 0; i <= n; ++i) {
    const double u = u0 + (u1 - u0) * i / n;
    const long double v = horner(a, static_cast<long double>(u) * u);
    if (want_sign * v < 0.0L) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "polynomial sign change near x = %.6g", u * u);
      out.note = buf;
      out.bad_x = u * u;
      return out;
    }
  }
  out.ok = true;
  return out;
}

// Monomial coefficients p_il of P(X, Y) with h = exp(-X/2 - Y/2) P(X, Y).
std::vector<std::vector<double>> heis_monomials(const profile::HeisGaussLaguerre& h) {
  const int J = h.max_j, K = h.max_k;
  std::vector<std::vector<double>> d(J + 1, std::vector<double>(J + 2)), e(K + 1, std::vector<double>(K + 2));
  for (int j = 0; j <= J; ++j) specfun::laguerre_coefficients(j, -0.5, d[j].data());
  for (int k = 0; k <= K; ++k) specfun::laguerre_coefficients(k, h.n - 1.0, e[k].data());
  std::vector<std::vector<double>> p(J + 1, std::vector<double>(K + 1, 0.0));
  for (int j = 0; j <= J; ++j)
    for (int k = 0; k <= K; ++k) {
      const double c = h.coeffs[j * (K + 1) + k];
      if (c == 0.0) continue;
      for (int i = 0; i <= j; ++i)
        for (int l = 0; l <= k; ++l) p[i][l] += c * d[j][i] * e[k][l];
    }
  return p;
}

std::pair<double, double> ck_boundary(double R, double angle) {
  return {R * R * std::sin(angle), R * std::sqrt(std::cos(angle))};
}

double value_at(const RadialFunction& f, const spectra::SpectralPoint& p) {
  return spectra::spherical_transform(f.geometry(), f, p);
}

// Real frequency of a point on a one-parameter branch, with a branch id.
bool branch(const spectra::SpectralPoint& p, double& lambda, int& id) {
  if (const auto* e = std::get_if<spectra::EuclidPoint>(&p)) {
    lambda = e->lambda;
    id = -1;
    return true;
  }
  if (const auto* h = std::get_if<spectra::HypReal>(&p)) {
    lambda = h->lambda;
    id = -1;
    return true;
  }
  if (const auto* a = std::get_if<spectra::HeisA>(&p)) {
    lambda = a->lambda;
    id = a->m;
    return true;
  }
  return false;
}

spectra::SpectralPoint on_branch(const spectra::SpectralPoint& like, double lambda) {
  if (std::holds_alternative<spectra::EuclidPoint>(like)) return spectra::EuclidPoint{lambda};
  if (std::holds_alternative<spectra::HypReal>(like)) return spectra::HypReal{lambda};
  return spectra::HeisA{lambda, std::get<spectra::HeisA>(like).m};
}

void check_w1(const Geometry& g, double r, const RadialFunction& f, const Structure& st, const Policy& pol,
              WitnessCertificate& c) {
  W1Report& w = c.w1;
  w.spacing = pol.w1_spacing;
  w.t_begin = 2.0 * r;
  const double hint = -1e-7 * std::max(std::abs(c.fe), 1e-300);

  if (st.shape == Shape::Heis) {
    // Boundary sphere {|g|_CK = 2r}; monotone polynomials handle the exterior.
    const double R = 2.0 * r;
    std::vector<double> angles = sample(0.0, 0.5 * kPi, pol.w1_spacing);
    std::vector<double> pts;
    for (double a : angles) {
      const auto [t, s] = ck_boundary(R, a);
      pts.push_back(t);
      pts.push_back(s);
    }
    const auto v = evaluate_on_grid(f, pts);
    w.samples = v.size();
    w.max_value = -std::numeric_limits<double>::infinity();
    auto phi = [&](double a) {
      const auto [t, s] = ck_boundary(R, a);
      return f(t, s);
    };
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] > w.max_value) {
        w.max_value = v[i];
        std::tie(w.argmax_t, w.argmax_s) = ck_boundary(R, angles[i]);
      }
      const bool peak = (i == 0 || v[i] >= v[i - 1]) && (i + 1 == v.size() || v[i] >= v[i + 1]);
      if (peak && v[i] >= hint) {
        const auto [a, m] = locate_max(phi, angles[i == 0 ? 0 : i - 1], angles[std::min(i + 1, v.size() - 1)]);
        w.near_zero.push_back(a);
        if (m > w.max_value) {
          w.max_value = m;
          std::tie(w.argmax_t, w.argmax_s) = ck_boundary(R, a);
        }
      }
    }
    w.t_end = R;
    w.tail_radius = R;
    const auto p = heis_monomials(*st.heis);
    bool monotone = true;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t l = 0; l < p[i].size(); ++l)
        if (i + l > 0 && p[i][l] > 0.0) monotone = false;
    w.tail_argument = "monotone_polynomial";
    w.tail_ok = monotone;
    return;
  }

  const double T = envelope_radius(f, w.t_begin);
  w.t_end = std::max(T, w.t_begin);
  w.tail_radius = w.t_end;
  w.tail_bound = envelope_value(f, w.t_end);
  const auto ts = sample(w.t_begin, w.t_end, pol.w1_spacing);
  const auto v = evaluate_on_grid(f, ts);
  w.samples = v.size();
  w.max_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > w.max_value) {
      w.max_value = v[i];
      w.argmax_t = ts[i];
    }
    const bool peak = (i == 0 || v[i] >= v[i - 1]) && (i + 1 == v.size() || v[i] >= v[i + 1]);
    if (peak && v[i] >= hint && v.size() > 1) {
      const auto [t, m] = locate_max([&](double x) { return f(x); }, ts[i == 0 ? 0 : i - 1],
                                     ts[std::min(i + 1, v.size() - 1)]);
      w.near_zero.push_back(t);
      if (m > w.max_value) {
        w.max_value = m;
        w.argmax_t = t;
      }
    }
  }
  if (v.empty()) w.max_value = 0.0;

  switch (st.shape) {
    case Shape::EuclidGauss:
    case Shape::HypGauss: {
      const double s = st.gauss->scale;
      auto P = profile::monomial_coefficients(*st.gauss);
      std::string id = "laguerre_root_bound";
      if (st.shape == Shape::HypGauss) {
        if (g.n == 3) {
          // On H^3, f = t exp(-x/2) (P/2 - P')(x) / (s^2 sinh t) up to a positive factor.
          P = half_minus_derivative(P);
          id = "abel3_root_bound";
        } else {
          w.tail_argument = "envelope_magnitude";
          w.tail_ok = true;
          return;
        }
      }
      const double x0 = 2.0 * kPi * (w.t_end / s) * (w.t_end / s);
      const double du = std::sqrt(2.0 * kPi) * pol.w1_spacing / s;
      const PolyTail pt = polynomial_tail(P, x0, du, -1, pol.max_tail_samples);
      w.tail_argument = pt.note.empty() ? id : id + ": " + pt.note;
      w.tail_ok = pt.ok;
      w.tail_radius = std::max(w.t_end, s * std::sqrt(pt.radius_x / (2.0 * kPi)));
      if (pt.bad_x > 0.0) w.near_zero.push_back(s * std::sqrt(pt.bad_x / (2.0 * kPi)));
      return;
    }
    case Shape::Tents: {
      const double wmax = st.tents->widths.empty() ? 0.0 : *std::max_element(st.tents->widths.begin(), st.tents->widths.end());
      w.tail_argument = "compact_support";
      w.tail_ok = wmax <= w.t_begin;
      return;
    }
    case Shape::Zonal:
      w.tail_argument = "compact_domain";
      w.tail_ok = true;
      return;
    default:
      w.tail_argument = "envelope_magnitude";
      w.tail_ok = true;
      return;
  }
}

void check_w2(const Geometry& g, const RadialFunction& f, const Structure& st, const Policy& pol,
              WitnessCertificate& c) {
  W2Report& w = c.w2;
  w.grid = pol.spectral;
  w.refine_factor = pol.refine_factor;
  if (st.shape == Shape::Zonal)
    w.grid.max_l = std::max(w.grid.max_l, static_cast<int>(st.zonal->coeffs.size()) - 1);
  const spectra::SpectralGrid base = spectra::make_grid(g, w.grid);
  const spectra::SpectralGrid fine = spectra::refine(base, pol.refine_factor);
  spectra::SpectralGrid all{g, w.grid, base.points};
  all.points.insert(all.points.end(), fine.points.begin(), fine.points.end());

  if (st.shape == Shape::Heis) {
    // Extension beyond the LP truncation: twice the frequency range and Laguerre index.
    spectra::GridSpec ext = w.grid;
    ext.max_lambda *= 2.0;
    ext.max_tau *= 2.0;
    ext.max_m = 2 * std::max(ext.max_m, 1);
    const auto e = spectra::make_grid(g, ext);
    all.points.insert(all.points.end(), e.points.begin(), e.points.end());
    w.tail_start = w.grid.max_lambda;
  }
  std::sort(all.points.begin(), all.points.end());
  all.points.erase(std::unique(all.points.begin(), all.points.end()), all.points.end());

  const auto v = spectra::transform_on_grid(g, f, all);
  w.samples = v.size();
  w.min_value = std::numeric_limits<double>::infinity();
  w.imag_min = std::numeric_limits<double>::infinity();
  const double hint = 1e-7 * std::max(std::abs(c.fhat_one), 1e-300);
  struct Cand {
    double value;
    std::size_t i;
  };
  std::vector<Cand> dips;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < w.min_value) {
      w.min_value = v[i];
      w.argmin = all.points[i];
    }
    if (std::holds_alternative<spectra::HypImag>(all.points[i])) {
      w.has_imag = true;
      w.imag_min = std::min(w.imag_min, v[i]);
    }
    double lam = 0.0;
    int id = 0;
    if (!branch(all.points[i], lam, id) || v[i] > hint) continue;
    double l0 = 0.0, l1 = 0.0;
    int i0 = 0, i1 = 0;
    const bool left = i > 0 && branch(all.points[i - 1], l0, i0) && i0 == id;
    const bool right = i + 1 < v.size() && branch(all.points[i + 1], l1, i1) && i1 == id;
    if ((!left || v[i] <= v[i - 1]) && (!right || v[i] <= v[i + 1])) dips.push_back({v[i], i});
  }
  if (!w.has_imag) w.imag_min = 0.0;
  std::sort(dips.begin(), dips.end(), [](const Cand& a, const Cand& b) { return a.value < b.value; });
  if (dips.size() > 16) dips.resize(16);
  for (const auto& d : dips) {
    const auto& p = all.points[d.i];
    double lam = 0.0, lo = 0.0, hi = 0.0;
    int id = 0, other = 0;
    branch(p, lam, id);
    lo = (d.i > 0 && branch(all.points[d.i - 1], lo, other) && other == id) ? lo : lam;
    hi = (d.i + 1 < v.size() && branch(all.points[d.i + 1], hi, other) && other == id) ? hi : lam;
    if (!(hi > lo)) continue;
    const auto [x, m] = locate_max([&](double l) { return -value_at(f, on_branch(p, l)); }, lo, hi);
    if (x > 0.0) w.near_zero.push_back(x);
    if (-m < w.min_value) {
      w.min_value = -m;
      w.argmin = on_branch(p, x);
    }
  }
  std::sort(w.near_zero.begin(), w.near_zero.end());
  w.near_zero.erase(std::unique(w.near_zero.begin(), w.near_zero.end()), w.near_zero.end());

  switch (st.shape) {
    case Shape::EuclidGauss:
    case Shape::HypGauss: {
      // f^ = s^d exp(-x/2) sum_k (-1)^k c_k L_k(x), x = s^2 lambda^2 / (2 pi).
      profile::GaussLaguerre q = *st.gauss;
      for (std::size_t k = 1; k < q.coeffs.size(); k += 2) q.coeffs[k] = -q.coeffs[k];
      const double s = q.scale;
      double lmax = w.grid.max_lambda;
      for (double x : w.grid.extra_lambdas) lmax = std::max(lmax, std::abs(x));
      w.tail_start = lmax;
      const double x0 = s * s * lmax * lmax / (2.0 * kPi);
      const double du = s * (w.grid.spacing / pol.refine_factor) / std::sqrt(2.0 * kPi);
      const PolyTail pt = polynomial_tail(profile::monomial_coefficients(q), x0, du, 1, pol.max_tail_samples);
      std::string id = "laguerre_root_bound";
      if (st.shape == Shape::HypGauss) id += "+imaginary_sampled";
      w.tail_argument = pt.note.empty() ? id : id + ": " + pt.note;
      w.tail_ok = pt.ok;
      return;
    }
    case Shape::Tents: {
      // Each tent has 0 <= transform <= width, so negative weight bounds f^ from below.
      double negative = 0.0;
      for (std::size_t k = 0; k < st.tents->coeffs.size(); ++k)
        negative += std::max(-st.tents->coeffs[k], 0.0) * st.tents->widths[k];
      const bool nonneg = negative <= pol.w2_tolerance;
      w.tail_argument = nonneg ? "nonnegative_tents" : "mixed_sign_tents";
      w.tail_ok = nonneg;
      return;
    }
    case Shape::Zonal:
      w.tail_argument = "finite_expansion";
      w.tail_ok = true;
      return;
    case Shape::Heis:
      w.tail_argument = "sampled_extension";
      w.tail_ok = true;
      return;
    default:
      w.tail_argument = "grid_only";
      w.tail_ok = true;
      return;
  }
}

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

void recheck(double r, const RadialFunction& f, const Structure& st, const Policy& pol, WitnessCertificate& c) {
  std::mt19937_64 rng(pol.seed);
  c.recheck_seed = pol.seed;
  std::vector<double> pts;
  if (st.shape == Shape::Heis) {
    std::uniform_real_distribution<double> ang(0.0, 0.5 * kPi), dil(1.0, 2.0);
    for (int i = 0; i < pol.random_points; ++i) {
      const double a = ang(rng), rho = dil(rng);
      const auto [t, s] = ck_boundary(2.0 * r, a);
      pts.push_back(rho * rho * t);
      pts.push_back(rho * s);
    }
  } else {
    std::uniform_real_distribution<double> u(2.0 * r, std::max(c.w1.t_end, 2.0 * r));
    for (int i = 0; i < pol.random_points; ++i) pts.push_back(u(rng));
  }
  const auto v = evaluate_on_grid(f, pts);
  c.recheck_max = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

template <bool Parallel>
std::vector<double> evaluate_impl(const RadialFunction& f, const std::vector<double>& ts) {
  const bool two = f.geometry().two_dimensional();
  const long n = static_cast<long>(two ? ts.size() / 2 : ts.size());
  std::vector<double> out(n);
  std::exception_ptr err;
  auto one = [&](long i) { out[i] = two ? f(ts[2 * i], ts[2 * i + 1]) : f(ts[i]); };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      try {
        one(i);
      } catch (...) {
#pragma omp critical(packlp_certify_error)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (long i = 0; i < n; ++i) one(i);
  }
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double positive_root_bound(const std::vector<double>& a_in) {
  std::vector<double> a = a_in;
  trim(a);
  const std::size_t D = a.empty() ? 0 : a.size() - 1;
  if (D == 0) return 0.0;
  double b = 0.0;
  for (std::size_t j = 0; j < D; ++j) {
    double q = std::abs(a[j] / a[D]);
    if (j == 0) q *= 0.5;
    b = std::max(b, std::pow(q, 1.0 / static_cast<double>(D - j)));
  }
  return 2.0 * b;
}

std::vector<double> evaluate_on_grid(const RadialFunction& f, const std::vector<double>& ts) {
  return evaluate_impl<true>(f, ts);
}

std::vector<double> evaluate_on_grid_serial(const RadialFunction& f, const std::vector<double>& ts) {
  return evaluate_impl<false>(f, ts);
}

double WitnessCertificate::bound() const {
  if (!(fhat_one > 0.0)) throw Error(ErrorKind::DegenerateWitness, "f^(1) must be positive");
  return ball_volume(geometry, r) * fe / fhat_one;
}

Policy default_policy(const witness::WitnessBasis& b, const spectra::GridSpec& lp_grid,
                      const witness::SpatialGridSpec& lp_spatial) {
  Policy p;
  p.spectral = lp_grid;
  p.refine_factor = 4;
  if (b.family == witness::Family::HeisGaussPoly)
    p.w1_spacing = 0.5 * kPi / std::max(lp_spatial.boundary_points, 1) / 4.0;
  else if (b.family == witness::Family::Hat)
    p.w1_spacing = 2.0 * b.r / 400.0;
  else
    p.w1_spacing = lp_spatial.spacing / 4.0;
  return p;
}

WitnessCertificate certify_witness(const Geometry& g, double r, const RadialFunction& f, const Policy& policy) {
  if (!(f.geometry() == g)) throw Error(ErrorKind::SpectrumMismatch, "function lives on " + f.geometry().label());
  if (!(r > 0.0) || !(policy.w1_spacing > 0.0) || policy.refine_factor < 1)
    throw Error(ErrorKind::InvalidInput, "invalid radius or policy");
  WitnessCertificate c{g, r, f, 0.0, 0.0, {}, {}, 0.0, 0, false, {}};
  const Structure st = inspect(f);
  c.fe = f.at_identity();
  c.fhat_one = spectra::spherical_transform(g, f, spectra::trivial_point(g));
  check_w1(g, r, f, st, policy, c);
  check_w2(g, f, st, policy, c);

  if (!(c.fhat_one >= policy.fhat_min)) {
    c.reason = c.fhat_one < 0.0 ? format("W2: f^(1) = %.6g < 0", c.fhat_one)
                                : format("W2: f^(1) = %.6g below 1e-9", c.fhat_one);
  } else if (!(c.w1.max_value <= 0.0)) {
    c.reason = format("W1: f = %.6g > 0 at t = %.6g", c.w1.max_value, c.w1.argmax_t);
  } else if (!c.w1.tail_ok) {
    c.reason = "W1 tail: " + c.w1.tail_argument;
  } else if (!(c.w2.min_value >= -policy.w2_tolerance)) {
    c.reason = format("W2: f^ = %.6g below tolerance", c.w2.min_value);
  } else if (!c.w2.tail_ok) {
    c.reason = "W2 tail: " + c.w2.tail_argument;
  } else {
    recheck(r, f, st, policy, c);
    if (!(c.recheck_max <= policy.random_tolerance))
      c.reason = format("random re-check: f = %.6g", c.recheck_max);
  }
  c.certified = c.reason.empty();
  return c;
}

RefineOptions default_refine_options(const witness::WitnessBasis& b) {
  RefineOptions o;
  o.spectral = witness::default_grid_spec(b);
  o.spatial = witness::default_spatial_spec(b);
  o.margins = witness::default_margins(b);
  return o;
}

RefineResult refine_until_certified(const witness::WitnessBasis& b, const RefineOptions& options) {
  if (options.budget < 1) throw Error(ErrorKind::InvalidInput, "budget must be at least 1");
  RefineOptions cur = options;
  const double policy_tolerance = Policy{}.w2_tolerance;
  std::string last;
  for (int round = 1; round <= options.budget; ++round) {
    const auto inst = witness::build_lp(b, spectra::make_grid(b.geometry, cur.spectral), cur.spatial, cur.margins);
    const auto sol = witness::solve_lp(inst);
    if (sol.status != lp::Status::Optimal) {
      last = std::string("LP ") + lp::to_string(sol.status) + " in round " + std::to_string(round);
      // A finer grid only adds constraints; an infeasible LP stays infeasible.
      if (sol.status == lp::Status::Infeasible) break;
    } else {
      const RadialFunction f = b.combine(sol.coefficients);
      auto cert = certify_witness(b.geometry, b.r, f, default_policy(b, cur.spectral, cur.spatial));
      if (cert.certified) {
        RefineResult res{std::move(cert), 0.0, round, sol, cur};
        res.bound = res.certificate.bound();
        return res;
      }
      last = "round " + std::to_string(round) + ": " + cert.reason;
      cur.spatial.extra.insert(cur.spatial.extra.end(), cert.w1.near_zero.begin(), cert.w1.near_zero.end());
      cur.spectral.extra_lambdas.insert(cur.spectral.extra_lambdas.end(), cert.w2.near_zero.begin(),
                                        cert.w2.near_zero.end());
      // The halved grid shrinks gaps between samples fourfold; half the observed
      // violation then covers them with room to spare.
      const double B = max_abs(witness::spectral_row(b, spectra::trivial_point(b.geometry)));
      bool measured = false;
      if (cert.w1.max_value > 0.0) {
        const double row = max_abs(witness::spatial_row(b, {cert.w1.argmax_t, cert.w1.argmax_s}));
        if (row > 0.0) cur.margins.spatial = std::max(cur.margins.spatial, 0.5 * cert.w1.max_value * B / row);
        measured = true;
      }
      if (cert.w2.min_value < -policy_tolerance) {
        const double row = max_abs(witness::spectral_row(b, cert.w2.argmin));
        if (row > 0.0) cur.margins.spectral = std::max(cur.margins.spectral, -0.5 * cert.w2.min_value * B / row);
        measured = true;
      }
      // A located tail sign change is repaired by its grid point alone.
      if (!cert.w1.tail_ok && !cert.w1.near_zero.empty()) measured = true;
      if (!measured) {
        cur.margins.spectral *= options.margin_growth;
        cur.margins.spatial *= options.margin_growth;
      }
    }
    cur.spectral.spacing *= 0.5;
    cur.spectral.imag_points *= 2;
    cur.spatial.spacing *= 0.5;
    cur.spatial.boundary_points *= 2;
  }
  throw Error(ErrorKind::BudgetExhausted, "no certified witness: " + last);
}

PushforwardReport witness_pushforward(const WitnessCertificate& cert, double tol) {
  if (cert.geometry.kind != GeometryKind::Hyperbolic)
    throw Error(ErrorKind::InvalidInput, "the Abel pushforward needs a hyperbolic witness");
  PushforwardReport rep;
  const double r = cert.r, T = std::max(cert.w1.t_end, 4.0 * r);

  // f is tabulated once and splined; the Abel integrals then cost no further
  // evaluations of f (which on even-dimensional H^n is itself an integral).
  const double S = std::max(envelope_radius(cert.f, 0.0), T) + 1.0;
  const int cells = 8000;
  const double h = S / cells;
  std::vector<double> grid(cells + 1);
  for (int i = 0; i <= cells; ++i) grid[i] = i * h;
  const auto fv = evaluate_on_grid(cert.f, grid);
  auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
      fv.begin(), fv.end(), 0.0, h, 0.0, 0.0);
  auto ftab = [&](double t) { return t >= S ? 0.0 : (*spline)(t); };
  std::vector<double> x16, w16;
  quad::gauss_legendre(16, x16, w16);
  const double cn = 2.0 * abel::forward_constant(cert.geometry.n);
  const int n = cert.geometry.n;
  // Af(t) = 2 c_n int_0^V v^{n-2} f(acosh(cosh t + v^2)) dv, V reaching s = S.
  auto g = [&](double t) {
    const double ct = std::cosh(t);
    if (t >= S) return 0.0;
    const double V = std::sqrt(std::cosh(S) - ct);
    const int pieces = 200;
    double sum = 0.0;
    for (int p = 0; p < pieces; ++p) {
      const double a = V * p / pieces, b = V * (p + 1) / pieces;
      for (std::size_t k = 0; k < x16.size(); ++k) {
        const double v = 0.5 * (a + b) + 0.5 * (b - a) * x16[k];
        sum += 0.5 * (b - a) * w16[k] * std::pow(v, n - 2) * ftab(std::acosh(ct + v * v));
      }
    }
    return cn * sum;
  };

  // (W1) on [2r, T].
  const auto ts = sample(2.0 * r, T, (T - 2.0 * r) / 400.0);
  std::vector<double> gv(ts.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(ts.size()); ++i) gv[i] = g(ts[i]);
  rep.w1_max = *std::max_element(gv.begin(), gv.end());

  // (W2): composite Gauss-Legendre on [0, T] with g tabulated once.
  const int panels = 160;
  std::vector<double> nodes, weights;
  for (int p = 0; p < panels; ++p) {
    const double a = T * p / panels, b = T * (p + 1) / panels;
    for (std::size_t k = 0; k < x16.size(); ++k) {
      nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * x16[k]);
      weights.push_back(0.5 * (b - a) * w16[k]);
    }
  }
  std::vector<double> gn(nodes.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(nodes.size()); ++i) gn[i] = g(nodes[i]);
  auto cosine = [&](double lam) {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * gn[k] * std::cos(lam * nodes[k]);
    return 2.0 * s;
  };
  const spectra::GridSpec& spec = cert.w2.grid;
  const int nl = static_cast<int>(std::floor(spec.max_lambda / spec.spacing + 1e-9));
  rep.w2_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= nl; ++i) rep.w2_min = std::min(rep.w2_min, cosine(i * spec.spacing));
  rep.g_zero = g(0.0);
  rep.ghat_zero = cosine(0.0);
  rep.line_bound = rep.ghat_zero > 0.0 ? 2.0 * r * rep.g_zero / rep.ghat_zero : INFINITY;
  rep.samples = ts.size() + static_cast<std::size_t>(nl + 1);
  rep.passed = rep.ghat_zero > 0.0 && rep.w1_max <= tol && rep.w2_min >= -tol;
  return rep;
}

}  // namespace packlp::certify
