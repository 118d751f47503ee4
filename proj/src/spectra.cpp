#include "packlp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <tuple>

#include "packlp/error.hpp"
#include "packlp/quadrature.hpp"
#include "packlp/specfun.hpp"

namespace packlp::spectra {
namespace {

constexpr double kPi = std::numbers::pi;

// exp(-x/2) sum_k c_k L_k^(alpha)(x); x may be negative (imaginary frequencies).
double laguerre_gauss(double alpha, const std::vector<double>& c, double x, bool alternate) {
  double prev = 1.0, cur = (1.0 + alpha) - x;
  double sum = c.empty() ? 0.0 : c[0];
  if (c.size() > 1) sum += (alternate ? -1.0 : 1.0) * c[1] * cur;
  for (std::size_t j = 1; j + 1 < c.size(); ++j) {
    const double jd = static_cast<double>(j);
    const double next = ((2.0 * jd + 1.0 + alpha - x) * cur - (jd + alpha) * prev) / (jd + 1.0);
    prev = cur;
    cur = next;
    sum += ((alternate && (j + 1) % 2) ? -1.0 : 1.0) * c[j + 1] * cur;
  }
  return std::exp(-0.5 * x) * sum;
}

// Fourier transform (angular frequency) of sum_k c_k psi_k(|x|/scale) on
// R^d, psi_k the Laguerre-Gauss eigenfunctions of order alpha = d/2 - 1.
double eigen_transform(const profile::GaussLaguerre& p, int d, double lambda, bool imaginary) {
  const double y = p.scale * lambda / (2.0 * kPi);
  const double x = (imaginary ? -2.0 : 2.0) * kPi * y * y;
  return std::pow(p.scale, d) * laguerre_gauss(p.alpha, p.coeffs, x, true);
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }
double sinhc(double x) { return std::abs(x) < 1e-8 ? 1.0 + x * x / 6.0 : std::sinh(x) / x; }

int tag_rank(const SpectralPoint& p) { return static_cast<int>(p.index()); }

std::tuple<int, double, double> key(const SpectralPoint& p) {
  return std::visit(
      [&](const auto& q) -> std::tuple<int, double, double> {
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<Q, EuclidPoint>) return {tag_rank(p), q.lambda, 0.0};
        if constexpr (std::is_same_v<Q, HypReal>) return {tag_rank(p), q.lambda, 0.0};
        if constexpr (std::is_same_v<Q, HypImag>) return {tag_rank(p), q.s, 0.0};
        if constexpr (std::is_same_v<Q, SpherePoint>) return {tag_rank(p), q.l, 0.0};
        if constexpr (std::is_same_v<Q, HeisA>) return {tag_rank(p), q.lambda, q.m};
        return {tag_rank(p), std::get<HeisB>(p).tau, 0.0};
      },
      p);
}

double hyperbolic_phi(int n, const SpectralPoint& p, double t) {
  const double rho = 0.5 * (n - 1);
  const double z = -std::sinh(t) * std::sinh(t);
  if (const auto* r = std::get_if<HypReal>(&p)) {
    const specfun::Complex a(0.5 * rho, 0.5 * r->lambda), b(0.5 * rho, -0.5 * r->lambda);
    return specfun::gauss_2f1(a, b, 0.5 * n, z, 1e-10).real();
  }
  const double s = std::get<HypImag>(p).s;
  return specfun::gauss_2f1(0.5 * (rho - s), 0.5 * (rho + s), 0.5 * n, z, 1e-10).real();
}

double heis_a_kernel(int n, const HeisA& q, double s) {
  const double x = std::abs(q.lambda) * s * s;
  return specfun::laguerre_norm(q.m, n - 1, 0.5 * x) * std::exp(-0.25 * x);
}

// int_R u_j(t) cos(lambda t) dt for every j, closed form or quadrature.
std::vector<double> heis_t_factors(const profile::HeisGaussLaguerre& h, double lambda, Method m) {
  std::vector<double> out(h.max_j + 1);
  for (int j = 0; j <= h.max_j; ++j) {
    if (m == Method::Quadrature) {
      const double T = 6.5 * h.scale_t * std::sqrt(1.0 + j / 8.0);
      const int pieces = std::clamp(static_cast<int>(std::abs(lambda) * T / kPi) + 1, 4, 4000);
      std::vector<double> br;
      for (int i = 0; i <= pieces; ++i) br.push_back(T * i / pieces);
      quad::Tolerance tol;
      tol.rel = 1e-12;
      tol.max_intervals = 40000;
      out[j] = 2.0 * quad::checked(
                         quad::integrate_pieces(
                             [&](double t) { return profile::heis_u(h, j, t) * std::cos(lambda * t); }, br, tol),
                         "Heisenberg t-factor");
    } else {
      profile::GaussLaguerre unit = profile::gauss_laguerre_unit(h.scale_t, -0.5, j);
      out[j] = eigen_transform(unit, 1, lambda, false);
    }
  }
  return out;
}

// c int_0^inf v_k(s) K(s) s^{2n-1} ds for every k.
template <class Kernel>
std::vector<double> heis_s_factors(const Geometry& g, const profile::HeisGaussLaguerre& h, Kernel kernel,
                                   double osc) {
  const int K = h.max_k;
  const double T = 7.0 * h.scale_s * std::sqrt(1.0 + (K + g.n) / 8.0);
  const int pieces = std::clamp(static_cast<int>(osc * T / kPi) + 1, 4, 4000);
  std::vector<double> br;
  for (int i = 0; i <= pieces; ++i) br.push_back(T * i / pieces);
  quad::Tolerance tol;
  tol.rel = 1e-12;
  tol.max_intervals = 40000;
  const double c = surface_constant(g);
  const auto r = quad::integrate_pieces(
      [&](double s, std::span<double> out) {
        const double w = kernel(s) * c * std::pow(s, 2 * g.n - 1);
        for (int k = 0; k <= K; ++k) out[k] = profile::heis_v(h, k, s) * w;
      },
      K + 1, br, tol);
  quad::checked(r, "Heisenberg s-factor");
  return r.value;
}

std::vector<double> heis_components(const Geometry& g, const profile::HeisGaussLaguerre& h, const SpectralPoint& p,
                                    Method m) {
  std::vector<double> T, S;
  if (const auto* a = std::get_if<HeisA>(&p)) {
    T = heis_t_factors(h, a->lambda, m);
    // The Laguerre factor oscillates about m times over its support.
    S = heis_s_factors(
        g, h, [&](double s) { return heis_a_kernel(g.n, *a, s); },
        std::sqrt(std::abs(a->lambda) * (a->m + 1.0)));
  } else {
    const double tau = std::get<HeisB>(p).tau;
    T = heis_t_factors(h, 0.0, m);
    if (m == Method::Quadrature) {
      S = heis_s_factors(
          g, h, [&](double s) { return euclid_kernel(2 * g.n, tau * s); }, tau);
    } else {
      S.resize(h.max_k + 1);
      for (int k = 0; k <= h.max_k; ++k) {
        profile::GaussLaguerre unit = profile::gauss_laguerre_unit(h.scale_s, g.n - 1.0, k);
        S[k] = g.measure_scale * eigen_transform(unit, 2 * g.n, tau, false);
      }
    }
  }
  std::vector<double> out((h.max_j + 1) * (h.max_k + 1));
  for (int j = 0; j <= h.max_j; ++j)
    for (int k = 0; k <= h.max_k; ++k) out[j * (h.max_k + 1) + k] = T[j] * S[k];
  return out;
}

double heis_transform(const Geometry& g, const profile::HeisGaussLaguerre& h, const SpectralPoint& p,
                      Method m) {
  const auto comp = heis_components(g, h, p, m);
  double sum = 0.0;
  for (std::size_t i = 0; i < comp.size(); ++i)
    if (h.coeffs[i] != 0.0) sum += h.coeffs[i] * comp[i];
  return sum;
}

std::optional<double> analytic(const Geometry& g, const RadialFunction& f, const SpectralPoint& p) {
  const profile::Profile* prof = f.line_profile();
  if (!prof) return std::nullopt;
  switch (g.kind) {
    case GeometryKind::Euclidean: {
      const double lam = std::get<EuclidPoint>(p).lambda;
      if (const auto* q = std::get_if<profile::GaussLaguerre>(prof))
        if (std::abs(q->alpha - (0.5 * g.n - 1.0)) < 1e-15) return g.measure_scale * eigen_transform(*q, g.n, lam, false);
      if (g.n == 1 && std::holds_alternative<profile::Tents>(*prof)) {
        auto v = line_transform(*prof, lam);
        if (v) return g.measure_scale * *v;
      }
      return std::nullopt;
    }
    case GeometryKind::Hyperbolic: {
      const auto* q = std::get_if<profile::AbelPullback>(prof);
      if (!q || q->n != g.n) return std::nullopt;
      std::optional<double> v;
      if (const auto* r = std::get_if<HypReal>(&p)) v = line_transform(q->line->profile, r->lambda, false);
      else v = line_transform(q->line->profile, std::get<HypImag>(p).s, true);
      if (v) return g.measure_scale * *v;
      return std::nullopt;
    }
    case GeometryKind::Sphere: {
      const auto* q = std::get_if<profile::Zonal>(prof);
      if (!q || q->n != g.n) return std::nullopt;
      const int l = std::get<SpherePoint>(p).l;
      if (l >= static_cast<int>(q->coeffs.size())) return 0.0;
      const double total = g.measure_scale * 2.0 * std::pow(kPi, 0.5 * (g.n + 1)) / std::tgamma(0.5 * (g.n + 1));
      return q->coeffs[l] * total / harmonic_dimension(g.n, l);
    }
    case GeometryKind::Heisenberg:
      return std::nullopt;
  }
  return std::nullopt;
}

double quadrature_transform(const Geometry& g, const RadialFunction& f, const SpectralPoint& p, double rel_tol) {
  const Envelope& env = f.envelope();
  if (env.amplitude == 0.0) return 0.0;
  double T;
  if (g.kind == GeometryKind::Sphere) {
    T = kPi;
  } else if (env.compact) {
    T = env.radius;
  } else {
    T = f.cutoff(1e-3 * rel_tol * f.tail_mass(env.radius));
  }
  double osc = 0.0;
  if (const auto* e = std::get_if<EuclidPoint>(&p)) osc = e->lambda;
  if (const auto* h = std::get_if<HypReal>(&p)) osc = h->lambda;
  if (const auto* s = std::get_if<SpherePoint>(&p)) osc = s->l;
  const int pieces = std::clamp(static_cast<int>(osc * T / kPi) + 1, 8, 4000);
  std::vector<double> br;
  for (int i = 0; i <= pieces; ++i) br.push_back(T * i / pieces);
  if (const auto* prof = f.line_profile())
    if (const auto* tents = std::get_if<profile::Tents>(prof)) {
      for (double w : tents->widths)
        if (w < T) br.push_back(w);
      std::sort(br.begin(), br.end());
      br.erase(std::unique(br.begin(), br.end()), br.end());
    }
  quad::Tolerance tol;
  tol.rel = 0.1 * rel_tol;
  tol.max_intervals = 40000;
  const auto r = quad::integrate_pieces(
      [&](double t) {
        const double v = f(t);
        if (v == 0.0) return 0.0;
        return v * spherical_function(g, p, t) * radial_density(g, t);
      },
      br, tol);
  return quad::checked(r, "spherical transform");
}

}  // namespace

bool matches(const Geometry& g, const SpectralPoint& p) {
  switch (g.kind) {
    case GeometryKind::Euclidean: return std::holds_alternative<EuclidPoint>(p);
    case GeometryKind::Hyperbolic: return std::holds_alternative<HypReal>(p) || std::holds_alternative<HypImag>(p);
    case GeometryKind::Sphere: return std::holds_alternative<SpherePoint>(p);
    case GeometryKind::Heisenberg: return std::holds_alternative<HeisA>(p) || std::holds_alternative<HeisB>(p);
  }
  return false;
}

void require_point(const Geometry& g, const SpectralPoint& p) {
  if (!matches(g, p))
    throw Error(ErrorKind::SpectrumMismatch, to_string(p) + " is not a spectral point of " + g.label());
  bool ok = true;
  if (const auto* e = std::get_if<EuclidPoint>(&p)) ok = e->lambda >= 0.0 && std::isfinite(e->lambda);
  if (const auto* h = std::get_if<HypReal>(&p)) ok = h->lambda >= 0.0 && std::isfinite(h->lambda);
  if (const auto* h = std::get_if<HypImag>(&p)) ok = h->s > 0.0 && h->s <= g.rho() * (1.0 + 1e-15);
  if (const auto* s = std::get_if<SpherePoint>(&p)) ok = s->l >= 0;
  if (const auto* a = std::get_if<HeisA>(&p)) ok = a->lambda != 0.0 && std::isfinite(a->lambda) && a->m >= 0;
  if (const auto* b = std::get_if<HeisB>(&p)) ok = b->tau >= 0.0 && std::isfinite(b->tau);
  if (!ok) throw Error(ErrorKind::InvalidInput, to_string(p) + " lies outside the spectrum");
}

SpectralPoint trivial_point(const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::Euclidean: return EuclidPoint{0.0};
    case GeometryKind::Hyperbolic: return HypImag{g.rho()};
    case GeometryKind::Sphere: return SpherePoint{0};
    case GeometryKind::Heisenberg: return HeisB{0.0};
  }
  return EuclidPoint{0.0};
}

bool is_trivial(const Geometry& g, const SpectralPoint& p) { return p == trivial_point(g); }

std::string to_string(const SpectralPoint& p) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& q) {
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<Q, EuclidPoint>) os << "lambda=" << q.lambda;
        if constexpr (std::is_same_v<Q, HypReal>) os << "lambda=" << q.lambda;
        if constexpr (std::is_same_v<Q, HypImag>) os << "lambda=i*" << q.s;
        if constexpr (std::is_same_v<Q, SpherePoint>) os << "l=" << q.l;
        if constexpr (std::is_same_v<Q, HeisA>) os << "A(lambda=" << q.lambda << ",m=" << q.m << ")";
        if constexpr (std::is_same_v<Q, HeisB>) os << "B(tau=" << q.tau << ")";
      },
      p);
  return os.str();
}

bool operator<(const SpectralPoint& a, const SpectralPoint& b) { return key(a) < key(b); }
bool operator==(const SpectralPoint& a, const SpectralPoint& b) { return key(a) == key(b); }

SpectralGrid make_grid(const Geometry& g, const GridSpec& spec) {
  if (!(spec.spacing > 0.0) || spec.max_lambda < 0.0 || spec.imag_points < 1 || spec.max_l < 0 || spec.max_m < 0)
    throw Error(ErrorKind::GridError, "invalid spectral grid specification");
  SpectralGrid grid{g, spec, {}};
  auto& pts = grid.points;
  const int nl = static_cast<int>(std::floor(spec.max_lambda / spec.spacing + 1e-9));
  switch (g.kind) {
    case GeometryKind::Euclidean:
      for (int i = 0; i <= nl; ++i) pts.push_back(EuclidPoint{i * spec.spacing});
      for (double x : spec.extra_lambdas) pts.push_back(EuclidPoint{std::abs(x)});
      break;
    case GeometryKind::Hyperbolic:
      for (int i = 0; i <= nl; ++i) pts.push_back(HypReal{i * spec.spacing});
      for (double x : spec.extra_lambdas) pts.push_back(HypReal{std::abs(x)});
      for (int j = 1; j <= spec.imag_points; ++j) pts.push_back(HypImag{g.rho() * j / spec.imag_points});
      break;
    case GeometryKind::Sphere:
      for (int l = 0; l <= spec.max_l; ++l) pts.push_back(SpherePoint{l});
      break;
    case GeometryKind::Heisenberg: {
      for (int i = 1; i <= nl; ++i)
        for (int m = 0; m <= spec.max_m; ++m) pts.push_back(HeisA{i * spec.spacing, m});
      for (double x : spec.extra_lambdas)
        if (x != 0.0)
          for (int m = 0; m <= spec.max_m; ++m) pts.push_back(HeisA{std::abs(x), m});
      const int nt = static_cast<int>(std::floor(spec.max_tau / spec.spacing + 1e-9));
      for (int i = 0; i <= nt; ++i) pts.push_back(HeisB{i * spec.spacing});
      break;
    }
  }
  pts.push_back(trivial_point(g));
  std::sort(pts.begin(), pts.end(), [](const SpectralPoint& a, const SpectralPoint& b) { return a < b; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return grid;
}

SpectralGrid refine(const SpectralGrid& grid, int factor) {
  if (factor < 1) throw Error(ErrorKind::GridError, "refinement factor must be >= 1");
  GridSpec s = grid.spec;
  s.spacing /= factor;
  s.imag_points *= factor;
  return make_grid(grid.geometry, s);
}

double euclid_kernel(int n, double x) {
  x = std::abs(x);
  if (n == 1) return std::cos(x);
  const double nu = 0.5 * n - 1.0;
  if (x < 2.0) {
    // sum_k (-x^2/4)^k Gamma(n/2) / (k! Gamma(k + n/2))
    double term = 1.0, sum = 1.0;
    const double q = -0.25 * x * x;
    for (int k = 1; k < 40; ++k) {
      term *= q / (k * (k + nu));
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  return std::tgamma(0.5 * n) * std::pow(2.0 / x, nu) * specfun::bessel_j(nu, x);
}

double spherical_function(const Geometry& g, const SpectralPoint& p, double t) {
  require_point(g, p);
  if (g.kind == GeometryKind::Heisenberg) return spherical_function(g, p, t, 0.0);
  if (!(t >= 0.0) || t > g.radial_max()) throw Error(ErrorKind::DomainError, "radial coordinate outside the domain");
  if (t == 0.0) return 1.0;
  switch (g.kind) {
    case GeometryKind::Euclidean: return euclid_kernel(g.n, std::get<EuclidPoint>(p).lambda * t);
    case GeometryKind::Hyperbolic: return hyperbolic_phi(g.n, p, t);
    case GeometryKind::Sphere:
      return specfun::sphere_poly(std::get<SpherePoint>(p).l, g.n, std::clamp(std::cos(t), -1.0, 1.0));
    case GeometryKind::Heisenberg: break;
  }
  return 0.0;
}

double spherical_function(const Geometry& g, const SpectralPoint& p, double t, double s) {
  if (g.kind != GeometryKind::Heisenberg) {
    if (s != 0.0) throw Error(ErrorKind::InvalidInput, "one-variable geometry");
    return spherical_function(g, p, t);
  }
  require_point(g, p);
  if (!(s >= 0.0)) throw Error(ErrorKind::DomainError, "need s >= 0");
  if (const auto* a = std::get_if<HeisA>(&p)) return std::cos(a->lambda * t) * heis_a_kernel(g.n, *a, s);
  return euclid_kernel(2 * g.n, std::get<HeisB>(p).tau * s);
}

std::vector<double> heisenberg_components(const Geometry& g, const profile::HeisGaussLaguerre& h,
                                          const SpectralPoint& p, Method method) {
  require_point(g, p);
  if (g.kind != GeometryKind::Heisenberg || h.n != g.n)
    throw Error(ErrorKind::InvalidInput, "Heisenberg components need a matching Heisenberg geometry");
  return heis_components(g, h, p, method == Method::Quadrature ? Method::Quadrature : Method::Analytic);
}

bool has_analytic_transform(const Geometry& g, const RadialFunction& f) {
  if (g.kind == GeometryKind::Heisenberg) return f.heisenberg_profile() != nullptr;
  return analytic(g, f, trivial_point(g)).has_value();
}

double spherical_transform(const Geometry& g, const RadialFunction& f, const SpectralPoint& p, Method method,
                           double rel_tol) {
  require_point(g, p);
  if (!(f.geometry() == g)) throw Error(ErrorKind::InvalidInput, "function lives on a different geometry");
  if (g.kind == GeometryKind::Heisenberg) {
    const auto* h = f.heisenberg_profile();
    if (!h) throw Error(ErrorKind::InvalidInput, "Heisenberg transform needs a two-variable profile");
    return heis_transform(g, *h, p, method == Method::Quadrature ? Method::Quadrature : Method::Analytic);
  }
  if (method != Method::Quadrature) {
    if (auto v = analytic(g, f, p)) return *v;
    if (method == Method::Analytic) throw Error(ErrorKind::InvalidInput, "no closed-form transform for this profile");
  }
  return quadrature_transform(g, f, p, rel_tol);
}

std::vector<double> transform_on_grid_serial(const Geometry& g, const RadialFunction& f, const SpectralGrid& grid,
                                             Method method) {
  std::vector<double> out(grid.points.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = spherical_transform(g, f, grid.points[i], method);
  return out;
}

std::vector<double> transform_on_grid(const Geometry& g, const RadialFunction& f, const SpectralGrid& grid,
                                      Method method) {
  std::vector<double> out(grid.points.size());
  std::exception_ptr err;
  const long n = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = spherical_transform(g, f, grid.points[i], method);
    } catch (...) {
#pragma omp critical(packlp_grid_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::optional<double> line_transform(const profile::Profile& p, double lambda, bool imaginary) {
  if (const auto* q = std::get_if<profile::GaussLaguerre>(&p)) {
    if (q->alpha != -0.5) return std::nullopt;
    return eigen_transform(*q, 1, lambda, imaginary);
  }
  if (const auto* q = std::get_if<profile::Tents>(&p)) {
    double s = 0.0;
    for (std::size_t k = 0; k < q->widths.size(); ++k) {
      const double w = q->widths[k], x = 0.5 * w * lambda;
      const double f = imaginary ? sinhc(x) : sinc(x);
      s += q->coeffs[k] * w * f * f;
    }
    return s;
  }
  return std::nullopt;
}

double product_formula_residual(int l, double x, double y) {
  if (l < 0 || l > 10 || std::abs(x) > 1.0 || std::abs(y) > 1.0)
    throw Error(ErrorKind::InvalidInput, "product_formula_residual: l <= 10, |x|, |y| <= 1");
  // The trapezoid rule with 64 nodes integrates trigonometric polynomials
  // of degree < 64 in psi exactly.
  const int N = 64;
  const double sx = std::sqrt(1.0 - x * x), sy = std::sqrt(1.0 - y * y);
  double avg = 0.0;
  for (int i = 0; i < N; ++i) {
    const double psi = 2.0 * kPi * i / N;
    avg += specfun::sphere_poly(l, 2, std::clamp(x * y - sx * sy * std::cos(psi), -1.0, 1.0));
  }
  avg /= N;
  return std::abs(avg - specfun::sphere_poly(l, 2, x) * specfun::sphere_poly(l, 2, y));
}

double sampled_sup(const Geometry& g, const SpectralPoint& p, int samples) {
  double m = 0.0;
  const double T = g.kind == GeometryKind::Sphere ? kPi : 10.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = T * i / samples;
    if (g.kind == GeometryKind::Heisenberg) {
      for (int j = 0; j <= 8; ++j) m = std::max(m, std::abs(spherical_function(g, p, t, 5.0 * j / 8)));
    } else {
      m = std::max(m, std::abs(spherical_function(g, p, t)));
    }
  }
  return m;
}

double harmonic_dimension(int n, int l) {
  if (l == 0) return 1.0;
  double binom = 1.0;  // C(l+n-2, l)
  for (int i = 1; i <= l; ++i) binom *= static_cast<double>(n - 2 + i) / i;
  return binom * (2.0 * l + n - 1.0) / (n - 1.0);
}

}  // namespace packlp::spectra
