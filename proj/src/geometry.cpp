#include "packlp/geometry.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "packlp/error.hpp"
#include "packlp/quadrature.hpp"
#include "packlp/radial.hpp"

namespace packlp {
namespace {

constexpr double kPi = std::numbers::pi;

void check_n(GeometryKind k, int n) {
  const int lo = (k == GeometryKind::Hyperbolic || k == GeometryKind::Sphere) ? 2 : 1;
  if (n < lo) throw Error(ErrorKind::InvalidInput, "dimension too small for this geometry");
}

Geometry make(GeometryKind k, int n) {
  check_n(k, n);
  Geometry g;
  g.kind = k;
  g.n = n;
  return g;
}

double unit_surface(const Geometry& g) {
  if (g.kind == GeometryKind::Heisenberg) return 2.0 * std::pow(kPi, g.n) / std::tgamma(g.n);
  return 2.0 * std::pow(kPi, 0.5 * g.n) / std::tgamma(0.5 * g.n);
}

double heisenberg_unit_ball_uncached(int n) {
  // Outer variable t = sin(theta) over the CK ball {t^2 + s^4 <= 1}; the
  // inner integral runs over 0 <= s <= (1 - t^2)^{1/4}.
  const double c = unit_surface(Geometry::heisenberg(n));
  quad::Tolerance tol;
  tol.rel = 1e-14;
  auto outer = [&](double th) {
    const double ct = std::cos(th);
    const double smax = std::sqrt(std::max(ct, 0.0));
    const double inner = quad::checked(
        quad::integrate([n](double s) { return std::pow(s, 2 * n - 1); }, 0.0, smax, tol), "unit ball");
    return inner * ct;
  };
  return c * quad::checked(quad::integrate(outer, -0.5 * kPi, 0.5 * kPi, tol), "unit ball");
}

// int_0^r of a positive density by adaptive quadrature.
double radial_integral(const Geometry& g, double r) {
  quad::Tolerance tol;
  tol.rel = 1e-14;
  return quad::checked(quad::integrate([&](double t) { return radial_density(g, t); }, 0.0, r, tol),
                       "ball volume");
}

}  // namespace

Geometry Geometry::euclidean(int n) { return make(GeometryKind::Euclidean, n); }
Geometry Geometry::hyperbolic(int n) { return make(GeometryKind::Hyperbolic, n); }
Geometry Geometry::sphere(int n) { return make(GeometryKind::Sphere, n); }
Geometry Geometry::heisenberg(int n) { return make(GeometryKind::Heisenberg, n); }

Geometry Geometry::from_name(const std::string& name, int n) {
  if (name == "euclidean") return euclidean(n);
  if (name == "hyperbolic") return hyperbolic(n);
  if (name == "sphere") return sphere(n);
  if (name == "heisenberg") return heisenberg(n);
  throw Error(ErrorKind::InvalidInput, "unknown geometry '" + name + "'");
}

Geometry Geometry::with_measure_scale(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::InvalidInput, "measure scale must be positive");
  Geometry g = *this;
  g.measure_scale = c;
  return g;
}

double Geometry::radial_max() const { return kind == GeometryKind::Sphere ? kPi : INFINITY; }

std::string Geometry::name() const {
  switch (kind) {
    case GeometryKind::Euclidean: return "euclidean";
    case GeometryKind::Hyperbolic: return "hyperbolic";
    case GeometryKind::Sphere: return "sphere";
    case GeometryKind::Heisenberg: return "heisenberg";
  }
  return "";
}

std::string Geometry::label() const { return name() + "(" + std::to_string(n) + ")"; }

double surface_constant(const Geometry& g) { return g.measure_scale * unit_surface(g); }

double radial_density(const Geometry& g, double t) {
  if (!(t >= 0.0) || t > g.radial_max())
    throw Error(ErrorKind::DomainError, "radial coordinate outside the domain");
  const double c = surface_constant(g);
  switch (g.kind) {
    case GeometryKind::Euclidean: return c * std::pow(t, g.n - 1);
    case GeometryKind::Hyperbolic: return c * std::pow(std::sinh(t), g.n - 1);
    case GeometryKind::Sphere: return c * std::pow(std::sin(t), g.n - 1);
    case GeometryKind::Heisenberg:
      throw Error(ErrorKind::InvalidInput, "Heisenberg density takes (t, s)");
  }
  return 0.0;
}

double radial_density(const Geometry& g, double t, double s) {
  if (g.kind != GeometryKind::Heisenberg) {
    if (s != 0.0) throw Error(ErrorKind::InvalidInput, "one-variable geometry");
    return radial_density(g, t);
  }
  if (!std::isfinite(t) || !(s >= 0.0)) throw Error(ErrorKind::DomainError, "need s >= 0");
  return surface_constant(g) * std::pow(s, 2 * g.n - 1);
}

double heisenberg_unit_ball(int n) {
  static std::mutex mu;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const double v = heisenberg_unit_ball_uncached(n);
  cache.emplace(n, v);
  return v;
}

double ball_volume(const Geometry& g, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::InvalidInput, "radius must be positive");
  switch (g.kind) {
    case GeometryKind::Euclidean:
      return g.measure_scale * std::pow(kPi, 0.5 * g.n) / std::tgamma(0.5 * g.n + 1.0) * std::pow(r, g.n);
    case GeometryKind::Hyperbolic:
      if (g.n == 2) return surface_constant(g) * 2.0 * std::pow(std::sinh(0.5 * r), 2);
      return radial_integral(g, r);
    case GeometryKind::Sphere:
      if (r > kPi) throw Error(ErrorKind::DomainError, "sphere radius exceeds pi");
      if (g.n == 2) return surface_constant(g) * 2.0 * std::pow(std::sin(0.5 * r), 2);
      return radial_integral(g, r);
    case GeometryKind::Heisenberg:
      return g.measure_scale * heisenberg_unit_ball(g.n) * std::pow(r, g.homogeneous_dimension());
  }
  return 0.0;
}

double trivial_transform(const Geometry& g, const RadialFunction& f, double rel_tol) {
  quad::Tolerance tol;
  tol.rel = 0.1 * rel_tol;
  const Envelope& env = f.envelope();
  if (env.amplitude == 0.0) return 0.0;
  if (g.kind == GeometryKind::Heisenberg) {
    const auto* h = f.heisenberg_profile();
    if (!h) throw Error(ErrorKind::InvalidInput, "Heisenberg transform needs a two-variable profile");
    // Separable: sum_{jk} c_jk (int_R u_j dt) (c int_0^inf v_k s^{2n-1} ds).
    const double c = surface_constant(g);
    const double Tt = 12.0 * h->scale_t, Ts = 12.0 * h->scale_s;
    std::vector<double> U(h->max_j + 1), V(h->max_k + 1);
    for (int j = 0; j <= h->max_j; ++j)
      U[j] = 2.0 * quad::checked(quad::integrate([&](double t) { return profile::heis_u(*h, j, t); }, 0.0,
                                                 Tt * std::sqrt(1.0 + j / 4.0), tol),
                                 "trivial transform");
    for (int k = 0; k <= h->max_k; ++k)
      V[k] = c * quad::checked(
                     quad::integrate([&](double s) { return profile::heis_v(*h, k, s) * std::pow(s, 2 * g.n - 1); },
                                     0.0, Ts * std::sqrt(1.0 + (k + g.n) / 4.0), tol),
                     "trivial transform");
    double sum = 0.0;
    for (int j = 0; j <= h->max_j; ++j)
      for (int k = 0; k <= h->max_k; ++k) sum += h->coeffs[j * (h->max_k + 1) + k] * U[j] * V[k];
    return sum;
  }
  const auto integrand = [&](double t) { return f(t) * radial_density(g, t); };
  if (env.compact || g.kind == GeometryKind::Sphere) {
    const double R = g.kind == GeometryKind::Sphere ? kPi : env.radius;
    std::vector<double> br{0.0};
    if (const auto* p = f.line_profile())
      if (const auto* tents = std::get_if<profile::Tents>(p))
        for (double w : tents->widths)
          if (w > 0.0 && w < R) br.push_back(w);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    br.push_back(R);
    return quad::checked(quad::integrate_pieces(integrand, br, tol), "trivial transform");
  }
  // Envelope mass beyond radius sets the scale for the truncation error.
  const double mass = f.tail_mass(env.radius);
  const double T = f.cutoff(1e-3 * rel_tol * mass);
  std::vector<double> br;
  const int pieces = 8;
  for (int i = 0; i <= pieces; ++i) br.push_back(T * i / pieces);
  return quad::checked(quad::integrate_pieces(integrand, br, tol), "trivial transform");
}

}  // namespace packlp
