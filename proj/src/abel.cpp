#include "packlp/abel.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "packlp/error.hpp"
#include "packlp/quadrature.hpp"
#include "packlp/spectra.hpp"

namespace packlp::abel {
namespace {

constexpr double kPi = std::numbers::pi;

// Radius beyond which an envelope A exp(-k s^2) has tail integral below
// rel * A (in the sense of int_S^inf exp(-k s^2) ds).
double gaussian_cut(double rate, double rel) {
  const double target = rel * 2.0 * std::sqrt(rate / kPi);
  if (target >= 1.0) return 0.0;
  return boost::math::erfc_inv(target) / std::sqrt(rate);
}

double upper_limit(const Envelope& e, double floor_rel) {
  if (e.compact) return e.radius;
  return std::max(e.radius, gaussian_cut(e.rate, floor_rel));
}

// (-d/du)^k with G(cosh t) = g(t), jets taken directly at t.
double minus_du_direct(const EvenLineFunction& g, int k, double t) {
  Jet h = g.jet(t, k);
  const Jet sh = sinh(Jet::variable(k, t));
  for (int i = 0; i < k; ++i) h = -h.differentiate() / sh;
  return h.value();
}

// Same, from the Maclaurin series: g is even, so g' and sinh are odd and
// the quotient is computed after removing the common factor t.
double minus_du_series(const EvenLineFunction& g, int k, double t) {
  const std::size_t order = 2 * k + 60;
  Jet h = g.jet(0.0, order);
  const Jet sh = sinh(Jet::variable(order, 0.0)).shift_down();
  for (int i = 0; i < k; ++i) h = -h.differentiate().shift_down() / sh;
  return h.evaluate(t);
}

// Richardson-extrapolated k-th differences of G(u) = g(arccosh u).
double minus_du_fd(const EvenLineFunction& g, int k, double t) {
  const double u0 = std::cosh(t);
  auto G = [&](double u) { return g(std::acosh(std::max(u, 1.0))); };
  const bool central = u0 - 1.0 > 0.05 * k;
  auto diff = [&](double h) {
    double s = 0.0, binom = 1.0;
    const double shift = central ? 0.5 * k : 0.0;
    for (int i = 0; i <= k; ++i) {
      s += ((k - i) % 2 ? -1.0 : 1.0) * binom * G(u0 + (i - shift) * h);
      binom = binom * (k - i) / (i + 1.0);
    }
    return s / std::pow(h, k);
  };
  const double h0 = central ? std::min(0.02, (u0 - 1.0) / k) : 0.02;
  // Central differences have even error expansions, forward ones do not.
  const int p = central ? 2 : 1;
  const int levels = central ? 4 : 6;
  std::vector<double> col;
  for (int level = 0; level < levels; ++level) col.push_back(diff(h0 / std::pow(2.0, level)));
  for (int j = 1; j < levels; ++j) {
    const double fac = std::pow(2.0, p * j);
    for (int i = levels - 1; i >= j; --i) col[i] = (fac * col[i] - col[i - 1]) / (fac - 1.0);
  }
  const double est = std::abs(col[levels - 1] - col[levels - 2]);
  if (!(est <= 1e-6 * std::max(1.0, std::abs(col[levels - 1]))))
    throw Error(ErrorKind::DifferentiationInstability, "finite differences did not settle");
  return ((k % 2) ? -1.0 : 1.0) * col[levels - 1];
}

}  // namespace

double minus_du_power(const EvenLineFunction& g, int k, double t) {
  t = std::abs(t);
  if (k == 0) return g(t);
  if (!g.has_jet()) return minus_du_fd(g, k, t);
  return t >= 0.25 ? minus_du_direct(g, k, t) : minus_du_series(g, k, t);
}

double forward_constant(int n) { return std::pow(2.0 * kPi, 0.5 * (n - 1)) / std::tgamma(0.5 * (n - 1)); }

double forward_value(const RadialFunction& f, double r, double rel_tol) {
  const int n = f.geometry().n;
  if (f.geometry().kind != GeometryKind::Hyperbolic || n < 2)
    throw Error(ErrorKind::InvalidInput, "Abel transform needs a function on H^n, n >= 2");
  r = std::abs(r);
  const Envelope& e = f.envelope();
  const double S = std::max(upper_limit(e, 1e-18), r + 1.0);
  if (e.compact && r >= e.radius) return 0.0;
  const double cr = std::cosh(r);
  auto v_of = [&](double s) { return std::sqrt(std::max(std::cosh(s) - cr, 0.0)); };
  std::vector<double> br;
  const int pieces = 12;
  for (int j = 0; j <= pieces; ++j) br.push_back(v_of(r + (std::min(S, e.compact ? e.radius : S) - r) * j / pieces));
  br.erase(std::unique(br.begin(), br.end()), br.end());
  quad::Tolerance tol;
  tol.rel = rel_tol;
  auto integrand = [&](double v) {
    const double s = std::acosh(cr + v * v);
    return std::pow(v, n - 2) * f(s);
  };
  return 2.0 * forward_constant(n) * quad::checked(quad::integrate_pieces(integrand, br, tol), "Abel transform");
}

EvenLineFunction abel_forward(const RadialFunction& f) {
  const int n = f.geometry().n;
  const Envelope& e = f.envelope();
  EvenLineFunction out;
  out.profile = profile::Custom{[f](double t) { return forward_value(f, t); }, "abel_forward"};
  Envelope le;
  if (e.compact) {
    le.compact = true;
    le.radius = e.radius;
    le.amplitude = INFINITY;
  } else {
    const double tail = std::sqrt(kPi / e.rate) * 0.5;
    le.rate = e.rate;
    le.radius = e.radius;
    le.amplitude = forward_constant(n) * e.amplitude * (n == 2 ? 2.0 * std::sqrt(std::numbers::e) + 1.3 * tail : tail);
  }
  out.envelope = le;
  return out;
}

double inverse_value(const EvenLineFunction& g, int n, double r) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "inverse Abel transform needs n >= 2");
  r = std::abs(r);
  if (n % 2 == 1) {
    const int k = (n - 1) / 2;
    return std::pow(2.0 * kPi, -0.5 * (n - 1)) * minus_du_power(g, k, r);
  }
  const int k = n / 2;
  const double C = 1.0 / (std::pow(2.0, 0.5 * (n - 1)) * std::pow(kPi, 0.5 * n));
  const Envelope& e = g.envelope;
  double S = e.compact ? e.radius : std::max(r + 5.0 / std::sqrt(e.rate), upper_limit(e, 1e-20));
  if (S <= r) return 0.0;
  const double cr = std::cosh(r);
  std::vector<double> br;
  const int pieces = 16;
  for (int j = 0; j <= pieces; ++j) br.push_back(std::sqrt(std::max(std::cosh(r + (S - r) * j / pieces) - cr, 0.0)));
  br.erase(std::unique(br.begin(), br.end()), br.end());
  quad::Tolerance tol;
  tol.rel = 1e-11;
  auto integrand = [&](double v) { return minus_du_power(g, k, std::acosh(cr + v * v)); };
  return 2.0 * C * quad::checked(quad::integrate_pieces(integrand, br, tol), "inverse Abel transform");
}

RadialFunction abel_inverse(std::shared_ptr<const EvenLineFunction> g, int n) {
  profile::AbelPullback p{n, std::move(g)};
  return RadialFunction(Geometry::hyperbolic(n), profile::Profile(p));
}

RadialFunction abel_inverse_odd(std::shared_ptr<const EvenLineFunction> g, int n) {
  if (n % 2 == 0) throw Error(ErrorKind::InvalidInput, "abel_inverse_odd: n must be odd");
  return abel_inverse(std::move(g), n);
}

RadialFunction abel_inverse_even(std::shared_ptr<const EvenLineFunction> g, int n) {
  if (n % 2 == 1) throw Error(ErrorKind::InvalidInput, "abel_inverse_even: n must be even");
  return abel_inverse(std::move(g), n);
}

double cosine_transform_quadrature(const EvenLineFunction& g, double lambda, double rel_tol) {
  const Envelope& e = g.envelope;
  const double T = e.compact ? e.radius : upper_limit(e, 1e-18);
  std::vector<double> br{0.0};
  const double lam = std::abs(lambda);
  const int pieces = std::clamp(static_cast<int>(lam * T / kPi) + 1, 8, 4000);
  for (int j = 1; j <= pieces; ++j) br.push_back(T * j / pieces);
  if (const auto* tents = std::get_if<profile::Tents>(&g.profile)) {
    for (double w : tents->widths) br.push_back(w);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
  }
  quad::Tolerance tol;
  tol.rel = rel_tol;
  tol.max_intervals = 40000;
  return 2.0 * quad::checked(quad::integrate_pieces([&](double t) { return g(t) * std::cos(lam * t); }, br, tol),
                             "cosine transform");
}

double factorization_residual(const RadialFunction& f, double lambda) {
  const double lhs =
      spectra::spherical_transform(f.geometry(), f, spectra::HypReal{std::abs(lambda)}, spectra::Method::Quadrature);
  const EvenLineFunction af = abel_forward(f);
  const double rhs = cosine_transform_quadrature(af, lambda, 1e-10);
  return std::abs(lhs - rhs);
}

std::vector<double> factorization_residuals(const RadialFunction& f, const std::vector<double>& lambdas) {
  const EvenLineFunction af = abel_forward(f);
  const Envelope& e = af.envelope;
  const double T = e.compact ? e.radius : upper_limit(e, 1e-18);
  double lam_max = 0.0;
  for (double l : lambdas) lam_max = std::max(lam_max, std::abs(l));
  const int panels = std::clamp(static_cast<int>(std::ceil(std::max(2.0 * T, lam_max * T))), 8, 20000);
  std::vector<double> x, w;
  quad::gauss_legendre(12, x, w);
  const std::size_t m = x.size();
  const double h = T / panels;
  std::vector<double> t, wt, g;
  // Panels are added outward until two in a row are negligible.
  double peak = 0.0;
  int quiet = 0;
  for (int p = 0; p < panels && quiet < 2; ++p) {
    std::vector<double> vals(m);
#pragma omp parallel for
    for (std::size_t i = 0; i < m; ++i) vals[i] = af(h * (p + 0.5 * (x[i] + 1.0)));
    double big = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      t.push_back(h * (p + 0.5 * (x[i] + 1.0)));
      wt.push_back(0.5 * h * w[i]);
      g.push_back(vals[i]);
      big = std::max(big, std::abs(vals[i]));
    }
    peak = std::max(peak, big);
    quiet = big <= 1e-18 * peak ? quiet + 1 : 0;
  }
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const double lhs =
        spectra::spherical_transform(f.geometry(), f, spectra::HypReal{std::abs(lambda)}, spectra::Method::Quadrature);
    double rhs = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) rhs += wt[k] * g[k] * std::cos(lambda * t[k]);
    out.push_back(std::abs(lhs - 2.0 * rhs));
  }
  return out;
}

}  // namespace packlp::abel
