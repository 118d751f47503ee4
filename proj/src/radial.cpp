#include "packlp/radial.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "packlp/abel.hpp"
#include "packlp/error.hpp"
#include "packlp/specfun.hpp"

namespace packlp {
namespace profile {
namespace {

constexpr double kPi = std::numbers::pi;

template <class T>
T gauss_laguerre_value(const GaussLaguerre& p, const T& t) {
  using std::exp;
  const T u = t / p.scale;
  const T x = (2.0 * kPi) * (u * u);
  // Accumulate sum_k c_k L_k(x) along the three-term recurrence.
  T prev = x * 0.0 + 1.0;
  T sum = prev * (p.coeffs.empty() ? 0.0 : p.coeffs[0]);
  if (p.coeffs.size() > 1) {
    T cur = (1.0 + p.alpha) - x;
    sum += cur * p.coeffs[1];
    for (std::size_t j = 1; j + 1 < p.coeffs.size(); ++j) {
      const double jd = static_cast<double>(j);
      T next = ((2.0 * jd + 1.0 + p.alpha - x) * cur - (jd + p.alpha) * prev) / (jd + 1.0);
      prev = std::move(cur);
      cur = std::move(next);
      sum += cur * p.coeffs[j + 1];
    }
  }
  return exp(x * -0.5) * sum;
}

double zonal_value(const Zonal& p, double t) {
  const double x = std::clamp(std::cos(t), -1.0, 1.0);
  const double mu = 0.5 * (p.n - 1);
  double prev = 1.0, cur = x;
  double sum = p.coeffs.empty() ? 0.0 : p.coeffs[0];
  if (p.coeffs.size() > 1) sum += p.coeffs[1] * cur;
  for (std::size_t k = 1; k + 1 < p.coeffs.size(); ++k) {
    const double kd = static_cast<double>(k);
    const double next = (2.0 * (kd + mu) * x * cur - kd * prev) / (2.0 * mu + kd);
    prev = cur;
    cur = next;
    sum += p.coeffs[k + 1] * cur;
  }
  return sum;
}

// sum_j |P_j| max_x x^j e^{-x/4} with max = (4j/e)^j.
double monomial_envelope(const std::vector<double>& P) {
  double a = 0.0;
  for (std::size_t j = 0; j < P.size(); ++j) {
    const double m = j == 0 ? 1.0 : std::pow(4.0 * static_cast<double>(j) / std::numbers::e, static_cast<double>(j));
    a += std::abs(P[j]) * m;
  }
  return a;
}

// Converts |f| <= A exp(-k t^2) into the cosh^{-(n-1)}-weighted form.
Envelope hyperbolic_form(const Geometry& g, Envelope e) {
  if (g.kind != GeometryKind::Hyperbolic || e.compact) return e;
  const double k0 = e.rate;
  e.rate = 0.5 * k0;
  e.amplitude *= std::exp((g.n - 1.0) * (g.n - 1.0) / (2.0 * k0));
  return e;
}

double envelope_factor(const Geometry& g, double t) {
  return g.kind == GeometryKind::Hyperbolic ? std::pow(std::cosh(t), -(g.n - 1.0)) : 1.0;
}

}  // namespace

std::vector<double> monomial_coefficients(const GaussLaguerre& p) {
  std::vector<double> P(p.coeffs.size(), 0.0);
  std::vector<double> d(p.coeffs.size() + 1);
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    if (p.coeffs[k] == 0.0) continue;
    specfun::laguerre_coefficients(static_cast<int>(k), p.alpha, d.data());
    for (std::size_t j = 0; j <= k; ++j) P[j] += p.coeffs[k] * d[j];
  }
  return P;
}

GaussLaguerre gauss_laguerre_unit(double scale, double alpha, int k) {
  GaussLaguerre p{scale, alpha, std::vector<double>(k + 1, 0.0)};
  p.coeffs[k] = 1.0;
  return p;
}

double evaluate(const Profile& p, double t) {
  t = std::abs(t);
  return std::visit(
      [t](const auto& q) -> double {
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<Q, GaussLaguerre>) {
          return gauss_laguerre_value(q, t);
        } else if constexpr (std::is_same_v<Q, Tents>) {
          double s = 0.0;
          for (std::size_t k = 0; k < q.widths.size(); ++k)
            if (t < q.widths[k]) s += q.coeffs[k] * (1.0 - t / q.widths[k]);
          return s;
        } else if constexpr (std::is_same_v<Q, Zonal>) {
          return zonal_value(q, t);
        } else if constexpr (std::is_same_v<Q, ExpCosh>) {
          return q.amplitude * std::exp(-q.a * std::cosh(t));
        } else if constexpr (std::is_same_v<Q, AbelPullback>) {
          return abel::inverse_value(*q.line, q.n, t);
        } else {
          return q.fn(t);
        }
      },
      p);
}

bool supports_jet(const Profile& p) {
  return std::holds_alternative<GaussLaguerre>(p) || std::holds_alternative<ExpCosh>(p);
}

Jet evaluate_jet(const Profile& p, const Jet& t) {
  if (const auto* g = std::get_if<GaussLaguerre>(&p)) return gauss_laguerre_value(*g, t);
  if (const auto* e = std::get_if<ExpCosh>(&p)) return exp(cosh(t) * -e->a) * e->amplitude;
  throw Error(ErrorKind::DifferentiationInstability, "profile has no analytic jet");
}

double LineFunction::operator()(double t) const { return evaluate(profile, t); }

Jet LineFunction::jet(double t0, std::size_t order) const {
  return evaluate_jet(profile, Jet::variable(order, t0));
}

bool LineFunction::has_jet() const { return supports_jet(profile); }

LineFunction make_line(Profile p) {
  LineFunction l;
  l.envelope = derive_envelope(Geometry::euclidean(1), p);
  l.profile = std::move(p);
  return l;
}

Envelope derive_envelope(const Geometry& g, const Profile& p) {
  Envelope e;
  if (const auto* q = std::get_if<GaussLaguerre>(&p)) {
    e.amplitude = monomial_envelope(monomial_coefficients(*q));
    e.rate = kPi / (2.0 * q->scale * q->scale);
    return hyperbolic_form(g, e);
  }
  if (const auto* q = std::get_if<Tents>(&p)) {
    e.compact = true;
    e.radius = q->widths.empty() ? 0.0 : *std::max_element(q->widths.begin(), q->widths.end());
    for (double c : q->coeffs) e.amplitude += std::abs(c);
    return e;
  }
  if (const auto* q = std::get_if<Zonal>(&p)) {
    e.compact = true;
    e.radius = std::numbers::pi;
    for (double c : q->coeffs) e.amplitude += std::abs(c);
    return e;
  }
  if (const auto* q = std::get_if<ExpCosh>(&p)) {
    e.amplitude = std::abs(q->amplitude) * std::exp(-q->a);
    e.rate = 0.5 * q->a;
    return hyperbolic_form(g, e);
  }
  if (const auto* q = std::get_if<AbelPullback>(&p)) {
    // The inverse Abel transform inherits the Gaussian decay of the line
    // profile up to polynomial and 1/sinh factors; take half the rate and
    // fix the amplitude from a dense sample with a safety factor.
    const Envelope& le = q->line->envelope;
    if (le.compact) throw Error(ErrorKind::InvalidInput, "Abel pullback needs a decaying line profile");
    e.rate = 0.5 * le.rate;
    const double T = std::sqrt((std::log(std::max(le.amplitude, 1.0)) + 700.0) / le.rate);
    double m = 0.0;
    for (int i = 0; i <= 600; ++i) {
      const double t = T * i / 600.0;
      const double v = std::abs(evaluate(p, t)) / envelope_factor(Geometry::hyperbolic(q->n), t) *
                       std::exp(e.rate * t * t);
      if (std::isfinite(v)) m = std::max(m, v);
    }
    e.amplitude = 4.0 * m;
    return e;
  }
  throw Error(ErrorKind::InvalidInput, "custom profiles need an explicit envelope");
}

double heis_u(const HeisGaussLaguerre& p, int j, double t) {
  const double x = 2.0 * kPi * (t / p.scale_t) * (t / p.scale_t);
  return std::exp(-0.5 * x) * specfun::laguerre(j, -0.5, x);
}

double heis_v(const HeisGaussLaguerre& p, int k, double s) {
  const double x = 2.0 * kPi * (s / p.scale_s) * (s / p.scale_s);
  return std::exp(-0.5 * x) * specfun::laguerre(k, p.n - 1.0, x);
}

double evaluate(const HeisGaussLaguerre& p, double t, double s) {
  std::vector<double> v(p.max_k + 1);
  for (int k = 0; k <= p.max_k; ++k) v[k] = heis_v(p, k, s);
  double sum = 0.0;
  for (int j = 0; j <= p.max_j; ++j) {
    double row = 0.0;
    for (int k = 0; k <= p.max_k; ++k) row += p.coeffs[j * (p.max_k + 1) + k] * v[k];
    if (row != 0.0) sum += row * heis_u(p, j, t);
  }
  return sum;
}

}  // namespace profile

namespace {

Envelope heis_envelope(const profile::HeisGaussLaguerre& p) {
  if (p.coeffs.size() != static_cast<std::size_t>((p.max_j + 1) * (p.max_k + 1)))
    throw Error(ErrorKind::InvalidInput, "Heisenberg profile: coefficient count mismatch");
  std::vector<double> d(std::max(p.max_j, p.max_k) + 1);
  auto amp = [&](int deg, double alpha) {
    specfun::laguerre_coefficients(deg, alpha, d.data());
    double a = 0.0;
    for (int i = 0; i <= deg; ++i)
      a += std::abs(d[i]) * (i == 0 ? 1.0 : std::pow(4.0 * i / std::numbers::e, i));
    return a;
  };
  double A = 0.0;
  for (int j = 0; j <= p.max_j; ++j)
    for (int k = 0; k <= p.max_k; ++k) {
      const double c = p.coeffs[j * (p.max_k + 1) + k];
      if (c != 0.0) A += std::abs(c) * amp(j, -0.5) * amp(k, p.n - 1.0);
    }
  Envelope e;
  e.amplitude = A;
  e.rate = std::min(std::numbers::pi / (2.0 * p.scale_t * p.scale_t),
                    std::numbers::pi / (2.0 * p.scale_s * p.scale_s));
  return e;
}

}  // namespace

RadialFunction::RadialFunction(Geometry g, profile::Profile p)
    : geom_(g), rep_(p), env_(profile::derive_envelope(g, p)) {
  if (g.kind == GeometryKind::Heisenberg)
    throw Error(ErrorKind::InvalidInput, "Heisenberg functions need a two-variable profile");
}

RadialFunction::RadialFunction(Geometry g, profile::Profile p, Envelope env)
    : geom_(g), rep_(std::move(p)), env_(env) {}

RadialFunction::RadialFunction(Geometry g, profile::HeisGaussLaguerre p)
    : geom_(g), rep_(p), env_(heis_envelope(p)) {
  if (g.kind != GeometryKind::Heisenberg || g.n != p.n)
    throw Error(ErrorKind::InvalidInput, "two-variable profiles live on the Heisenberg group");
}

double RadialFunction::operator()(double t) const {
  if (const auto* p = std::get_if<profile::Profile>(&rep_)) return profile::evaluate(*p, t);
  return (*this)(t, 0.0);
}

double RadialFunction::operator()(double t, double s) const {
  if (const auto* p = std::get_if<profile::HeisGaussLaguerre>(&rep_))
    return profile::evaluate(*p, t, s);
  if (s != 0.0) throw Error(ErrorKind::InvalidInput, "one-variable radial function");
  return (*this)(t);
}

double RadialFunction::at_identity() const {
  return geom_.kind == GeometryKind::Heisenberg ? (*this)(0.0, 0.0) : (*this)(0.0);
}

std::string RadialFunction::basis_id() const {
  if (std::holds_alternative<profile::HeisGaussLaguerre>(rep_)) return "heis_gauss_laguerre";
  const auto& p = std::get<profile::Profile>(rep_);
  switch (p.index()) {
    case 0: return "gauss_laguerre";
    case 1: return "tents";
    case 2: return "zonal";
    case 3: return "exp_cosh";
    case 4: return "abel_pullback";
    default: return std::get<profile::Custom>(p).label;
  }
}

std::vector<double> RadialFunction::coefficients() const {
  if (const auto* h = std::get_if<profile::HeisGaussLaguerre>(&rep_)) return h->coeffs;
  const auto& p = std::get<profile::Profile>(rep_);
  if (const auto* q = std::get_if<profile::GaussLaguerre>(&p)) return q->coeffs;
  if (const auto* q = std::get_if<profile::Tents>(&p)) return q->coeffs;
  if (const auto* q = std::get_if<profile::Zonal>(&p)) return q->coeffs;
  if (const auto* q = std::get_if<profile::AbelPullback>(&p))
    if (const auto* g = std::get_if<profile::GaussLaguerre>(&q->line->profile)) return g->coeffs;
  return {};
}

const profile::Profile* RadialFunction::line_profile() const {
  return std::get_if<profile::Profile>(&rep_);
}

const profile::HeisGaussLaguerre* RadialFunction::heisenberg_profile() const {
  return std::get_if<profile::HeisGaussLaguerre>(&rep_);
}

RadialFunction RadialFunction::with_geometry(const Geometry& g) const {
  if (!(g == geom_)) throw Error(ErrorKind::InvalidInput, "with_geometry: only the measure may change");
  RadialFunction r = *this;
  r.geom_ = g;
  return r;
}

RadialFunction RadialFunction::scaled(double c) const {
  RadialFunction r = *this;
  r.env_.amplitude *= std::abs(c);
  if (auto* h = std::get_if<profile::HeisGaussLaguerre>(&r.rep_)) {
    for (double& x : h->coeffs) x *= c;
    return r;
  }
  auto& p = std::get<profile::Profile>(r.rep_);
  std::visit(
      [c](auto& q) {
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<Q, profile::GaussLaguerre> || std::is_same_v<Q, profile::Tents> ||
                      std::is_same_v<Q, profile::Zonal>) {
          for (double& x : q.coeffs) x *= c;
        } else if constexpr (std::is_same_v<Q, profile::ExpCosh>) {
          q.amplitude *= c;
        } else if constexpr (std::is_same_v<Q, profile::AbelPullback>) {
          auto line = std::make_shared<profile::LineFunction>(*q.line);
          std::visit(
              [c](auto& g) {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, profile::GaussLaguerre>) {
                  for (double& x : g.coeffs) x *= c;
                } else if constexpr (std::is_same_v<G, profile::ExpCosh>) {
                  g.amplitude *= c;
                } else {
                  throw Error(ErrorKind::InvalidInput, "cannot scale this line profile");
                }
              },
              line->profile);
          line->envelope.amplitude *= std::abs(c);
          q.line = line;
        } else {
          auto fn = q.fn;
          q.fn = [fn, c](double t) { return c * fn(t); };
        }
      },
      p);
  return r;
}

double RadialFunction::tail_mass(double T) const {
  if (env_.compact) return T >= env_.radius ? 0.0 : INFINITY;
  T = std::max(T, env_.radius);
  const double A = env_.amplitude, k = env_.rate;
  const double c = surface_constant(geom_);
  switch (geom_.kind) {
    case GeometryKind::Euclidean: {
      const double a = 0.5 * geom_.n;
      return c * A * boost::math::tgamma(a, k * T * T) / (2.0 * std::pow(k, a));
    }
    case GeometryKind::Hyperbolic:
      // cosh^{-(n-1)} sinh^{n-1} <= 1
      return c * A * 0.5 * std::sqrt(std::numbers::pi / k) * std::erfc(std::sqrt(k) * T);
    case GeometryKind::Sphere:
      return T >= std::numbers::pi ? 0.0 : c * A * (std::numbers::pi - T);
    case GeometryKind::Heisenberg: {
      // polar coordinates in the (t, s) half-plane, s^{2n-1} <= rho^{2n-1}
      const double a = geom_.n + 0.5;
      return c * A * std::numbers::pi * boost::math::tgamma(a, k * T * T) / (2.0 * std::pow(k, a));
    }
  }
  return INFINITY;
}

double RadialFunction::cutoff(double abs_tol) const {
  if (env_.compact) return env_.radius;
  if (geom_.kind == GeometryKind::Sphere) return std::numbers::pi;
  double lo = env_.radius, hi = std::max(1.0, env_.radius * 2.0);
  if (tail_mass(lo) <= abs_tol) return lo;
  while (tail_mass(hi) > abs_tol) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorKind::TailBoundFailure, "envelope does not reach tolerance");
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail_mass(mid) > abs_tol ? lo : hi) = mid;
  }
  return hi;
}

void RadialFunction::validate_envelope() const {
  const double lo = std::max(env_.radius, 1e-3);
  const double hi = std::max(lo * 2.0, env_.compact ? lo * 8.0 : cutoff(1e-280 * std::max(env_.amplitude, 1e-300)));
  for (int i = 0; i < 64; ++i) {
    const double r = lo * std::pow(hi / lo, i / 63.0);
    if (geom_.kind == GeometryKind::Heisenberg) {
      for (int a = 0; a <= 4; ++a) {
        const double th = std::numbers::pi / 2.0 * a / 4.0;
        const double t = r * std::cos(th), s = r * std::sin(th);
        const double bound = env_.compact ? 0.0 : env_.amplitude * std::exp(-env_.rate * r * r);
        const double v = std::abs((*this)(t, s));
        if (!(v <= bound * (1.0 + 1e-9) + 1e-300))
          throw Error(ErrorKind::InvalidInput, "envelope violated at (" + std::to_string(t) + ", " +
                                                   std::to_string(s) + ")");
      }
      continue;
    }
    if (geom_.kind == GeometryKind::Sphere && r > std::numbers::pi) continue;
    double bound = 0.0;
    if (!env_.compact)
      bound = env_.amplitude * profile::envelope_factor(geom_, r) * std::exp(-env_.rate * r * r);
    const double v = std::abs((*this)(r));
    if (!(v <= bound * (1.0 + 1e-9) + 1e-300))
      throw Error(ErrorKind::InvalidInput, "envelope violated at t=" + std::to_string(r));
  }
}

}  // namespace packlp
