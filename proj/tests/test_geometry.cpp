#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "packlp/error.hpp"
#include "packlp/geometry.hpp"
#include "packlp/radial.hpp"

using namespace packlp;
constexpr double kPi = std::numbers::pi;

namespace {

double beta(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

// Volume of {t^2 + s^4 <= 1} in R x C^n via the inner t-integral
// 2 sqrt(1 - s^4) and a Beta integral in s^4.
double ck_unit_ball_oracle(int n) {
  const double surface = 2.0 * std::pow(kPi, n) / std::tgamma(n);
  return surface * 0.5 * beta(0.5 * n, 1.5);
}

RadialFunction gaussian(Geometry g, double scale = 1.0) {
  return RadialFunction(g, profile::GaussLaguerre{scale, 0.5 * g.n - 1.0, {1.0}});
}

}  // namespace

TEST_CASE("radial_density examples") {
  CHECK(radial_density(Geometry::euclidean(1), 0.3) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(radial_density(Geometry::euclidean(1), 7.0) == doctest::Approx(2.0).epsilon(1e-15));
  for (double t : {0.1, 1.0, 3.0})
    CHECK(radial_density(Geometry::hyperbolic(2), t) == doctest::Approx(2 * kPi * std::sinh(t)).epsilon(1e-15));
  CHECK(radial_density(Geometry::sphere(2), kPi / 2) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(radial_density(Geometry::heisenberg(1), 0.4, 2.0) == doctest::Approx(2 * kPi * 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(radial_density(Geometry::sphere(2), 4.0), Error);
  CHECK_THROWS_AS(radial_density(Geometry::hyperbolic(3), -1.0), Error);
  for (auto g : {Geometry::euclidean(3), Geometry::hyperbolic(4), Geometry::sphere(3)})
    for (double t : {0.0, 0.5, 2.0}) CHECK(radial_density(g, t) >= 0.0);
}

TEST_CASE("geometry construction") {
  CHECK_THROWS_AS(Geometry::hyperbolic(1), Error);
  CHECK_THROWS_AS(Geometry::sphere(1), Error);
  CHECK_THROWS_AS(Geometry::euclidean(0), Error);
  CHECK_THROWS_AS(Geometry::from_name("torus", 2), Error);
  CHECK(Geometry::from_name("heisenberg", 2).homogeneous_dimension() == 6);
  CHECK(Geometry::hyperbolic(5).rho() == 2.0);
  CHECK(Geometry::sphere(2).label() == "sphere(2)");
}

TEST_CASE("ball_volume closed forms") {
  for (double r : {0.1, 0.5, 2.0}) {
    CHECK(ball_volume(Geometry::euclidean(1), r) == doctest::Approx(2 * r).epsilon(1e-15));
    CHECK(ball_volume(Geometry::euclidean(2), r) == doctest::Approx(kPi * r * r).epsilon(1e-15));
    CHECK(ball_volume(Geometry::hyperbolic(2), r) == doctest::Approx(2 * kPi * (std::cosh(r) - 1)).epsilon(1e-13));
    CHECK(ball_volume(Geometry::hyperbolic(3), r) ==
          doctest::Approx(kPi * (std::sinh(2 * r) - 2 * r)).epsilon(1e-12));
    CHECK(ball_volume(Geometry::sphere(2), r) == doctest::Approx(2 * kPi * (1 - std::cos(r))).epsilon(1e-13));
  }
  CHECK(ball_volume(Geometry::sphere(3), kPi) == doctest::Approx(2 * kPi * kPi).epsilon(1e-12));
  CHECK_THROWS_AS(ball_volume(Geometry::sphere(2), 3.5), Error);
  CHECK_THROWS_AS(ball_volume(Geometry::euclidean(2), 0.0), Error);
}

TEST_CASE("ball_volume equals the integrated density at random radii") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.05, 3.0);
  for (auto g : {Geometry::euclidean(1), Geometry::euclidean(4), Geometry::hyperbolic(2), Geometry::hyperbolic(3),
                 Geometry::hyperbolic(6), Geometry::sphere(2), Geometry::sphere(5)}) {
    for (int i = 0; i < 20; ++i) {
      const double r = U(rng);
      const double ref = oracle::simpson([&](double t) { return radial_density(g, t); }, 0.0, r, 4000);
      CHECK(std::abs(ball_volume(g, r) - ref) <= 1e-10 * ref);
    }
  }
  for (int n = 1; n <= 4; ++n) {
    const auto g = Geometry::heisenberg(n);
    for (int i = 0; i < 20; ++i) {
      const double r = U(rng);
      const double ref = ck_unit_ball_oracle(n) * std::pow(r, 2 * n + 2);
      CHECK(std::abs(ball_volume(g, r) - ref) <= 1e-10 * ref);
    }
  }
}

TEST_CASE("Heisenberg unit ball and dilations") {
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(heisenberg_unit_ball(n) / ck_unit_ball_oracle(n) - 1.0) <= 1e-12);
  const auto g = Geometry::heisenberg(1);
  CHECK(std::abs(ball_volume(g, 2.0) / ball_volume(g, 1.0) - 16.0) <= 1e-12);
  for (int n = 1; n <= 3; ++n)
    for (double r : {0.3, 1.7, 4.0}) {
      const auto h = Geometry::heisenberg(n);
      CHECK(std::abs(ball_volume(h, r) / ball_volume(h, 1.0) / std::pow(r, 2 * n + 2) - 1.0) <= 1e-10);
    }
}

TEST_CASE("Heisenberg unit ball cache under concurrent first use") {
  std::vector<double> out(8);
  std::vector<std::thread> th;
  for (int i = 0; i < 8; ++i) th.emplace_back([&, i] { out[i] = heisenberg_unit_ball(7); });
  for (auto& t : th) t.join();
  for (double v : out) CHECK(v == out[0]);
}

TEST_CASE("trivial_transform examples") {
  RadialFunction zero(Geometry::euclidean(2), profile::GaussLaguerre{1.0, 0.0, {0.0}});
  CHECK(trivial_transform(Geometry::euclidean(2), zero) == 0.0);
  RadialFunction tri(Geometry::euclidean(1), profile::Tents{{1.0}, {1.0}});
  CHECK(std::abs(trivial_transform(Geometry::euclidean(1), tri) - 1.0) <= 1e-12);
  // e^{-t^2} on H^3: 4 pi int e^{-t^2} sinh^2 t dt = pi^{3/2} (e - 1)
  const auto h3 = Geometry::hyperbolic(3);
  RadialFunction g(h3, profile::Custom{[](double t) { return std::exp(-t * t); }}, Envelope{std::exp(0.5), 0.5, 0.0, false});
  const double ref = std::pow(kPi, 1.5) * (std::numbers::e - 1.0);
  CHECK(std::abs(trivial_transform(h3, g) - ref) <= 1e-9 * ref);
  // Euclidean Gaussians e^{-pi (t/s)^2} integrate to s^n
  for (int n = 1; n <= 5; ++n)
    CHECK(std::abs(trivial_transform(Geometry::euclidean(n), gaussian(Geometry::euclidean(n), 1.3)) -
                   std::pow(1.3, n)) <= 1e-10 * std::pow(1.3, n));
}

TEST_CASE("measure scale leaves ball_volume * f(e) / f^(1) unchanged") {
  for (auto g : {Geometry::euclidean(2), Geometry::hyperbolic(3), Geometry::sphere(2)}) {
    RadialFunction f = g.kind == GeometryKind::Sphere
                           ? RadialFunction(g, profile::Zonal{2, {1.0, 0.5, 0.25}})
                           : RadialFunction(g, profile::GaussLaguerre{1.0, 0.5 * g.n - 1.0, {1.0, 0.2}});
    const double base = ball_volume(g, 0.5) * f.at_identity() / trivial_transform(g, f);
    for (double c : {0.1, 3.0, 7.0}) {
      const auto gc = g.with_measure_scale(c);
      CHECK(std::abs(ball_volume(gc, 0.5) / ball_volume(g, 0.5) - c) <= 1e-12 * c);
      CHECK(std::abs(trivial_transform(gc, f) / trivial_transform(g, f) - c) <= 1e-12 * c);
      const double v = ball_volume(gc, 0.5) * f.at_identity() / trivial_transform(gc, f);
      CHECK(std::abs(v - base) <= 1e-10 * std::abs(base));
    }
  }
}

TEST_CASE("envelopes are checked, not assumed") {
  for (auto g : {Geometry::euclidean(3), Geometry::hyperbolic(3), Geometry::hyperbolic(5)}) {
    RadialFunction f(g, profile::GaussLaguerre{0.8, 0.5, {1.0, -2.0, 0.5, 3.0}});
    CHECK_NOTHROW(f.validate_envelope());
  }
  RadialFunction e(Geometry::hyperbolic(4), profile::ExpCosh{2.0, -1.5});
  CHECK_NOTHROW(e.validate_envelope());
  // understated amplitude
  RadialFunction bad(Geometry::euclidean(1), profile::Custom{[](double t) { return std::exp(-t * t); }},
                     Envelope{0.5, 1.0, 0.0, false});
  CHECK_THROWS_AS(bad.validate_envelope(), Error);
  // hyperbolic envelope must carry the cosh^{-(n-1)} factor
  RadialFunction slow(Geometry::hyperbolic(3), profile::Custom{[](double t) { return std::exp(-0.01 * t * t); }},
                      Envelope{1.0, 0.01, 0.0, false});
  CHECK_THROWS_AS(slow.validate_envelope(), Error);
  CHECK_THROWS_AS(RadialFunction(Geometry::euclidean(1), profile::Custom{[](double) { return 0.0; }}), Error);
}

TEST_CASE("tail mass and cutoff") {
  RadialFunction f(Geometry::euclidean(2), profile::GaussLaguerre{1.0, 0.0, {1.0, 0.5}});
  double prev = INFINITY;
  for (double T = 0.5; T < 8.0; T += 0.5) {
    const double m = f.tail_mass(T);
    CHECK(m <= prev);
    prev = m;
    // the bound dominates the actual tail
    const double actual = oracle::simpson([&](double t) { return std::abs(f(t)) * 2 * kPi * t; }, T, 30.0, 20000);
    CHECK(actual <= m * (1 + 1e-9));
  }
  for (double tol : {1e-6, 1e-12, 1e-20}) CHECK(f.tail_mass(f.cutoff(tol)) <= tol);
  RadialFunction tri(Geometry::euclidean(1), profile::Tents{{1.0, 0.5}, {1.0, 1.0}});
  CHECK(tri.cutoff(1e-30) == 1.0);
  CHECK(tri.tail_mass(1.0) == 0.0);
}

TEST_CASE("Gauss-Laguerre jets match finite differences") {
  const profile::Profile p = profile::GaussLaguerre{1.2, -0.5, {1.0, 0.3, -0.2, 0.05}};
  for (double t0 : {0.0, 0.4, 1.7}) {
    const Jet j = profile::evaluate_jet(p, Jet::variable(4, t0));
    CHECK(std::abs(j.value() - profile::evaluate(p, t0)) <= 1e-15);
    const double h = 1e-4;
    auto f = [&](double t) { return profile::evaluate(p, t0 == 0.0 ? t : t); };
    const double d1 = (f(t0 + h) - f(t0 - h)) / (2 * h);
    const double d2 = (f(t0 + h) - 2 * f(t0) + f(t0 - h)) / (h * h);
    CHECK(std::abs(j.derivative(1) - d1) <= 1e-7);
    CHECK(std::abs(j.derivative(2) - d2) <= 1e-5);
  }
}

TEST_CASE("Gauss-Laguerre profile equals its basis expansion") {
  const profile::GaussLaguerre q{0.9, 1.0, {0.4, -1.0, 0.7}};
  for (double t : {0.0, 0.3, 1.1, 2.5}) {
    const double x = 2 * kPi * (t / 0.9) * (t / 0.9);
    const double L1 = 2.0 - x, L2 = 0.5 * (x * x - 6 * x + 6);
    const double ref = std::exp(-0.5 * x) * (0.4 - L1 + 0.7 * L2);
    CHECK(std::abs(profile::evaluate(profile::Profile(q), t) - ref) <= 1e-14);
  }
  const auto P = profile::monomial_coefficients(q);
  for (double x : {0.5, 3.0}) {
    const double poly = P[0] + P[1] * x + P[2] * x * x;
    const double L1 = 2.0 - x, L2 = 0.5 * (x * x - 6 * x + 6);
    CHECK(std::abs(poly - (0.4 - L1 + 0.7 * L2)) <= 1e-13);
  }
}
