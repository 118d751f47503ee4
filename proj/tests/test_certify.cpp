#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "packlp/abel.hpp"
#include "packlp/certify.hpp"
#include "packlp/error.hpp"

using namespace packlp;
using namespace packlp::certify;
using namespace packlp::witness;
using std::numbers::pi;

namespace {

Policy policy_for(const WitnessBasis& b) { return default_policy(b, default_grid_spec(b), default_spatial_spec(b)); }

// Largest real root from the companion matrix eigenvalues.
double largest_real_root(const std::vector<double>& a) {
  const int D = static_cast<int>(a.size()) - 1;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(D, D);
  for (int i = 1; i < D; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < D; ++i) C(i, D - 1) = -a[i] / a[D];
  const Eigen::VectorXcd ev = C.eigenvalues();
  double best = -INFINITY;
  for (int i = 0; i < D; ++i)
    if (std::abs(ev[i].imag()) <= 1e-9 * (1.0 + std::abs(ev[i]))) best = std::max(best, ev[i].real());
  return best;
}

RefineResult certified(const WitnessBasis& b) { return refine_until_certified(b, default_refine_options(b)); }

}  // namespace

TEST_CASE("positive Gaussian fails the spatial condition") {
  const auto b = make_basis(Geometry::euclidean(1), Family::GaussPoly, 0.5, 0);
  const auto c = certify_witness(b.geometry, 0.5, b.combine({1.0}), policy_for(b));
  CHECK_FALSE(c.certified);
  CHECK(c.reason.rfind("W1", 0) == 0);
  CHECK(c.w1.max_value > 0.0);
}

TEST_CASE("negative function fails at the trivial character") {
  const auto b = make_basis(Geometry::euclidean(2), Family::GaussPoly, 0.5, 0);
  const auto c = certify_witness(b.geometry, 0.5, b.combine({-2.0}), policy_for(b));
  CHECK_FALSE(c.certified);
  CHECK(c.reason.rfind("W2: f^(1)", 0) == 0);
  CHECK(c.fhat_one < 0.0);
}

TEST_CASE("triangle certifies with zero extremes") {
  const auto b = make_basis(Geometry::euclidean(1), Family::Hat, 0.5, 4);
  std::vector<double> c(b.size(), 0.0);
  c.back() = 1.0;
  const auto cert = certify_witness(b.geometry, 0.5, b.combine(c), policy_for(b));
  CHECK(cert.certified);
  CHECK(cert.w1.max_value == 0.0);
  CHECK(std::abs(cert.w2.min_value) <= 1e-15);
  CHECK(cert.w2.tail_argument == "nonnegative_tents");
  CHECK(std::abs(cert.bound() - 1.0) <= 1e-12);

  // A narrower tent violates nothing either, a wider one breaks W1.
  const auto wide = make_basis(Geometry::euclidean(1), Family::Hat, 0.6, 4);
  const auto bad = certify_witness(b.geometry, 0.5, wide.combine({0, 0, 0, 1}), policy_for(b));
  CHECK_FALSE(bad.certified);
  CHECK(bad.reason.rfind("W1", 0) == 0);
}

TEST_CASE("refinement loop examples") {
  const auto hat = certified(make_basis(Geometry::euclidean(1), Family::Hat, 0.5, 8));
  CHECK(hat.rounds == 1);
  CHECK(std::abs(hat.bound - 1.0) <= 1e-9);

  const auto s2 = make_basis(Geometry::sphere(2), Family::SphereHarmonic, pi / 6, 10);
  auto coarse = default_refine_options(s2);
  coarse.spatial.spacing = 0.2;
  const auto res = refine_until_certified(s2, coarse);
  CHECK(res.rounds <= 3);
  CHECK(res.certificate.certified);

  const auto tiny = make_basis(Geometry::euclidean(1), Family::GaussPoly, 0.5, 0);
  try {
    certified(tiny);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExhausted);
    CHECK(std::string(e.what()).find("infeasible") != std::string::npos);
  }
  auto none = default_refine_options(s2);
  none.budget = 0;
  CHECK_THROWS_AS(refine_until_certified(s2, none), Error);
}

TEST_CASE("certificates satisfy their invariants") {
  const std::vector<WitnessBasis> battery = {
      make_basis(Geometry::euclidean(1), Family::GaussPoly, 0.5, 16),
      make_basis(Geometry::euclidean(2), Family::GaussPoly, 0.5, 16),
      make_basis(Geometry::euclidean(3), Family::GaussPoly, 0.5, 16),
      make_basis(Geometry::hyperbolic(3), Family::GaussPoly, 0.5, 16),
      make_basis(Geometry::sphere(2), Family::SphereHarmonic, pi / 6, 10),
      make_basis(Geometry::sphere(3), Family::SphereHarmonic, pi / 8, 8),
      make_basis(Geometry::heisenberg(1), Family::HeisGaussPoly, 0.5, 4),
  };
  for (const auto& b : battery) {
    CAPTURE(b.geometry.label());
    const auto res = certified(b);
    const auto& c = res.certificate;
    REQUIRE(c.certified);
    CHECK(c.w1.max_value <= 0.0);
    CHECK(c.w2.min_value >= -1e-12);
    CHECK(c.fhat_one >= 1e-9);
    CHECK(c.w1.tail_ok);
    CHECK(c.w2.tail_ok);
    CHECK(res.bound > 0.0);
    CHECK(std::abs(res.bound - bound_from_witness(b.geometry, b.r, c.f)) <= 1e-9 * res.bound);

    // Fresh random grid with another seed.
    auto p = default_policy(b, res.final_grids.spectral, res.final_grids.spatial);
    p.seed = 977;
    const auto again = certify_witness(b.geometry, b.r, c.f, p);
    CHECK(again.certified);
    CHECK(again.recheck_max <= 1e-10);

    // Verdict under a 4x finer check.
    p.w1_spacing /= 4.0;
    p.refine_factor *= 4;
    CHECK(certify_witness(b.geometry, b.r, c.f, p).certified);

    // Raising f(e) by a constant multiple of a positive element breaks W1.
    auto coeffs = res.lp.coefficients;
    if (b.family == Family::SphereHarmonic) {
      coeffs[0] += 0.5 * std::abs(coeffs[0]) + 1e-3;
      CHECK_FALSE(certify_witness(b.geometry, b.r, b.combine(coeffs), p).certified);
    }
  }
}

TEST_CASE("tail arguments by geometry") {
  const auto e = certified(make_basis(Geometry::euclidean(2), Family::GaussPoly, 0.5, 12)).certificate;
  CHECK(e.w1.tail_argument == "laguerre_root_bound");
  CHECK(e.w2.tail_argument == "laguerre_root_bound");
  const auto h = certified(make_basis(Geometry::hyperbolic(3), Family::GaussPoly, 0.5, 12)).certificate;
  CHECK(h.w1.tail_argument == "abel3_root_bound");
  CHECK(h.w2.has_imag);
  CHECK(h.w2.imag_min > 0.0);
  CHECK(h.w2.tail_argument == "laguerre_root_bound+imaginary_sampled");
  const auto z = certified(make_basis(Geometry::sphere(2), Family::SphereHarmonic, pi / 6, 6)).certificate;
  CHECK(z.w1.tail_argument == "compact_domain");
  CHECK(z.w2.tail_argument == "finite_expansion");
}

TEST_CASE("hyperbolic witnesses push forward to line witnesses") {
  for (int n : {2, 3}) {
    CAPTURE(n);
    const auto res = certified(make_basis(Geometry::hyperbolic(n), Family::GaussPoly, 0.5, 8));
    const auto rep = witness_pushforward(res.certificate);
    CHECK(rep.passed);
    CHECK(rep.w1_max <= 1e-10);
    CHECK(rep.w2_min >= -1e-10);
    CHECK(std::abs(rep.g_zero - abel::forward_value(res.certificate.f, 0.0)) <= 1e-8 * std::abs(rep.g_zero));
    // The line witness bounds the density of the real line, which is 1.
    CHECK(rep.line_bound >= 1.0 - 1e-6);
    CHECK(std::isfinite(rep.line_bound));

    auto zero = res.certificate;
    zero.f = make_basis(zero.geometry, Family::GaussPoly, 0.5, 8)
                 .combine(std::vector<double>(res.lp.coefficients.size(), 0.0));
    CHECK_FALSE(witness_pushforward(zero).passed);
  }
  const auto e = certified(make_basis(Geometry::euclidean(1), Family::Hat, 0.5, 4));
  CHECK_THROWS_AS(witness_pushforward(e.certificate), Error);
}

TEST_CASE("positive root bound") {
  CHECK(positive_root_bound({5.0}) == 0.0);
  CHECK(positive_root_bound({-3.0, 1.0}) >= 3.0);
  // (x - 1)(x - 3)(x + 2) = x^3 - 2x^2 - 5x + 6
  CHECK(positive_root_bound({6.0, -5.0, -2.0, 1.0}) >= 3.0);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    const int D = 1 + trial % 9;
    std::vector<double> a(D + 1);
    for (double& x : a) x = nd(rng) * std::pow(10.0, nd(rng));
    const double root = largest_real_root(a);
    if (std::isfinite(root)) CHECK(positive_root_bound(a) >= root * (1 - 1e-9));
  }
}

TEST_CASE("parallel evaluation matches the serial reference") {
  const auto b = make_basis(Geometry::hyperbolic(3), Family::GaussPoly, 0.5, 12);
  std::vector<double> c(b.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::cos(1.0 + k);
  const auto f = b.combine(c);
  std::vector<double> ts;
  for (int i = 0; i < 500; ++i) ts.push_back(0.01 * i);
  CHECK(evaluate_on_grid(f, ts) == evaluate_on_grid_serial(f, ts));

  const auto hb = make_basis(Geometry::heisenberg(1), Family::HeisGaussPoly, 0.5, 4);
  std::vector<double> hc(hb.size());
  for (std::size_t k = 0; k < hc.size(); ++k) hc[k] = std::sin(1.0 + k);
  const auto h = hb.combine(hc);
  std::vector<double> pts;
  for (int i = 0; i < 200; ++i) {
    pts.push_back(0.02 * i);
    pts.push_back(0.01 * (200 - i));
  }
  const auto v = evaluate_on_grid(h, pts);
  CHECK(v == evaluate_on_grid_serial(h, pts));
  CHECK(v[3] == h(pts[6], pts[7]));
}

TEST_CASE("invalid certification requests") {
  const auto b = make_basis(Geometry::euclidean(1), Family::GaussPoly, 0.5, 4);
  const auto f = b.combine(std::vector<double>(b.size(), 1.0));
  auto p = policy_for(b);
  CHECK_THROWS_AS(certify_witness(Geometry::euclidean(2), 0.5, f, p), Error);
  CHECK_THROWS_AS(certify_witness(b.geometry, 0.0, f, p), Error);
  p.w1_spacing = 0.0;
  CHECK_THROWS_AS(certify_witness(b.geometry, 0.5, f, p), Error);
}
