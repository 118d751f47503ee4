#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "packlp/error.hpp"
#include "packlp/quadrature.hpp"
#include "packlp/specfun.hpp"

using namespace packlp;
using specfun::Complex;

namespace {

struct PhiRef {
  int n;
  double t;
  double lambda;  // imaginary part s when imag is set
  bool imag;
  double value;
  double amplitude;  // max |phi| over one oscillation around t
};

// Jacobi functions phi_lambda(t) on H^n, from a 30-digit evaluation of the
// hypergeometric series.
const PhiRef kPhi[] = {
    {2, 0.5, 0.5, false, 0.969310170276938403, 0.999988},
    {2, 0.5, 5, false, -0.045383123974937786, 0.999369},
    {2, 0.5, 20, false, -0.2408620938747296, 0.293475},
    {2, 0.5, 45, false, -0.158217388756851129, 0.175609},
    {2, 0.5, 0.125, true, 0.985554480347161154, 0.985554},
    {2, 0.5, 0.4995, true, 0.999969085901847031, 0.999969},
    {2, 2, 0.5, false, 0.615055374971018175, 0.999988},
    {2, 2, 5, false, -0.182133802279848543, 0.255143},
    {2, 2, 20, false, 0.00578486726610238558, 0.097402},
    {2, 2, 45, false, 0.0198637160940238505, 0.0631589},
    {2, 2, 0.125, true, 0.807707171984832118, 0.807707},
    {2, 2, 0.4995, true, 0.999566487547964889, 0.999566},
    {2, 4.5, 0.5, false, 0.0659493475352052018, 0.999988},
    {2, 4.5, 5, false, -0.0507896546816833921, 0.0697373},
    {2, 4.5, 20, false, 0.00854352140321140569, 0.0273314},
    {2, 4.5, 45, false, 0.0141158475242329068, 0.0177217},
    {2, 4.5, 0.125, true, 0.423520982458679145, 0.423521},
    {2, 4.5, 0.4995, true, 0.998433692987367488, 0.998434},
    {4, 0.5, 0.5, false, 0.92540403788662221, 0.999969},
    {4, 0.5, 5, false, 0.369661314572961262, 0.999659},
    {4, 0.5, 20, false, 0.00802487180669711349, 0.0616912},
    {4, 0.5, 45, false, 0.00359382864357798284, 0.01528},
    {4, 0.5, 0.375, true, 0.936805702684110109, 0.936806},
    {4, 0.5, 1.4985, true, 0.999862297000392483, 0.999862},
    {4, 2, 0.5, false, 0.324165225514156988, 0.999969},
    {4, 2, 5, false, 0.00272535074378888138, 0.0335107},
    {4, 2, 20, false, 0.00258065052761346256, 0.00330042},
    {4, 2, 45, false, 0.000728317652358420782, 0.000839064},
    {4, 2, 0.375, true, 0.397612748365654709, 0.397613},
    {4, 2, 1.4985, true, 0.99826563155129291, 0.998266},
    {4, 4.5, 0.5, false, 0.0101658374740696973, 0.999969},
    {4, 4.5, 5, false, 0.0000943366643434989882, 0.000738432},
    {4, 4.5, 20, false, 0.0000564038099414463803, 7.23107e-5},
    {4, 4.5, 45, false, 0.000010749004404050253, 1.87937e-5},
    {4, 4.5, 0.375, true, 0.0335399984163849467, 0.03354},
    {4, 4.5, 1.4985, true, 0.994594167596711674, 0.994594},
    {5, 0.5, 0.5, false, 0.900010992083171892, 0.999958},
    {5, 0.5, 5, false, 0.450488472090414466, 0.99971},
    {5, 0.5, 20, false, 0.0214958148583758075, 0.0462953},
    {5, 0.5, 45, false, 0.00463450980594195962, 0.0063712},
    {5, 0.5, 0.5, true, 0.911385407957425794, 0.911385},
    {5, 0.5, 1.998, true, 0.999804719867068634, 0.999805},
    {5, 2, 0.5, false, 0.219935077666352628, 0.999958},
    {5, 2, 5, false, 0.00637010865873696842, 0.0242686},
    {5, 2, 20, false, 0.000401295108462663614, 0.000728036},
    {5, 2, 45, false, 0.0000527591714840295946, 0.00012273},
    {5, 2, 0.5, true, 0.272166166912146145, 0.272166},
    {5, 2, 1.998, true, 0.997602594812609439, 0.997603},
    {5, 4.5, 0.5, false, 0.00258893250840767568, 0.999958},
    {5, 4.5, 5, false, 0.0000442018157022621411, 0.000155391},
    {5, 4.5, 20, false, 1.82033265444364708e-6, 4.51096e-6},
    {5, 4.5, 45, false, -8.06477563807031879e-8, 7.79428e-7},
    {5, 4.5, 0.5, true, 0.0090616714166704958, 0.00906167},
    {5, 4.5, 1.998, true, 0.992693717011422486, 0.992694},
    {7, 0.5, 0.5, false, 0.849040935580756206, 0.999934},
    {7, 0.5, 5, false, 0.530088418577591194, 0.999757},
    {7, 0.5, 20, false, 0.0104517888011059272, 0.038512},
    {7, 0.5, 45, false, 0.000707906505017832655, 0.00165344},
    {7, 0.5, 0.75, true, 0.861539875582183494, 0.86154},
    {7, 0.5, 2.997, true, 0.999687356766182342, 0.999687},
    {7, 2, 0.5, false, 0.0975092903487119632, 0.999934},
    {7, 2, 5, false, 0.00212199826436840915, 0.0167165},
    {7, 2, 20, false, -0.000024732687173730008, 4.49614e-5},
    {7, 2, 45, false, -2.96695205215371442e-6, 3.68827e-6},
    {7, 2, 0.75, true, 0.125847302684151149, 0.125847},
    {7, 2, 2.997, true, 0.996277971925912781, 0.996278},
    {7, 4.5, 0.5, false, 0.000142830212354946965, 0.999934},
    {7, 4.5, 5, false, 1.06110473792979419e-6, 6.99683e-6},
    {7, 4.5, 20, false, -1.67070139455856555e-8, 2.67677e-8},
    {7, 4.5, 45, false, -1.79988467068479429e-9, 2.21936e-9},
    {7, 4.5, 0.75, true, 0.000656222264701108355, 0.000656222},
    {7, 4.5, 2.997, true, 0.988912332116436499, 0.988912},
};

double phi_2f1(int n, double t, double lambda, bool imag, double tol = 1e-10) {
  const double rho = 0.5 * (n - 1);
  const double z = -std::sinh(t) * std::sinh(t);
  if (imag) return specfun::gauss_2f1(0.5 * (rho - lambda), 0.5 * (rho + lambda), 0.5 * n, z, tol).real();
  return specfun::gauss_2f1(Complex(0.5 * rho, 0.5 * lambda), Complex(0.5 * rho, -0.5 * lambda), 0.5 * n, z, tol)
      .real();
}

}  // namespace

TEST_CASE("gauss_2f1 with a vanishing parameter is 1") {
  for (double z : {0.0, -0.3, -7.0, -1e4}) {
    CHECK(specfun::gauss_2f1(Complex(2.5, 1.0), 0.0, 1.5, z) == Complex(1.0, 0.0));
    // trivial character of H^n: (rho, 0; n/2)
    for (int n = 2; n <= 9; ++n) CHECK(specfun::gauss_2f1(0.5 * (n - 1), 0.0, 0.5 * n, z) == Complex(1.0, 0.0));
  }
}

TEST_CASE("gauss_2f1(1,1;2;z) = -log(1-z)/z") {
  for (double z : {-0.01, -0.2, -0.45, -0.9, -3.0, -40.0, -1e3, -1e4}) {
    const double ref = -std::log1p(-z) / z;
    const double v = specfun::gauss_2f1(1.0, 1.0, 2.0, z).real();
    CHECK(std::abs(v - ref) <= 1e-12 * std::abs(ref));
  }
  // power-series oracle inside the unit disc
  for (double z : {-0.1, -0.3, -0.49}) {
    const double ref = oracle::hyp2f1_series(1.0, 1.0, 2.0, z);
    CHECK(std::abs(specfun::gauss_2f1(1.0, 1.0, 2.0, z).real() - ref) <= 1e-14);
  }
}

TEST_CASE("gauss_2f1 errors") {
  CHECK_THROWS_AS(specfun::gauss_2f1(1.0, 1.0, 0.0, -0.5), Error);
  try {
    specfun::gauss_2f1(1.0, 1.0, -3.0, -0.5);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParameterPole);
  }
  try {
    specfun::gauss_2f1(1.0, 1.0, 2.0, 0.5);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainError);
  }
  CHECK_THROWS_AS(specfun::gauss_2f1(NAN, 1.0, 2.0, -0.5), Error);
  // An impossible tolerance surfaces as AccuracyLoss instead of a silent value.
  try {
    specfun::gauss_2f1(Complex(3.0, 40.0), Complex(3.0, -40.0), 3.5, -5e3, 1e-30);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AccuracyLoss);
  }
}

TEST_CASE("gauss_2f1 polynomial cases match the truncated sum") {
  for (int k = 0; k <= 12; ++k)
    for (double z : {-0.3, -2.0, -50.0, -900.0}) {
      const double ref = oracle::hyp2f1_series(-k, 2.5, 1.5, z);
      const double v = specfun::gauss_2f1(-static_cast<double>(k), 2.5, 1.5, z).real();
      CHECK(std::abs(v - ref) <= 1e-12 * std::max(1.0, oracle::hyp2f1_abs_series(-k, 2.5, 1.5, z)));
    }
}

TEST_CASE("Jacobi functions against high-precision references") {
  for (const auto& r : kPhi) {
    CAPTURE(r.n);
    CAPTURE(r.t);
    CAPTURE(r.lambda);
    CAPTURE(r.imag);
    const double v = phi_2f1(r.n, r.t, r.lambda, r.imag);
    // oscillatory regime: error relative to the local amplitude
    CHECK(std::abs(v - r.value) <= 1e-10 * r.amplitude);
  }
}

TEST_CASE("n = 3 closed form on the 50 x 50 grid") {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const double t = 0.1 + 4.9 * i / 49.0, lam = 0.1 + 9.9 * j / 49.0;
      worst = std::max(worst, std::abs(phi_2f1(3, t, lam, false) - oracle::phi_h3(lam, t)));
    }
  CHECK(worst <= 1e-8);
}

TEST_CASE("bessel_j") {
  CHECK(specfun::bessel_j(0.0, 0.0) == 1.0);
  CHECK(specfun::bessel_j(2.0, 0.0) == 0.0);
  for (double x : {0.5, 1.0, 2.0}) {
    const double ref = std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x);
    CHECK(std::abs(specfun::bessel_j(0.5, x) - ref) <= 1e-14);
    CHECK(std::abs(specfun::bessel_j(0.5, x) - oracle::bessel_series(0.5, x)) <= 1e-14);
  }
  // series oracle against the library for moderate arguments
  for (double nu : {0.0, 1.0, 1.5, 3.0, 6.0})
    for (double x : {0.1, 1.0, 4.0, 9.0, 15.0}) CHECK(std::abs(specfun::bessel_j(nu, x) - oracle::bessel_series(nu, x)) <= 1e-12);
  // 30-digit references for large arguments
  struct {
    double nu, x, v;
  } refs[] = {{0, 1, 0.76519768655796655145},  {0, 10, -0.2459357644513483352},  {1, 0.5, 0.24226845767487388638},
              {2.5, 30, 0.14120285879928212036}, {7, 100, 0.070172690987212719921}, {0, 999, 0.017369296355194131847}};
  for (const auto& r : refs) CHECK(std::abs(specfun::bessel_j(r.nu, r.x) - r.v) <= 1e-12);
  // first zero of J_0 by bisection on the implementation
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (specfun::bessel_j(0.0, mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(lo - 2.404825557695773) <= 1e-12);
  CHECK_THROWS_AS(specfun::bessel_j(-1.0, 1.0), Error);
}

TEST_CASE("laguerre_norm") {
  for (double x : {-2.0, 0.0, 0.7, 13.0}) CHECK(specfun::laguerre_norm(0, 3, x) == 1.0);
  for (int n = 1; n <= 6; ++n)
    for (double x : {0.1, 1.0, 5.0}) CHECK(std::abs(specfun::laguerre_norm(1, n - 1, x) - (1.0 - x / n)) <= 1e-15);
  for (int m = 0; m <= 40; ++m)
    for (int a = 0; a <= 5; ++a) CHECK(specfun::laguerre_norm(m, a, 0.0) == 1.0);
  CHECK(specfun::laguerre_norm(5, 2, 0.0) == 1.0);
  for (int m : {2, 5, 11, 20})
    for (int a : {0, 1, 3})
      for (double x : {0.25, 1.5, 6.0}) {
        const double ref = oracle::laguerre_norm_exact(m, a, x);
        CHECK(std::abs(specfun::laguerre_norm(m, a, x) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
      }
  // exact rational evaluation of the finite sum; these degrees take the
  // recurrence branch
  struct {
    int m, a;
    double x, v;
  } exact[] = {
      {21, 0, 0.25, -0.32545525204644826}, {21, 0, 1.5, -0.2264060250578833}, {21, 0, 6.0, -3.2359953833996924},
      {21, 1, 0.25, -0.13370048003021093}, {21, 1, 1.5, -0.0835537461330012}, {21, 1, 6.0, 0.013504320836403527},
      {21, 3, 0.25, 0.19565556125100056},  {21, 3, 1.5, 0.014221884302547692}, {21, 3, 6.0, 0.007482067861899895},
      {25, 0, 0.25, -0.18341797609412203}, {25, 0, 1.5, 0.2511449164603784},  {25, 0, 6.0, 0.4639275155135265},
      {25, 1, 0.25, -0.14977958440885106}, {25, 1, 1.5, -0.0583731077156932}, {25, 1, 6.0, -0.23950547992413765},
      {30, 0, 0.25, 0.00032380659834800054}, {30, 0, 1.5, 0.4560499085754748}, {30, 0, 6.0, 1.9149857851585894},
      {30, 3, 0.25, 0.06466556445382415},  {30, 3, 1.5, -0.005916194508705539}, {30, 3, 6.0, -0.006883200367532956},
      {40, 0, 0.25, 0.26782184873292814},  {40, 0, 1.5, -0.25394689792003455}, {40, 0, 6.0, 0.9913425937670749},
      {40, 1, 6.0, -0.15624638379736555},  {40, 3, 1.5, -0.001849673139906547}, {40, 3, 6.0, 0.0020942737609954826},
  };
  for (const auto& e : exact) CHECK(std::abs(specfun::laguerre_norm(e.m, e.a, e.x) - e.v) <= 1e-13);
}

TEST_CASE("sphere_poly") {
  for (int n = 2; n <= 6; ++n)
    for (int l = 0; l <= 30; ++l) {
      CHECK(std::abs(specfun::sphere_poly(l, n, 1.0) - 1.0) <= 1e-14);
      CHECK(specfun::sphere_poly(0, n, 0.3) == 1.0);
    }
  for (double x : {-1.0, -0.2, 0.5}) CHECK(std::abs(specfun::sphere_poly(1, 2, x) - x) <= 1e-16);
  // Legendre on S^2
  for (double x : {-0.7, 0.1, 0.9}) CHECK(std::abs(specfun::sphere_poly(2, 2, x) - 0.5 * (3 * x * x - 1)) <= 1e-15);
  // Gauss-Legendre orthogonality of P_2 and P_3
  std::vector<double> nodes, weights;
  quad::gauss_legendre(20, nodes, weights);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    s += weights[i] * specfun::sphere_poly(2, 2, nodes[i]) * specfun::sphere_poly(3, 2, nodes[i]);
  CHECK(std::abs(s) <= 1e-12);
  CHECK_THROWS_AS(specfun::sphere_poly(2, 2, 1.5), Error);
}

TEST_CASE("sphere_poly orthogonality with weight (1-x^2)^((n-2)/2)") {
  for (int n = 2; n <= 4; ++n)
    for (int l = 0; l <= 10; ++l)
      for (int m = l + 1; m <= 10; ++m) {
        // x = cos t turns the weight into sin^{n-1} t dt on [0, pi]
        quad::Tolerance tol;
        tol.rel = 1e-13;
        const auto r = quad::integrate(
            [&](double t) {
              return specfun::sphere_poly(l, n, std::cos(t)) * specfun::sphere_poly(m, n, std::cos(t)) *
                     std::pow(std::sin(t), n - 1);
            },
            0.0, std::numbers::pi, tol);
        CHECK(std::abs(r.value) <= 1e-10);
      }
}

TEST_CASE("sphere_poly agrees with the half-angle hypergeometric form") {
  for (int n = 2; n <= 5; ++n)
    for (int l = 0; l <= 8; ++l)
      for (double th : {0.3, 1.1, 2.0, 2.9}) {
        const double s2 = std::pow(std::sin(0.5 * th), 2);
        const double ref = oracle::hyp2f1_series(-l, l + n - 1.0, 0.5 * n, s2);
        CHECK(std::abs(specfun::sphere_poly(l, n, std::cos(th)) - ref) <= 1e-12);
      }
}

TEST_CASE("generic Laguerre recurrence and coefficients") {
  std::vector<double> d(8);
  for (int k = 0; k <= 7; ++k)
    for (double alpha : {-0.5, 0.0, 2.0}) {
      specfun::laguerre_coefficients(k, alpha, d.data());
      for (double x : {0.3, 2.0, 9.0}) {
        double p = 0.0;
        for (int j = k; j >= 0; --j) p = p * x + d[j];
        CHECK(std::abs(specfun::laguerre(k, alpha, x) - p) <= 1e-11 * std::max(1.0, std::abs(p)));
      }
    }
}
