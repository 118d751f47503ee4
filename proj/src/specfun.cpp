#include "packlp/specfun.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "packlp/error.hpp"

namespace packlp::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

bool non_positive_integer(Complex v) {
  return v.imag() == 0.0 && v.real() <= 0.0 && v.real() == std::floor(v.real());
}

struct SeriesSum {
  Complex value;
  double abs_sum = 0.0;
  double tail = 0.0;
  bool converged = false;
};

SeriesSum series(Complex a, Complex b, Complex c, double z) {
  SeriesSum s;
  Complex term = 1.0;
  s.value = term;
  s.abs_sum = 1.0;
  int small = 0;
  for (int k = 0; k < 100000; ++k) {
    const double kk = k;
    term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * z;
    s.value += term;
    const double at = std::abs(term);
    s.abs_sum += at;
    if (at == 0.0) {
      s.converged = true;
      s.tail = 0.0;
      return s;
    }
    if (at <= kEps * std::abs(s.value) * 0.25) {
      if (++small >= 3) {
        // Ratio of successive terms bounds the geometric remainder.
        const double ratio = std::abs((a + kk + 1.0) * (b + kk + 1.0) / ((c + kk + 1.0) * (kk + 2.0)) * z);
        s.tail = ratio < 1.0 ? at * ratio / (1.0 - ratio) : at;
        s.converged = ratio < 1.0;
        return s;
      }
    } else {
      small = 0;
    }
  }
  s.tail = std::abs(term);
  return s;
}

// Taylor-series continuation of z(1-z) w'' + [c - (a+b+1) z] w' - ab w = 0
// from z0 (with w, w' given) to z1; z0, z1 both negative, |z1| > |z0|.
void continue_ode(Complex a, Complex b, Complex c, double z0, double z1, Complex& w,
                  Complex& dw, double& err, double& scale, int& steps) {
  const double speed = 1.0 + std::abs(a) + std::abs(b);
  const double frac = std::min(0.5, 2.0 / speed);
  const Complex ab = a * b, apb1 = a + b + 1.0;
  std::vector<Complex> coef(96);
  double z = z0;
  double rel_err = 0.0;
  while (z > z1) {
    double h = -frac * std::abs(z);
    if (z + h < z1) h = z1 - z;
    const double p0 = z * (1.0 - z), p1 = 1.0 - 2.0 * z, p2 = -1.0;
    const Complex q0 = c - apb1 * z, q1 = -apb1;
    // Scaled coefficients W_k = w_k h^k keep the magnitudes bounded for
    // large |z| (h^k alone overflows).
    coef[0] = w;
    coef[1] = dw * h;
    Complex val = coef[0] + coef[1];
    Complex dsum = coef[1];
    double absum = std::abs(coef[0]) + std::abs(coef[1]);
    double last = 0.0;
    int small = 0;
    for (std::size_t k = 0; k + 2 < coef.size(); ++k) {
      const double kd = static_cast<double>(k);
      const Complex num = (p1 * kd * (kd + 1.0) + q0 * (kd + 1.0)) * coef[k + 1] * h +
                          (p2 * kd * (kd - 1.0) + q1 * kd - ab) * coef[k] * (h * h);
      coef[k + 2] = -num / (p0 * (kd + 2.0) * (kd + 1.0));
      const Complex term = coef[k + 2];
      val += term;
      dsum += term * (kd + 2.0);
      const double at = std::abs(term);
      absum += at;
      last = at;
      if (at <= kEps * 0.1 * std::abs(val) || at == 0.0) {
        if (++small >= 3) break;
      } else {
        small = 0;
      }
    }
    const Complex der = dsum / h;
    const double step_scale = std::max(std::abs(val), std::abs(der) * std::abs(z + h) / speed);
    rel_err += (kEps * absum + last * 4.0) / std::max(step_scale, 1e-300);
    w = val;
    dw = der;
    z += h;
    ++steps;
  }
  scale = std::max(std::abs(w), std::abs(dw) * std::abs(z) / speed);
  err = rel_err * scale;
}

}  // namespace

Hyp2F1 gauss_2f1_detail(Complex a, Complex b, Complex c, double z) {
  if (!finite(a) || !finite(b) || !finite(c) || !std::isfinite(z))
    throw Error(ErrorKind::InvalidInput, "gauss_2f1: non-finite argument");
  if (non_positive_integer(c))
    throw Error(ErrorKind::ParameterPole, "gauss_2f1: c is a non-positive integer");
  if (z > 0.0) throw Error(ErrorKind::DomainError, "gauss_2f1: only z <= 0 is supported");

  Hyp2F1 out;
  if (z == 0.0 || a == 0.0 || b == 0.0) {
    out.value = 1.0;
    out.error = 0.0;
    out.scale = 1.0;
    return out;
  }
  const bool polynomial = non_positive_integer(a) || non_positive_integer(b);
  if (polynomial || std::abs(z) <= 0.5) {
    const SeriesSum s = series(a, b, c, z);
    out.value = s.value;
    out.error = 4.0 * kEps * s.abs_sum + s.tail;
    out.scale = std::abs(s.value);
    if (polynomial || (s.converged && out.error <= 1e-13 * std::max(out.scale, 1e-300))) return out;
  }

  // Start point where the series is benign: terms stay O(1).
  const double growth = std::abs(a * b / c) + std::abs(a) + std::abs(b) + 1.0;
  const double z0 = -std::min(0.5, 0.5 / growth);
  if (z >= z0) {
    // Already inside the benign disc; the series above is the answer.
    return out;
  }
  const SeriesSum s0 = series(a, b, c, z0);
  const SeriesSum s1 = series(a + 1.0, b + 1.0, c + 1.0, z0);
  Complex w = s0.value;
  Complex dw = a * b / c * s1.value;
  double err = 0.0, scale = 1.0;
  int steps = 0;
  continue_ode(a, b, c, z0, z, w, dw, err, scale, steps);
  const double start_rel = (4.0 * kEps * s0.abs_sum + s0.tail) / std::max(std::abs(s0.value), 1e-300) +
                           (4.0 * kEps * s1.abs_sum + s1.tail) / std::max(std::abs(s1.value), 1e-300);
  out.value = w;
  out.scale = scale;
  out.error = err + start_rel * scale;
  out.steps = steps;
  return out;
}

Complex gauss_2f1(Complex a, Complex b, Complex c, double z, double rel_tol) {
  const Hyp2F1 r = gauss_2f1_detail(a, b, c, z);
  const double ref = std::max(std::abs(r.value), r.scale);
  if (!(r.error <= rel_tol * ref))
    throw Error(ErrorKind::AccuracyLoss,
                "gauss_2f1: error estimate " + std::to_string(r.error) + " at z=" + std::to_string(z));
  return r.value;
}

double bessel_j(double nu, double x) {
  if (!std::isfinite(nu) || !std::isfinite(x) || nu < 0.0 || x < 0.0)
    throw Error(ErrorKind::InvalidInput, "bessel_j: need finite nu >= 0, x >= 0");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  return boost::math::cyl_bessel_j(nu, x);
}

double laguerre_norm(int m, int alpha, double x) {
  if (m < 0 || alpha < 0) throw Error(ErrorKind::InvalidInput, "laguerre_norm: m, alpha >= 0");
  if (m == 0 || x == 0.0) return 1.0;
  if (m <= 20) {
    // (alpha)! sum_j C(m,j) (-x)^j / (j+alpha)!
    // long double absorbs most of the cancellation of the alternating sum
    long double term = 1.0L, sum = 1.0L;
    for (int j = 0; j < m; ++j) {
      term *= static_cast<long double>(m - j) / (j + 1.0L) * (-x) / (j + 1.0L + alpha);
      sum += term;
    }
    return static_cast<double>(sum);
  }
  double binom = 1.0;
  for (int k = 1; k <= m; ++k) binom *= (k + static_cast<double>(alpha)) / k;
  return laguerre(m, static_cast<double>(alpha), x) / binom;
}

double sphere_poly(int l, int n, double x) {
  if (l < 0 || n < 2) throw Error(ErrorKind::InvalidInput, "sphere_poly: l >= 0, n >= 2");
  if (!(std::abs(x) <= 1.0)) throw Error(ErrorKind::DomainError, "sphere_poly: |x| <= 1");
  const double mu = 0.5 * (n - 1);
  double prev = 1.0;
  if (l == 0) return prev;
  double cur = x;
  for (int k = 1; k < l; ++k) {
    const double next = (2.0 * (k + mu) * x * cur - k * prev) / (2.0 * mu + k);
    prev = cur;
    cur = next;
  }
  return cur;
}

void laguerre_coefficients(int k, double alpha, double* out) {
  // d_j = (-1)^j C(k+alpha, k-j) / j!
  for (int j = 0; j <= k; ++j) {
    double binom = 1.0;  // C(k+alpha, k-j) = prod_{i=1}^{k-j} (j+alpha+i)/i
    for (int i = 1; i <= k - j; ++i) binom *= (j + alpha + i) / i;
    double fact = 1.0;
    for (int i = 2; i <= j; ++i) fact *= i;
    out[j] = ((j % 2) ? -1.0 : 1.0) * binom / fact;
  }
}

double gamma(double x) { return std::tgamma(x); }
double log_gamma(double x) { return std::lgamma(x); }

}  // namespace packlp::specfun
