#include "packlp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "packlp/error.hpp"

namespace packlp::quad {
namespace {

// Kronrod 15-point abscissae (positive half, descending) and weights; the odd
// indices 1,3,5 together with the centre are the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b;
  std::vector<double> value, error, l1;
  double score;  // worst error / allowed ratio
};

void kronrod(const VectorFn& f, std::size_t dim, double a, double b, Interval& out) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  out.a = a;
  out.b = b;
  out.value.assign(dim, 0.0);
  out.error.assign(dim, 0.0);
  out.l1.assign(dim, 0.0);
  std::vector<double> gauss(dim, 0.0);
  std::vector<double> fc(dim), f1(dim), f2(dim);
  f(c, fc);
  for (std::size_t i = 0; i < dim; ++i) {
    out.value[i] = kWgk[7] * fc[i];
    gauss[i] = kWg[3] * fc[i];
    out.l1[i] = kWgk[7] * std::abs(fc[i]);
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    f(c - dx, f1);
    f(c + dx, f2);
    for (std::size_t i = 0; i < dim; ++i) {
      const double s = f1[i] + f2[i];
      out.value[i] += kWgk[j] * s;
      out.l1[i] += kWgk[j] * (std::abs(f1[i]) + std::abs(f2[i]));
      if (j % 2 == 1) gauss[i] += kWg[j / 2] * s;
    }
  }
  const double ah = std::abs(h);
  for (std::size_t i = 0; i < dim; ++i) {
    out.value[i] *= h;
    out.l1[i] *= ah;
    const double e = std::abs(out.value[i] - gauss[i] * h);
    // QUADPACK-style sharpening of the raw Gauss/Kronrod difference.
    out.error[i] = e;
    if (e > 0.0 && out.l1[i] > 0.0)
      out.error[i] = std::max(out.l1[i] * std::min(1.0, std::pow(200.0 * e / out.l1[i], 1.5)),
                              50.0 * 2.2e-16 * out.l1[i]);
    if (!std::isfinite(out.value[i])) out.error[i] = INFINITY;
  }
}

double allowed(const Tolerance& tol, double l1) { return std::max(tol.abs, tol.rel * l1); }

VectorResult run(const VectorFn& f, std::size_t dim, std::span<const double> bp,
                 const Tolerance& tol) {
  VectorResult res;
  res.value.assign(dim, 0.0);
  res.error.assign(dim, 0.0);
  res.l1.assign(dim, 0.0);
  if (bp.size() < 2) {
    res.converged = true;
    return res;
  }
  auto cmp = [](const Interval& x, const Interval& y) { return x.score < y.score; };
  std::vector<Interval> heap;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    if (bp[k + 1] == bp[k]) continue;
    Interval iv;
    kronrod(f, dim, bp[k], bp[k + 1], iv);
    heap.push_back(std::move(iv));
  }
  auto totals = [&](std::vector<double>& v, std::vector<double>& e, std::vector<double>& l) {
    std::fill(v.begin(), v.end(), 0.0);
    std::fill(e.begin(), e.end(), 0.0);
    std::fill(l.begin(), l.end(), 0.0);
    for (const auto& iv : heap)
      for (std::size_t i = 0; i < dim; ++i) {
        v[i] += iv.value[i];
        e[i] += iv.error[i];
        l[i] += iv.l1[i];
      }
  };
  auto rescore = [&](const std::vector<double>& l) {
    for (auto& iv : heap) {
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) s = std::max(s, iv.error[i] / allowed(tol, l[i]));
      iv.score = s;
    }
    std::make_heap(heap.begin(), heap.end(), cmp);
  };
  totals(res.value, res.error, res.l1);
  rescore(res.l1);
  int n_intervals = static_cast<int>(heap.size());
  int since_rescore = 0;
  for (;;) {
    bool ok = true;
    for (std::size_t i = 0; i < dim; ++i)
      if (!(res.error[i] <= allowed(tol, res.l1[i]))) ok = false;
    if (ok) {
      res.converged = true;
      break;
    }
    if (n_intervals >= tol.max_intervals) break;
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Interval worst = std::move(heap.back());
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
      heap.push_back(std::move(worst));
      break;
    }
    Interval left, right;
    kronrod(f, dim, worst.a, mid, left);
    kronrod(f, dim, mid, worst.b, right);
    for (std::size_t i = 0; i < dim; ++i) {
      res.value[i] += left.value[i] + right.value[i] - worst.value[i];
      res.error[i] += left.error[i] + right.error[i] - worst.error[i];
      res.l1[i] += left.l1[i] + right.l1[i] - worst.l1[i];
    }
    for (Interval* iv : {&left, &right}) {
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) s = std::max(s, iv->error[i] / allowed(tol, res.l1[i]));
      iv->score = s;
      heap.push_back(std::move(*iv));
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
    ++n_intervals;
    if (++since_rescore == 64) {
      // Running sums drift; recompute them exactly now and then.
      totals(res.value, res.error, res.l1);
      rescore(res.l1);
      since_rescore = 0;
    }
  }
  totals(res.value, res.error, res.l1);
  res.intervals = n_intervals;
  if (!res.converged) {
    bool ok = true;
    for (std::size_t i = 0; i < dim; ++i)
      if (!(res.error[i] <= allowed(tol, res.l1[i]))) ok = false;
    res.converged = ok;
  }
  return res;
}

}  // namespace

VectorResult integrate(const VectorFn& f, std::size_t dim, double a, double b,
                       const Tolerance& tol) {
  const double bp[2] = {a, b};
  return run(f, dim, bp, tol);
}

VectorResult integrate_pieces(const VectorFn& f, std::size_t dim,
                              std::span<const double> breakpoints, const Tolerance& tol) {
  return run(f, dim, breakpoints, tol);
}

Result integrate(const ScalarFn& f, double a, double b, const Tolerance& tol) {
  const double bp[2] = {a, b};
  return integrate_pieces(f, bp, tol);
}

Result integrate_pieces(const ScalarFn& f, std::span<const double> breakpoints,
                        const Tolerance& tol) {
  auto vr = run([&](double x, std::span<double> out) { out[0] = f(x); }, 1, breakpoints, tol);
  Result r;
  r.value = vr.value[0];
  r.error = vr.error[0];
  r.l1 = vr.l1[0];
  r.intervals = vr.intervals;
  r.converged = vr.converged;
  return r;
}

double checked(const Result& r, const char* what) {
  if (!r.converged)
    throw Error(ErrorKind::IntegrationFailure,
                std::string(what) + ": estimated error " + std::to_string(r.error) +
                    " exceeds tolerance");
  return r.value;
}

void checked(const VectorResult& r, const char* what) {
  if (!r.converged) {
    double worst = 0.0;
    for (double e : r.error) worst = std::max(worst, e);
    throw Error(ErrorKind::IntegrationFailure,
                std::string(what) + ": estimated error " + std::to_string(worst) +
                    " exceeds tolerance");
  }
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace packlp::quad
