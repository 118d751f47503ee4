#pragma once

// Truncated Taylor series arithmetic.
//
// A Jet holds the coefficients c_0..c_K of f(t0 + e) = sum_k c_k e^k. All
// operations truncate at the order of the shortest operand, so a Jet of order
// K carries the first K+1 derivatives of a function at t0 (scaled by 1/k!).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace packlp {

class Jet {
 public:
  Jet() = default;
  Jet(std::size_t order, double value) : c_(order + 1, 0.0) { c_[0] = value; }

  /// The independent variable t0 + e.
  static Jet variable(std::size_t order, double t0) {
    Jet j(order, t0);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  std::size_t order() const { return c_.empty() ? 0 : c_.size() - 1; }
  std::size_t size() const { return c_.size(); }
  double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
  double& operator[](std::size_t k) { return c_[k]; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  const std::vector<double>& coefficients() const { return c_; }

  /// k-th derivative at the expansion point.
  double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return (*this)[k] * f;
  }

  /// d/de, dropping one order.
  Jet differentiate() const {
    Jet d;
    if (c_.size() <= 1) return Jet(0, 0.0);
    d.c_.resize(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d.c_[k - 1] = static_cast<double>(k) * c_[k];
    return d;
  }

  /// Removes a vanishing leading coefficient: returns g with f(e) = e * g(e).
  Jet shift_down() const {
    Jet d;
    if (c_.size() <= 1) return Jet(0, 0.0);
    d.c_.assign(c_.begin() + 1, c_.end());
    return d;
  }

  Jet truncated(std::size_t order) const {
    Jet d = *this;
    d.c_.resize(std::min(c_.size(), order + 1));
    return d;
  }

  /// Horner evaluation of the truncated series at offset e.
  double evaluate(double e) const {
    double s = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) s = s * e + c_[k];
    return s;
  }

  Jet& operator+=(const Jet& o) {
    trim_to(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    trim_to(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator+=(double a) {
    c_[0] += a;
    return *this;
  }
  Jet& operator-=(double a) {
    c_[0] -= a;
    return *this;
  }
  Jet& operator*=(double a) {
    for (double& x : c_) x *= a;
    return *this;
  }
  Jet& operator/=(double a) {
    for (double& x : c_) x /= a;
    return *this;
  }

  friend Jet operator-(Jet a) {
    for (double& x : a.c_) x = -x;
    return a;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double b, Jet a) { return a += b; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double b, const Jet& a) { return (-a) += b; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double b, Jet a) { return a *= b; }
  friend Jet operator/(Jet a, double b) { return a /= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    Jet r;
    r.c_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; i + j < n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    return r;
  }

  /// Series division; requires b[0] != 0.
  friend Jet operator/(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    Jet r;
    r.c_.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double s = a.c_[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
      r.c_[k] = s / b.c_[0];
    }
    return r;
  }
  friend Jet operator/(double a, const Jet& b) { return Jet(b.order(), a) / b; }

  friend Jet exp(const Jet& a) {
    const std::size_t n = a.c_.size();
    Jet r;
    r.c_.assign(n, 0.0);
    r.c_[0] = std::exp(a.c_[0]);
    for (std::size_t k = 1; k < n; ++k) {
      double s = 0.0;
      for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c_[j] * r.c_[k - j];
      r.c_[k] = s / static_cast<double>(k);
    }
    return r;
  }

  /// Simultaneous sin/cos (or sinh/cosh when hyperbolic) of a series.
  static void sin_cos(const Jet& a, Jet& s, Jet& c, bool hyperbolic) {
    const std::size_t n = a.c_.size();
    s.c_.assign(n, 0.0);
    c.c_.assign(n, 0.0);
    if (hyperbolic) {
      s.c_[0] = std::sinh(a.c_[0]);
      c.c_[0] = std::cosh(a.c_[0]);
    } else {
      s.c_[0] = std::sin(a.c_[0]);
      c.c_[0] = std::cos(a.c_[0]);
    }
    const double sign = hyperbolic ? 1.0 : -1.0;
    for (std::size_t k = 1; k < n; ++k) {
      double ss = 0.0, cc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) {
        const double w = static_cast<double>(j) * a.c_[j];
        ss += w * c.c_[k - j];
        cc += w * s.c_[k - j];
      }
      s.c_[k] = ss / static_cast<double>(k);
      c.c_[k] = sign * cc / static_cast<double>(k);
    }
  }

  friend Jet sin(const Jet& a) {
    Jet s, c;
    sin_cos(a, s, c, false);
    return s;
  }
  friend Jet cos(const Jet& a) {
    Jet s, c;
    sin_cos(a, s, c, false);
    return c;
  }
  friend Jet sinh(const Jet& a) {
    Jet s, c;
    sin_cos(a, s, c, true);
    return s;
  }
  friend Jet cosh(const Jet& a) {
    Jet s, c;
    sin_cos(a, s, c, true);
    return c;
  }

 private:
  void trim_to(const Jet& o) {
    if (o.c_.size() < c_.size()) c_.resize(o.c_.size());
  }

  std::vector<double> c_;
};

}  // namespace packlp
