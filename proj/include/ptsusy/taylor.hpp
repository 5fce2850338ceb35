#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>

namespace ptsusy {

/// Truncated Taylor expansion f(x0 + t) = sum_k c_k t^k, k = 0..MaxOrder.
///
/// Coefficients are normalized (c_k = f^(k)(x0) / k!).  `order` tracks how many
/// coefficients are meaningful: taking a derivative drops the top coefficient,
/// and binary operations keep the smaller of the two orders.  Scalar is a
/// complex type; real constants enter through the `double` overloads.
template <typename Scalar, int MaxOrder>
class Taylor {
 public:
  static constexpr int kMaxOrder = MaxOrder;
  using Coeffs = std::array<Scalar, MaxOrder + 1>;

  Taylor() { c_.fill(Scalar(0)); }
  Taylor(Scalar constant) : Taylor() { c_[0] = constant; }  // NOLINT(implicit)
  Taylor(double constant) : Taylor() { c_[0] = Scalar(constant); }  // NOLINT

  /// The independent variable expanded about x0.
  static Taylor variable(double x0) {
    Taylor t;
    t.c_[0] = Scalar(x0);
    if (MaxOrder >= 1) t.c_[1] = Scalar(1);
    return t;
  }

  int order() const { return order_; }
  void set_order(int k) { order_ = std::clamp(k, 0, MaxOrder); }

  Scalar operator[](int k) const { return c_[k]; }
  Scalar& operator[](int k) { return c_[k]; }
  Scalar value() const { return c_[0]; }

  /// k-th derivative at the expansion point.
  Scalar derivative(int k) const {
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i) factorial *= i;
    return c_[k] * factorial;
  }

  /// Expansion of d/dx f.
  Taylor differentiated() const {
    Taylor d;
    for (int k = 0; k < MaxOrder; ++k) d.c_[k] = c_[k + 1] * double(k + 1);
    d.order_ = std::max(order_ - 1, 0);
    return d;
  }

  /// Expansion of an antiderivative whose value at x0 is `value`.
  Taylor integrated(Scalar value) const {
    Taylor r;
    r.c_[0] = value;
    for (int k = 1; k <= MaxOrder; ++k) r.c_[k] = c_[k - 1] / double(k);
    r.order_ = std::min(order_ + 1, MaxOrder);
    return r;
  }

  Taylor operator-() const {
    Taylor r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  Taylor& operator+=(const Taylor& o) {
    for (int k = 0; k <= MaxOrder; ++k) c_[k] += o.c_[k];
    order_ = std::min(order_, o.order_);
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (int k = 0; k <= MaxOrder; ++k) c_[k] -= o.c_[k];
    order_ = std::min(order_, o.order_);
    return *this;
  }
  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  Taylor& operator/=(const Taylor& o) { return *this = *this / o; }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int k = 0; k <= MaxOrder; ++k) {
      Scalar s(0);
      for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    r.order_ = std::min(a.order_, b.order_);
    return r;
  }

  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int k = 0; k <= MaxOrder; ++k) {
      Scalar s = a.c_[k];
      for (int j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
      r.c_[k] = s / b.c_[0];
    }
    r.order_ = std::min(a.order_, b.order_);
    return r;
  }

  // Scalar arithmetic keeps the jet's order.
  friend Taylor operator+(Taylor a, Scalar s) { a.c_[0] += s; return a; }
  friend Taylor operator+(Scalar s, Taylor a) { a.c_[0] += s; return a; }
  friend Taylor operator-(Taylor a, Scalar s) { a.c_[0] -= s; return a; }
  friend Taylor operator-(Scalar s, const Taylor& a) { return (-a) + s; }
  friend Taylor operator*(Taylor a, Scalar s) {
    for (auto& v : a.c_) v *= s;
    return a;
  }
  friend Taylor operator*(Scalar s, Taylor a) { return a * s; }
  friend Taylor operator/(Taylor a, Scalar s) {
    for (auto& v : a.c_) v /= s;
    return a;
  }
  friend Taylor operator/(Scalar s, const Taylor& a) { return Taylor(s) / a; }

  friend Taylor operator+(const Taylor& a, double s) { return a + Scalar(s); }
  friend Taylor operator+(double s, const Taylor& a) { return a + Scalar(s); }
  friend Taylor operator-(const Taylor& a, double s) { return a - Scalar(s); }
  friend Taylor operator-(double s, const Taylor& a) { return Scalar(s) - a; }
  friend Taylor operator*(const Taylor& a, double s) { return a * Scalar(s); }
  friend Taylor operator*(double s, const Taylor& a) { return a * Scalar(s); }
  friend Taylor operator/(const Taylor& a, double s) { return a / Scalar(s); }
  friend Taylor operator/(double s, const Taylor& a) { return Scalar(s) / a; }

  friend Taylor exp(const Taylor& a) {
    using std::exp;
    Taylor e;
    e.c_[0] = exp(a.c_[0]);
    for (int k = 1; k <= MaxOrder; ++k) {
      Scalar s(0);
      for (int j = 1; j <= k; ++j) s += double(j) * a.c_[j] * e.c_[k - j];
      e.c_[k] = s / double(k);
    }
    e.order_ = a.order_;
    return e;
  }

  friend Taylor log(const Taylor& a) {
    using std::log;
    Taylor l;
    l.c_[0] = log(a.c_[0]);
    for (int k = 1; k <= MaxOrder; ++k) {
      Scalar s = a.c_[k];
      for (int j = 1; j < k; ++j) s -= double(j) / double(k) * l.c_[j] * a.c_[k - j];
      l.c_[k] = s / a.c_[0];
    }
    l.order_ = a.order_;
    return l;
  }

  /// sin and cos share one recurrence.
  friend void sincos(const Taylor& a, Taylor& s, Taylor& c) {
    using std::cos;
    using std::sin;
    s = Taylor();
    c = Taylor();
    s.c_[0] = sin(a.c_[0]);
    c.c_[0] = cos(a.c_[0]);
    for (int k = 1; k <= MaxOrder; ++k) {
      Scalar ss(0), cc(0);
      for (int j = 1; j <= k; ++j) {
        ss += double(j) * a.c_[j] * c.c_[k - j];
        cc -= double(j) * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = ss / double(k);
      c.c_[k] = cc / double(k);
    }
    s.order_ = c.order_ = a.order_;
  }

  friend Taylor sin(const Taylor& a) {
    Taylor s, c;
    sincos(a, s, c);
    return s;
  }
  friend Taylor cos(const Taylor& a) {
    Taylor s, c;
    sincos(a, s, c);
    return c;
  }
  friend Taylor tan(const Taylor& a) {
    Taylor s, c;
    sincos(a, s, c);
    return s / c;
  }

  friend Taylor pow(const Taylor& a, int n) {
    if (n < 0) return Taylor(Scalar(1)) / withOrder(pow(a, -n), a.order_);
    Taylor r = withOrder(Taylor(Scalar(1)), a.order_);
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
  }

  friend Taylor sqrt(const Taylor& a) {
    using std::sqrt;
    Taylor r;
    r.c_[0] = sqrt(a.c_[0]);
    for (int k = 1; k <= MaxOrder; ++k) {
      Scalar s = a.c_[k];
      for (int j = 1; j < k; ++j) s -= r.c_[j] * r.c_[k - j];
      r.c_[k] = s / (2.0 * r.c_[0]);
    }
    r.order_ = a.order_;
    return r;
  }

 private:
  static Taylor withOrder(Taylor t, int order = MaxOrder) {
    t.order_ = order;
    return t;
  }

  Coeffs c_;
  int order_ = MaxOrder;
};

inline constexpr int kJetOrder = 12;
using Jet = Taylor<std::complex<double>, kJetOrder>;

}  // namespace ptsusy
