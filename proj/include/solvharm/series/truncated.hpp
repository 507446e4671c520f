#pragma once

#include <algorithm>
#include <string>
#include <type_traits>
#include <vector>

#include "solvharm/errors.hpp"
#include "solvharm/rational.hpp"
#include "solvharm/series/poly.hpp"

namespace solvharm {

inline constexpr int kMaxSeriesOrder = 16;
inline constexpr int kDefaultSeriesOrder = 12;

/// sum_{k <= order} a_k t^k; products truncate at the smaller order.
template <class Coef>
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  explicit TruncatedSeries(int order) : coeffs_(static_cast<std::size_t>(order) + 1) {}
  TruncatedSeries(int order, std::vector<Coef> coeffs) : coeffs_(std::move(coeffs)) {
    coeffs_.resize(static_cast<std::size_t>(order) + 1);
  }

  static TruncatedSeries constant(int order, const Coef& c) {
    TruncatedSeries s(order);
    s.coeffs_[0] = c;
    return s;
  }
  /// t^k
  static TruncatedSeries monomial(int order, int k, const Coef& c = Coef(1)) {
    TruncatedSeries s(order);
    if (k <= order) s.coeffs_[k] = c;
    return s;
  }

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const Coef& operator[](int k) const { return coeffs_[k]; }
  Coef& operator[](int k) { return coeffs_[k]; }
  const std::vector<Coef>& coefficients() const noexcept { return coeffs_; }

  TruncatedSeries truncated(int order) const {
    TruncatedSeries s(order);
    for (int k = 0; k <= std::min(order, this->order()); ++k) s.coeffs_[k] = coeffs_[k];
    return s;
  }

  /// Divides by t^m; the first m coefficients must vanish.
  TruncatedSeries shift_down(int m) const {
    for (int k = 0; k < m && k <= order(); ++k)
      if (!(coeffs_[k] == Coef(0))) throw Error(ErrorKind::InvalidArgument, "series not divisible by t^m");
    TruncatedSeries s(order() - m);
    for (int k = m; k <= order(); ++k) s.coeffs_[k - m] = coeffs_[k];
    return s;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    const int n = std::min(order(), o.order());
    coeffs_.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    const int n = std::min(order(), o.order());
    coeffs_.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  TruncatedSeries& operator*=(const Rational& r) {
    for (auto& c : coeffs_) c *= r;
    return *this;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const Rational& r) { return a *= r; }
  friend TruncatedSeries operator*(const Rational& r, TruncatedSeries a) { return a *= r; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const int n = std::min(a.order(), b.order());
    TruncatedSeries out(n);
    for (int i = 0; i <= n; ++i) {
      if (a.coeffs_[i] == Coef(0)) continue;
      for (int j = 0; i + j <= n; ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return out;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.coeffs_ == b.coeffs_; }

  /// 1/a for a constant term equal to 1 (the only case the series engine needs
  /// for non-field coefficient rings) or any nonzero rational.
  TruncatedSeries inverse() const {
    const Coef& a0 = coeffs_[0];
    Coef inv0 = unit_inverse(a0);
    TruncatedSeries out(order());
    out.coeffs_[0] = inv0;
    for (int k = 1; k <= order(); ++k) {
      Coef s(0);
      for (int i = 1; i <= k; ++i) s += coeffs_[i] * out.coeffs_[k - i];
      out.coeffs_[k] = -(s * inv0);
    }
    return out;
  }

  /// Coefficientwise map into another ring.
  template <class F>
  auto map(F&& f) const {
    using Out = decltype(f(coeffs_[0]));
    TruncatedSeries<Out> out(order());
    for (int k = 0; k <= order(); ++k) out[k] = f(coeffs_[k]);
    return out;
  }

 private:
  static Coef unit_inverse(const Coef& a0) {
    if constexpr (std::is_same_v<Coef, Rational>) {
      if (a0 == 0) throw Error(ErrorKind::InvalidArgument, "series with zero constant term is not invertible");
      return Rational(1) / a0;
    } else {
      if (!(a0 == Coef(1))) throw Error(ErrorKind::InvalidArgument, "series inverse needs constant term 1");
      return Coef(1);
    }
  }

  std::vector<Coef> coeffs_;
};

using RSeries = TruncatedSeries<Rational>;
using BiSeries = TruncatedSeries<PolyCS>;

namespace series {

inline BigInt factorial(int k) {
  BigInt f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// exp(mu t)
inline RSeries exp(int order, const Rational& mu) {
  RSeries s(order);
  Rational p = 1;
  for (int k = 0; k <= order; ++k) {
    s[k] = p / Rational(factorial(k));
    p *= mu;
  }
  return s;
}

/// sinh(mu t)
inline RSeries sinh(int order, const Rational& mu) {
  RSeries s(order);
  Rational p = 1;
  for (int k = 0; k <= order; ++k) {
    if (k % 2 == 1) s[k] = p / Rational(factorial(k));
    p *= mu;
  }
  return s;
}

/// cosh(mu t)
inline RSeries cosh(int order, const Rational& mu) {
  RSeries s(order);
  Rational p = 1;
  for (int k = 0; k <= order; ++k) {
    if (k % 2 == 0) s[k] = p / Rational(factorial(k));
    p *= mu;
  }
  return s;
}

/// sinh(mu t)/t
inline RSeries sinhc(int order, const Rational& mu) { return sinh(order + 1, mu).shift_down(1); }

inline BiSeries lift(const RSeries& r) {
  return r.map([](const Rational& v) { return PolyCS(v); });
}

/// Evaluates a series at t with coefficients evaluated at (c, s).
inline double evaluate(const BiSeries& b, double t, double c, double s) {
  double r = 0.0;
  for (int k = b.order(); k >= 0; --k) r = r * t + b[k].eval(c, s);
  return r;
}

inline double evaluate(const RSeries& r, double t) {
  double v = 0.0;
  for (int k = r.order(); k >= 0; --k) v = v * t + to_double(r[k]);
  return v;
}

}  // namespace series

}  // namespace solvharm
