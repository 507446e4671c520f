#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "solvharm/rational.hpp"

namespace solvharm {

/// Polynomial in c = cos(phi) with exact rational coefficients, lowest
/// degree first, trailing zeros stripped.
class PolyC {
 public:
  PolyC() = default;
  PolyC(const Rational& constant) : coeffs_{constant} { trim(); }  // NOLINT(implicit)
  PolyC(int constant) : PolyC(Rational(constant)) {}               // NOLINT(implicit)
  explicit PolyC(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  /// The polynomial c.
  static PolyC c() { return PolyC(std::vector<Rational>{0, 1}); }

  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }
  Rational operator[](int k) const {
    return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : Rational(0);
  }

  Rational eval(const Rational& x) const {
    Rational r = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
    return r;
  }
  double eval(double x) const {
    double r = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + to_double(*it);
    return r;
  }
  PolyC derivative() const {
    std::vector<Rational> d;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(coeffs_[k] * static_cast<long long>(k));
    return PolyC(std::move(d));
  }

  PolyC& operator+=(const PolyC& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  PolyC& operator-=(const PolyC& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }
  PolyC& operator*=(const Rational& s) {
    if (s == 0) coeffs_.clear();
    for (auto& v : coeffs_) v *= s;
    return *this;
  }
  friend PolyC operator+(PolyC a, const PolyC& b) { return a += b; }
  friend PolyC operator-(PolyC a, const PolyC& b) { return a -= b; }
  friend PolyC operator-(PolyC a) { return a *= Rational(-1); }
  friend PolyC operator*(PolyC a, const Rational& s) { return a *= s; }
  friend PolyC operator*(const Rational& s, PolyC a) { return a *= s; }
  friend PolyC operator*(const PolyC& a, const PolyC& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return PolyC(std::move(out));
  }
  PolyC& operator*=(const PolyC& o) { return *this = *this * o; }
  friend bool operator==(const PolyC& a, const PolyC& b) { return a.coeffs_ == b.coeffs_; }

  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    for (const auto& v : coeffs_) out.push_back(to_string(v));
    return out;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  std::vector<Rational> coeffs_;
};

/// e(c) + s o(c) with s = sin(phi), reduced by s^2 = 1 - c^2.
struct PolyCS {
  PolyC even;
  PolyC odd;

  PolyCS() = default;
  PolyCS(const Rational& r) : even(r) {}  // NOLINT(implicit)
  PolyCS(int r) : even(r) {}              // NOLINT(implicit)
  PolyCS(PolyC e, PolyC o = {}) : even(std::move(e)), odd(std::move(o)) {}  // NOLINT(implicit)

  static PolyCS s() { return PolyCS(PolyC(), PolyC(1)); }

  bool is_zero() const { return even.is_zero() && odd.is_zero(); }
  double eval(double c, double s) const { return even.eval(c) + s * odd.eval(c); }

  PolyCS& operator+=(const PolyCS& o) { even += o.even; odd += o.odd; return *this; }
  PolyCS& operator-=(const PolyCS& o) { even -= o.even; odd -= o.odd; return *this; }
  PolyCS& operator*=(const Rational& r) { even *= r; odd *= r; return *this; }
  friend PolyCS operator+(PolyCS a, const PolyCS& b) { return a += b; }
  friend PolyCS operator-(PolyCS a, const PolyCS& b) { return a -= b; }
  friend PolyCS operator-(PolyCS a) { return a *= Rational(-1); }
  friend PolyCS operator*(PolyCS a, const Rational& r) { return a *= r; }
  friend PolyCS operator*(const Rational& r, PolyCS a) { return a *= r; }
  friend PolyCS operator*(const PolyCS& a, const PolyCS& b) {
    static const PolyC one_minus_c2(std::vector<Rational>{1, 0, -1});
    PolyCS out;
    out.even = a.even * b.even;
    if (!a.odd.is_zero() && !b.odd.is_zero()) out.even += one_minus_c2 * (a.odd * b.odd);
    out.odd = a.even * b.odd + a.odd * b.even;
    return out;
  }
  PolyCS& operator*=(const PolyCS& o) { return *this = *this * o; }
  friend bool operator==(const PolyCS& a, const PolyCS& b) { return a.even == b.even && a.odd == b.odd; }
};

}  // namespace solvharm
