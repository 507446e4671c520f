#pragma once

#include <initializer_list>
#include <map>
#include <utility>

#include "solvharm/errors.hpp"
#include "solvharm/series/ode.hpp"
#include "solvharm/series/truncated.hpp"

namespace solvharm {

/// sum c_mu coth(mu t) over distinct mu > 0. Zero coefficients are dropped,
/// so the zero combination is the empty map.
class CothCombo {
 public:
  CothCombo() = default;
  CothCombo(std::initializer_list<std::pair<Rational, Rational>> terms) {
    for (const auto& [mu, c] : terms) add(mu, c);
  }

  void add(const Rational& mu, const Rational& c) {
    if (mu <= 0) throw Error(ErrorKind::InvalidArgument, "coth frequency must be positive, got " + to_string(mu));
    auto [it, inserted] = terms_.emplace(mu, c);
    if (!inserted) it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  const std::map<Rational, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Rational coefficient(const Rational& mu) const {
    auto it = terms_.find(mu);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  CothCombo& operator+=(const CothCombo& o) {
    for (const auto& [mu, c] : o.terms_) add(mu, c);
    return *this;
  }
  CothCombo& operator*=(const Rational& r) {
    if (r == 0) terms_.clear();
    for (auto& [mu, c] : terms_) c *= r;
    return *this;
  }
  friend CothCombo operator+(CothCombo a, const CothCombo& b) { return a += b; }
  friend CothCombo operator*(CothCombo a, const Rational& r) { return a *= r; }
  friend CothCombo operator*(const Rational& r, CothCombo a) { return a *= r; }
  friend bool operator==(const CothCombo& a, const CothCombo& b) { return a.terms_ == b.terms_; }

 private:
  std::map<Rational, Rational> terms_;
};

/// Canonical form and zero test. The coth(mu t) are linearly independent for
/// distinct mu, so a combination vanishes iff every merged coefficient does.
struct CothDecomposition {
  CothCombo combo;
  bool zero = true;
};

inline CothDecomposition coth_decompose(const CothCombo& combo) {
  return {combo, combo.is_zero()};
}

/// The coth combination h with f(t, phi)/f(t, 0) = 1 + (phi^2/2) e^t sinh t h(t) + o(phi^2),
/// lambda = 1. For v the partner frequency is 1 - lambda_l.
inline CothCombo phi2_hat(const RationalBlock& b) {
  CothCombo h;
  switch (b.kind) {
    case BlockKind::ScalarX: {
      const Rational& lj = b.lambda_j;
      const Rational k = lj / (Rational(1) + lj);
      h.add(1, k);
      h.add(lj, -k * lj);
      break;
    }
    case BlockKind::ScalarY: {
      const Rational k = (Rational(1) - b.a2) / 6;
      h.add(1, 2 * k);
      h.add(Rational(1, 2), -k);
      break;
    }
    case BlockKind::MatrixV: {
      const Rational& l = b.lambda_l;
      const Rational lp = b.lambda_lp();
      const Rational one = 1;
      h.add(1, (2 * (one + 2 * l * lp) - 3 * b.b2) / (2 * (one + l) * (one + lp)));
      h.add(l, l * (b.b2 - 2 * l) / (2 * (one + l)));
      h.add(lp, lp * (b.b2 - 2 * lp) / (2 * (one + lp)));
      break;
    }
  }
  return h;
}

/// Taylor series of (1/2) e^t sinh t sum c_mu coth(mu t), through t^order.
inline RSeries combo_series(const CothCombo& combo, int order) {
  RSeries sum(order);
  const RSeries sinhc1 = series::sinhc(order, 1);
  for (const auto& [mu, c] : combo.terms()) {
    // sinh t coth(mu t) = cosh(mu t) (sinh t / t) / (sinh(mu t) / t)
    sum += series::cosh(order, mu) * sinhc1 * series::sinhc(order, mu).inverse() * c;
  }
  return series::exp(order, 1) * sum * Rational(1, 2);
}

}  // namespace solvharm
