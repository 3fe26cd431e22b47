#pragma once

// Truncated multivariate Taylor jets in three variables, up to third order.
// Arithmetic on jets applies the product and chain rules exactly, so any
// expression written in terms of ScalarJet carries exact partial derivatives.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace jangbench {

inline constexpr int kMaxJetOrder = 3;

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;
using Ten3 = std::array<std::array<std::array<double, 3>, 3>, 3>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScalarJet {
  int order = kMaxJetOrder;
  double value = 0.0;
  Vec3 grad{};
  Mat3 hess{};
  Ten3 third{};

  ScalarJet() = default;
  ScalarJet(double c) : value(c) {}  // NOLINT: constants promote implicitly

  // Coordinate function x_i evaluated at x, carrying derivatives up to `ord`.
  static ScalarJet variable(double x, int i, int ord) {
    ScalarJet j;
    j.order = ord;
    j.value = x;
    if (ord >= 1) j.grad[i] = 1.0;
    return j;
  }

  static ScalarJet constant(double c, int ord) {
    ScalarJet j(c);
    j.order = ord;
    return j;
  }

  bool finite() const;
  ScalarJet truncated(int ord) const;

  ScalarJet& operator+=(const ScalarJet& o);
  ScalarJet& operator-=(const ScalarJet& o);
  ScalarJet& operator*=(double s);
};

ScalarJet operator+(ScalarJet a, const ScalarJet& b);
ScalarJet operator-(ScalarJet a, const ScalarJet& b);
ScalarJet operator-(const ScalarJet& a);
ScalarJet operator*(const ScalarJet& a, const ScalarJet& b);
ScalarJet operator*(ScalarJet a, double s);
ScalarJet operator*(double s, ScalarJet a);
ScalarJet operator/(const ScalarJet& a, const ScalarJet& b);
ScalarJet operator/(ScalarJet a, double s);
ScalarJet operator/(double s, const ScalarJet& b);

// y = F(u) given F(u0), F'(u0), F''(u0), F'''(u0).
ScalarJet compose(const ScalarJet& u, double f0, double f1, double f2, double f3);

ScalarJet sqrt(const ScalarJet& u);
ScalarJet exp(const ScalarJet& u);
ScalarJet log(const ScalarJet& u);
ScalarJet sin(const ScalarJet& u);
ScalarJet cos(const ScalarJet& u);
ScalarJet tanh(const ScalarJet& u);
ScalarJet pow(const ScalarJet& u, double p);
ScalarJet pow(const ScalarJet& u, const ScalarJet& p);
ScalarJet square(const ScalarJet& u);

// Jet of the partial derivative d/dx_i; order drops by one.
ScalarJet partial(const ScalarJet& u, int i);

// Directional derivative sum_i w^i d_i u as a jet of order min(u.order - 1, w.order).
ScalarJet directional(const ScalarJet& u, const std::array<ScalarJet, 3>& w);

inline int min_order(const ScalarJet& a, const ScalarJet& b) {
  return a.order < b.order ? a.order : b.order;
}

}  // namespace jangbench
