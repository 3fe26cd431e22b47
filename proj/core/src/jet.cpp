#include "jangbench/jet.hpp"

#include <algorithm>

namespace jangbench {

bool ScalarJet::finite() const {
  if (!std::isfinite(value)) return false;
  for (int i = 0; i < 3; ++i) {
    if (order >= 1 && !std::isfinite(grad[i])) return false;
    for (int j = 0; j < 3; ++j) {
      if (order >= 2 && !std::isfinite(hess[i][j])) return false;
      for (int k = 0; k < 3; ++k)
        if (order >= 3 && !std::isfinite(third[i][j][k])) return false;
    }
  }
  return true;
}

ScalarJet ScalarJet::truncated(int ord) const {
  ScalarJet r = *this;
  r.order = std::min(order, ord);
  if (r.order < 3) r.third = {};
  if (r.order < 2) r.hess = {};
  if (r.order < 1) r.grad = {};
  return r;
}

ScalarJet& ScalarJet::operator+=(const ScalarJet& o) {
  order = std::min(order, o.order);
  value += o.value;
  for (int i = 0; i < 3; ++i) {
    grad[i] += o.grad[i];
    for (int j = 0; j < 3; ++j) {
      hess[i][j] += o.hess[i][j];
      for (int k = 0; k < 3; ++k) third[i][j][k] += o.third[i][j][k];
    }
  }
  return *this;
}

ScalarJet& ScalarJet::operator-=(const ScalarJet& o) {
  order = std::min(order, o.order);
  value -= o.value;
  for (int i = 0; i < 3; ++i) {
    grad[i] -= o.grad[i];
    for (int j = 0; j < 3; ++j) {
      hess[i][j] -= o.hess[i][j];
      for (int k = 0; k < 3; ++k) third[i][j][k] -= o.third[i][j][k];
    }
  }
  return *this;
}

ScalarJet& ScalarJet::operator*=(double s) {
  value *= s;
  for (int i = 0; i < 3; ++i) {
    grad[i] *= s;
    for (int j = 0; j < 3; ++j) {
      hess[i][j] *= s;
      for (int k = 0; k < 3; ++k) third[i][j][k] *= s;
    }
  }
  return *this;
}

ScalarJet operator+(ScalarJet a, const ScalarJet& b) { return a += b; }
ScalarJet operator-(ScalarJet a, const ScalarJet& b) { return a -= b; }
ScalarJet operator-(const ScalarJet& a) {
  ScalarJet r = a;
  r *= -1.0;
  return r;
}
ScalarJet operator*(ScalarJet a, double s) { return a *= s; }
ScalarJet operator*(double s, ScalarJet a) { return a *= s; }
ScalarJet operator/(ScalarJet a, double s) { return a *= (1.0 / s); }

ScalarJet operator*(const ScalarJet& u, const ScalarJet& v) {
  ScalarJet r;
  r.order = min_order(u, v);
  r.value = u.value * v.value;
  if (r.order >= 1)
    for (int i = 0; i < 3; ++i) r.grad[i] = u.grad[i] * v.value + u.value * v.grad[i];
  if (r.order >= 2)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const double s = u.hess[i][j] * v.value + u.grad[i] * v.grad[j] +
                         u.grad[j] * v.grad[i] + u.value * v.hess[i][j];
        r.hess[i][j] = s;
        r.hess[j][i] = s;
      }
  if (r.order >= 3)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        for (int k = j; k < 3; ++k) {
          const double s = u.third[i][j][k] * v.value + u.hess[i][j] * v.grad[k] +
                           u.hess[i][k] * v.grad[j] + u.hess[j][k] * v.grad[i] +
                           u.grad[i] * v.hess[j][k] + u.grad[j] * v.hess[i][k] +
                           u.grad[k] * v.hess[i][j] + u.value * v.third[i][j][k];
          r.third[i][j][k] = s;
          r.third[i][k][j] = s;
          r.third[j][i][k] = s;
          r.third[j][k][i] = s;
          r.third[k][i][j] = s;
          r.third[k][j][i] = s;
        }
  return r;
}

ScalarJet compose(const ScalarJet& u, double f0, double f1, double f2, double f3) {
  ScalarJet r;
  r.order = u.order;
  r.value = f0;
  if (r.order >= 1)
    for (int i = 0; i < 3; ++i) r.grad[i] = f1 * u.grad[i];
  if (r.order >= 2)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const double s = f2 * u.grad[i] * u.grad[j] + f1 * u.hess[i][j];
        r.hess[i][j] = s;
        r.hess[j][i] = s;
      }
  if (r.order >= 3)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        for (int k = j; k < 3; ++k) {
          const double s =
              f3 * u.grad[i] * u.grad[j] * u.grad[k] +
              f2 * (u.hess[i][j] * u.grad[k] + u.hess[i][k] * u.grad[j] +
                    u.hess[j][k] * u.grad[i]) +
              f1 * u.third[i][j][k];
          r.third[i][j][k] = s;
          r.third[i][k][j] = s;
          r.third[j][i][k] = s;
          r.third[j][k][i] = s;
          r.third[k][i][j] = s;
          r.third[k][j][i] = s;
        }
  return r;
}

ScalarJet operator/(double s, const ScalarJet& b) {
  const double x = b.value;
  const double i1 = 1.0 / x;
  return compose(b, s * i1, -s * i1 * i1, 2.0 * s * i1 * i1 * i1,
                 -6.0 * s * i1 * i1 * i1 * i1);
}

ScalarJet operator/(const ScalarJet& a, const ScalarJet& b) { return a * (1.0 / b); }

ScalarJet sqrt(const ScalarJet& u) {
  const double s = std::sqrt(u.value);
  const double x = u.value;
  return compose(u, s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

ScalarJet exp(const ScalarJet& u) {
  const double e = std::exp(u.value);
  return compose(u, e, e, e, e);
}

ScalarJet log(const ScalarJet& u) {
  const double x = u.value;
  return compose(u, std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}

ScalarJet sin(const ScalarJet& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return compose(u, s, c, -s, -c);
}

ScalarJet cos(const ScalarJet& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return compose(u, c, -s, -c, s);
}

ScalarJet tanh(const ScalarJet& u) {
  const double t = std::tanh(u.value);
  const double d1 = 1.0 - t * t;
  return compose(u, t, d1, -2.0 * t * d1, d1 * (6.0 * t * t - 2.0));
}

ScalarJet pow(const ScalarJet& u, double p) {
  const double x = u.value;
  if (p == std::round(p) && p >= 0.0 && p <= 3.0) {
    ScalarJet r = ScalarJet::constant(1.0, u.order);
    for (int n = 0; n < static_cast<int>(p); ++n) r = r * u;
    return r;
  }
  const double f0 = std::pow(x, p);
  const double f1 = p * std::pow(x, p - 1.0);
  const double f2 = p * (p - 1.0) * std::pow(x, p - 2.0);
  const double f3 = p * (p - 1.0) * (p - 2.0) * std::pow(x, p - 3.0);
  return compose(u, f0, f1, f2, f3);
}

ScalarJet pow(const ScalarJet& u, const ScalarJet& p) { return exp(p * log(u)); }

ScalarJet square(const ScalarJet& u) { return u * u; }

ScalarJet partial(const ScalarJet& u, int i) {
  if (u.order < 1) throw Error("partial: jet has no first derivatives");
  ScalarJet r;
  r.order = u.order - 1;
  r.value = u.grad[i];
  if (r.order >= 1)
    for (int j = 0; j < 3; ++j) r.grad[j] = u.hess[i][j];
  if (r.order >= 2)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r.hess[j][k] = u.third[i][j][k];
  return r;
}

ScalarJet directional(const ScalarJet& u, const std::array<ScalarJet, 3>& w) {
  ScalarJet r = ScalarJet::constant(0.0, u.order - 1);
  for (int i = 0; i < 3; ++i) r += w[i] * partial(u, i);
  return r;
}

}  // namespace jangbench
