#include <doctest.h>

#include <cmath>
#include <random>

#include "jangbench/chart_fields.hpp"

using namespace jangbench;

TEST_CASE("linear function jet") {
  auto f = ScalarField::closed_form([](const JetVec& x) { return x[0]; });
  const ScalarJet j = jet_of_scalar(f, {2.0, 0.0, 0.0}, 1);
  CHECK(j.value == 2.0);
  CHECK(j.grad[0] == 1.0);
  CHECK(j.grad[1] == 0.0);
  CHECK(j.grad[2] == 0.0);
}

TEST_CASE("constant field has vanishing derivatives at order 3") {
  auto f = ScalarField::constant(4.5);
  const ScalarJet j = f.jet({0.3, -1.0, 2.0}, 3);
  CHECK(j.value == 4.5);
  for (int a = 0; a < 3; ++a) {
    CHECK(j.grad[a] == 0.0);
    for (int b = 0; b < 3; ++b) {
      CHECK(j.hess[a][b] == 0.0);
      for (int c = 0; c < 3; ++c) CHECK(j.third[a][b][c] == 0.0);
    }
  }
}

TEST_CASE("bilinear hessian") {
  auto f = ScalarField::closed_form([](const JetVec& x) { return x[0] * x[1]; });
  const ScalarJet j = f.jet({1.0, 1.0, 0.0}, 2);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const bool off = (a == 0 && b == 1) || (a == 1 && b == 0);
      CHECK(j.hess[a][b] == (off ? 1.0 : 0.0));
    }
}

TEST_CASE("order above three and non-finite values are errors") {
  auto f = ScalarField::closed_form([](const JetVec& x) { return log(x[0]); });
  CHECK_THROWS_AS(f.jet({1.0, 0.0, 0.0}, 4), Error);
  CHECK_THROWS_AS(f.jet({-1.0, 0.0, 0.0}, 0), Error);
  CHECK_THROWS_AS(fd_jet_oracle([](const Point3&) { return NAN; }, {0, 0, 0}, 1), Error);
  CHECK_THROWS_AS(fd_jet_oracle([](const Point3& p) { return p[0]; }, {0, 0, 0}, 1, 0.0), Error);
  CHECK_THROWS_AS(fd_jet_oracle([](const Point3& p) { return p[0]; }, {1e20, 0, 0}, 1, 1e-3),
                  Error);
}

TEST_CASE("fd oracle on sin and constants") {
  auto s = [](const Point3& p) { return std::sin(p[0]); };
  const ScalarJet j = fd_jet_oracle(s, {0, 0, 0}, 1, 1e-3);
  CHECK(std::abs(j.grad[0] - 1.0) < 1e-6);

  const ScalarJet c = fd_jet_oracle([](const Point3&) { return 3.0; }, {1, 2, 3}, 3, 1e-2);
  for (int a = 0; a < 3; ++a) {
    CHECK(c.grad[a] == 0.0);
    for (int b = 0; b < 3; ++b) {
      CHECK(c.hess[a][b] == 0.0);
      for (int d = 0; d < 3; ++d) CHECK(c.third[a][b][d] == 0.0);
    }
  }
}

TEST_CASE("fd Richardson ratio for exp is fourth order") {
  auto e = [](const Point3& p) { return std::exp(p[0]); };
  const double exact = 1.0;
  const double e1 = std::abs(fd_jet_oracle(e, {0, 0, 0}, 1, 1e-2).grad[0] - exact);
  const double e2 = std::abs(fd_jet_oracle(e, {0, 0, 0}, 1, 5e-3).grad[0] - exact);
  const double ratio = e1 / e2;
  CHECK(ratio > 16.0 * 0.8);
  CHECK(ratio < 16.0 * 1.2);
}

namespace {

ScalarJet composite(const JetVec& x) {
  return exp(sin(x[0] * x[1]) + 0.5 * x[2] * x[2]) / (1.0 + x[0] * x[0]) +
         sqrt(2.0 + cos(x[1] - x[2])) * log(3.0 + x[0]) + pow(1.5 + x[2], 2.5);
}

double composite_value(const Point3& p) {
  return std::exp(std::sin(p[0] * p[1]) + 0.5 * p[2] * p[2]) / (1.0 + p[0] * p[0]) +
         std::sqrt(2.0 + std::cos(p[1] - p[2])) * std::log(3.0 + p[0]) +
         std::pow(1.5 + p[2], 2.5);
}

double max_diff(const ScalarJet& a, const ScalarJet& b, int order) {
  double m = std::abs(a.value - b.value);
  for (int i = 0; i < 3; ++i) {
    if (order >= 1) m = std::max(m, std::abs(a.grad[i] - b.grad[i]));
    for (int j = 0; j < 3; ++j) {
      if (order >= 2) m = std::max(m, std::abs(a.hess[i][j] - b.hess[i][j]));
      for (int k = 0; k < 3; ++k)
        if (order >= 3) m = std::max(m, std::abs(a.third[i][j][k] - b.third[i][j][k]));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("closed-form jets agree with the fd oracle and converge at fourth order") {
  auto f = ScalarField::closed_form(composite);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  for (int trial = 0; trial < 10; ++trial) {
    const Point3 p{U(rng), U(rng), U(rng)};
    const ScalarJet exact = f.jet(p, 3);
    CHECK(std::abs(exact.value - composite_value(p)) < 1e-13);
    const double e1 = max_diff(exact, fd_jet_oracle(composite_value, p, 3, 4e-2), 3);
    const double e2 = max_diff(exact, fd_jet_oracle(composite_value, p, 3, 2e-2), 3);
    CHECK(e1 < 1e-2);
    // Third derivatives dominate the error; the ratio should be near 2^4.
    CHECK(e1 / e2 > 16.0 * 0.8);
    CHECK(e1 / e2 < 16.0 * 1.2);
  }
}

TEST_CASE("jet derivative arrays are exactly symmetric") {
  const Point3 p{0.2, -0.3, 0.4};
  const ScalarJet a = ScalarField::closed_form(composite).jet(p, 3);
  const ScalarJet b = fd_jet_oracle(composite_value, p, 3, 1e-2);
  for (const ScalarJet* j : {&a, &b})
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        CHECK(j->hess[i][k] == j->hess[k][i]);
        for (int l = 0; l < 3; ++l) {
          CHECK(j->third[i][k][l] == j->third[k][i][l]);
          CHECK(j->third[i][k][l] == j->third[i][l][k]);
          CHECK(j->third[i][k][l] == j->third[l][k][i]);
        }
      }
}

TEST_CASE("partial and directional derivatives shift the jet") {
  auto f = ScalarField::closed_form(composite);
  const Point3 p{0.1, 0.2, 0.3};
  const ScalarJet j = f.jet(p, 3);
  const ScalarJet d1 = partial(j, 1);
  CHECK(d1.order == 2);
  CHECK(d1.value == j.grad[1]);
  CHECK(d1.hess[0][2] == j.third[1][0][2]);
  const JetVec w{ScalarJet::constant(1.0, 2), ScalarJet::constant(2.0, 2),
                 ScalarJet::constant(0.0, 2)};
  const ScalarJet dd = directional(j, w);
  CHECK(std::abs(dd.value - (j.grad[0] + 2.0 * j.grad[1])) < 1e-14);
}

TEST_CASE("tensor fields: closed form and fd backends agree") {
  auto sampler = [](const Point3& p) {
    Mat3 m{};
    m[0][0] = 1.0 + 0.1 * std::sin(p[0]);
    m[1][1] = 1.0 + p[1] * p[1];
    m[2][2] = 2.0;
    m[0][1] = m[1][0] = 0.2 * p[0] * p[2];
    return m;
  };
  auto cf = Sym2Field::closed_form([](const JetVec& x) {
    Sym2Jet s = Sym2Jet::constant({}, x[0].order);
    s.c[0][0] = 1.0 + 0.1 * sin(x[0]);
    s.c[1][1] = 1.0 + x[1] * x[1];
    s.c[2][2] = ScalarJet::constant(2.0, x[0].order);
    s.c[0][1] = s.c[1][0] = 0.2 * x[0] * x[2];
    return s;
  });
  auto fd = Sym2Field::finite_difference(sampler, 1e-3);
  CHECK(fd.backend() == Backend::finite_difference);
  const Point3 p{0.4, -0.2, 0.7};
  const Sym2Jet a = cf.jet(p, 2), b = fd.jet(p, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(a.comp(i, j) - b.comp(i, j)) < 1e-14);
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(a.d1(i, j, k) - b.d1(i, j, k)) < 1e-10);
        for (int l = 0; l < 3; ++l) CHECK(std::abs(a.d2(i, j, k, l) - b.d2(i, j, k, l)) < 1e-7);
      }
    }
}
