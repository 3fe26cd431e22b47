#pragma once

// Scalar and symmetric 2-tensor fields on a 3D coordinate chart, evaluated as
// jets. Closed-form fields are written against ScalarJet and differentiate
// exactly; finite-difference fields wrap a plain sampler.

#include <functional>
#include <vector>

#include "jangbench/jet.hpp"

namespace jangbench {

using Point3 = std::array<double, 3>;
using JetVec = std::array<ScalarJet, 3>;

struct Sym2Jet {
  std::array<std::array<ScalarJet, 3>, 3> c;

  int order() const;
  double comp(int i, int j) const { return c[i][j].value; }
  double d1(int i, int j, int a) const { return c[i][j].grad[a]; }
  double d2(int i, int j, int a, int b) const { return c[i][j].hess[a][b]; }
  Mat3 values() const;
  Sym2Jet truncated(int ord) const;
  bool finite() const;

  static Sym2Jet constant(const Mat3& m, int ord);
  static Sym2Jet identity(int ord) { return constant({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, ord); }
};

Sym2Jet operator+(const Sym2Jet& a, const Sym2Jet& b);
Sym2Jet operator-(const Sym2Jet& a, const Sym2Jet& b);
Sym2Jet operator*(const ScalarJet& s, const Sym2Jet& a);

enum class Backend { closed_form, finite_difference, derived };

inline constexpr double kDefaultFdStep = 1e-3;

// Coordinate jets x_1, x_2, x_3 at p.
JetVec coordinates(const Point3& p, int order);
// Euclidean radius |x| as a jet.
ScalarJet radius(const JetVec& x);

class ScalarField {
 public:
  using ClosedForm = std::function<ScalarJet(const JetVec&)>;
  using Sampler = std::function<double(const Point3&)>;
  using Evaluator = std::function<ScalarJet(const Point3&, int)>;

  ScalarField() = default;
  static ScalarField closed_form(ClosedForm fn);
  static ScalarField finite_difference(Sampler sampler, double step = kDefaultFdStep);
  // Field whose jets are computed by an arbitrary routine, e.g. from other fields.
  static ScalarField derived(Evaluator eval, int max_order);
  static ScalarField constant(double c);

  ScalarJet jet(const Point3& p, int order) const;
  double value(const Point3& p) const { return jet(p, 0).value; }
  Backend backend() const { return backend_; }
  int max_order() const { return max_order_; }
  bool valid() const { return static_cast<bool>(eval_); }

 private:
  Evaluator eval_;
  Backend backend_ = Backend::closed_form;
  int max_order_ = kMaxJetOrder;
};

class Sym2Field {
 public:
  using ClosedForm = std::function<Sym2Jet(const JetVec&)>;
  using Sampler = std::function<Mat3(const Point3&)>;
  using Evaluator = std::function<Sym2Jet(const Point3&, int)>;

  Sym2Field() = default;
  static Sym2Field closed_form(ClosedForm fn);
  static Sym2Field finite_difference(Sampler sampler, double step = kDefaultFdStep);
  static Sym2Field derived(Evaluator eval, int max_order);
  static Sym2Field constant(const Mat3& m);
  static Sym2Field flat() { return constant({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}); }
  static Sym2Field zero() { return constant({}); }

  Sym2Jet jet(const Point3& p, int order) const;
  Mat3 value(const Point3& p) const { return jet(p, 0).values(); }
  Backend backend() const { return backend_; }
  int max_order() const { return max_order_; }
  bool valid() const { return static_cast<bool>(eval_); }

 private:
  Evaluator eval_;
  Backend backend_ = Backend::closed_form;
  int max_order_ = kMaxJetOrder;
};

// Jet of a scalar field; same as provider.jet but named after the operation.
ScalarJet jet_of_scalar(const ScalarField& provider, const Point3& p, int order);

// Central-difference jet with 4th-order stencils in every derivative.
ScalarJet fd_jet_oracle(const ScalarField::Sampler& sampler, const Point3& p, int order,
                        double step = kDefaultFdStep);

// Same stencils applied componentwise to a vector-valued sampler writing n values.
std::vector<ScalarJet> fd_jets(const std::function<void(const Point3&, double*)>& sampler,
                               int n, const Point3& p, int order, double step);

}  // namespace jangbench
