#include "jangbench/chart_fields.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace jangbench {

int Sym2Jet::order() const {
  int o = kMaxJetOrder;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) o = std::min(o, c[i][j].order);
  return o;
}

Mat3 Sym2Jet::values() const {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = c[i][j].value;
  return m;
}

Sym2Jet Sym2Jet::truncated(int ord) const {
  Sym2Jet r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.c[i][j] = c[i][j].truncated(ord);
  return r;
}

bool Sym2Jet::finite() const {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!c[i][j].finite()) return false;
  return true;
}

Sym2Jet Sym2Jet::constant(const Mat3& m, int ord) {
  Sym2Jet r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.c[i][j] = ScalarJet::constant(m[i][j], ord);
  return r;
}

Sym2Jet operator+(const Sym2Jet& a, const Sym2Jet& b) {
  Sym2Jet r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.c[i][j] = a.c[i][j] + b.c[i][j];
  return r;
}

Sym2Jet operator-(const Sym2Jet& a, const Sym2Jet& b) {
  Sym2Jet r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.c[i][j] = a.c[i][j] - b.c[i][j];
  return r;
}

Sym2Jet operator*(const ScalarJet& s, const Sym2Jet& a) {
  Sym2Jet r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      r.c[i][j] = s * a.c[i][j];
      r.c[j][i] = r.c[i][j];
    }
  return r;
}

JetVec coordinates(const Point3& p, int order) {
  return {ScalarJet::variable(p[0], 0, order), ScalarJet::variable(p[1], 1, order),
          ScalarJet::variable(p[2], 2, order)};
}

ScalarJet radius(const JetVec& x) { return sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxJetOrder)
    throw Error("jet order " + std::to_string(order) + " outside 0..3");
}

}  // namespace

ScalarField ScalarField::closed_form(ClosedForm fn) {
  ScalarField f;
  f.backend_ = Backend::closed_form;
  f.eval_ = [fn = std::move(fn)](const Point3& p, int order) {
    return fn(coordinates(p, order)).truncated(order);
  };
  return f;
}

ScalarField ScalarField::finite_difference(Sampler sampler, double step) {
  ScalarField f;
  f.backend_ = Backend::finite_difference;
  f.eval_ = [sampler = std::move(sampler), step](const Point3& p, int order) {
    return fd_jet_oracle(sampler, p, order, step);
  };
  return f;
}

ScalarField ScalarField::derived(Evaluator eval, int max_order) {
  ScalarField f;
  f.backend_ = Backend::derived;
  f.eval_ = std::move(eval);
  f.max_order_ = max_order;
  return f;
}

ScalarField ScalarField::constant(double c) {
  return closed_form([c](const JetVec& x) { return ScalarJet::constant(c, x[0].order); });
}

ScalarJet ScalarField::jet(const Point3& p, int order) const {
  check_order(order);
  if (order > max_order_)
    throw Error("field supports jets up to order " + std::to_string(max_order_));
  if (!eval_) throw Error("empty scalar field");
  ScalarJet j = eval_(p, order);
  if (j.order < order) throw Error("field returned a jet of insufficient order");
  j = j.truncated(order);
  if (!j.finite()) throw Error("non-finite jet value");
  return j;
}

Sym2Field Sym2Field::closed_form(ClosedForm fn) {
  Sym2Field f;
  f.backend_ = Backend::closed_form;
  f.eval_ = [fn = std::move(fn)](const Point3& p, int order) {
    return fn(coordinates(p, order)).truncated(order);
  };
  return f;
}

Sym2Field Sym2Field::finite_difference(Sampler sampler, double step) {
  Sym2Field f;
  f.backend_ = Backend::finite_difference;
  f.eval_ = [sampler = std::move(sampler), step](const Point3& p, int order) {
    auto vec = [&sampler](const Point3& q, double* out) {
      const Mat3 m = sampler(q);
      int n = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) out[n++] = m[i][j];
    };
    const auto jets = fd_jets(vec, 6, p, order, step);
    Sym2Jet r;
    int n = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        r.c[i][j] = jets[n++];
        r.c[j][i] = r.c[i][j];
      }
    return r;
  };
  return f;
}

Sym2Field Sym2Field::derived(Evaluator eval, int max_order) {
  Sym2Field f;
  f.backend_ = Backend::derived;
  f.eval_ = std::move(eval);
  f.max_order_ = max_order;
  return f;
}

Sym2Field Sym2Field::constant(const Mat3& m) {
  return closed_form([m](const JetVec& x) { return Sym2Jet::constant(m, x[0].order); });
}

Sym2Jet Sym2Field::jet(const Point3& p, int order) const {
  check_order(order);
  if (order > max_order_)
    throw Error("field supports jets up to order " + std::to_string(max_order_));
  if (!eval_) throw Error("empty tensor field");
  Sym2Jet j = eval_(p, order);
  if (j.order() < order) throw Error("field returned a jet of insufficient order");
  j = j.truncated(order);
  for (int i = 0; i < 3; ++i)
    for (int k = i + 1; k < 3; ++k) j.c[k][i] = j.c[i][k];
  if (!j.finite()) throw Error("non-finite jet value");
  return j;
}

ScalarJet jet_of_scalar(const ScalarField& provider, const Point3& p, int order) {
  return provider.jet(p, order);
}

namespace {

// 4th-order central stencils: first derivative on {-2,-1,1,2}, second on {-2..2},
// third on {-3..3}.
constexpr std::array<std::pair<int, double>, 4> kD1{
    {{-2, 1.0 / 12.0}, {-1, -8.0 / 12.0}, {1, 8.0 / 12.0}, {2, -1.0 / 12.0}}};
constexpr std::array<std::pair<int, double>, 5> kD2{
    {{-2, -1.0 / 12.0}, {-1, 16.0 / 12.0}, {0, -30.0 / 12.0}, {1, 16.0 / 12.0}, {2, -1.0 / 12.0}}};
constexpr std::array<std::pair<int, double>, 6> kD3{
    {{-3, 1.0 / 8.0}, {-2, -1.0}, {-1, 13.0 / 8.0}, {1, -13.0 / 8.0}, {2, 1.0}, {3, -1.0 / 8.0}}};

using Offset = std::array<int, 3>;

}  // namespace

std::vector<ScalarJet> fd_jets(const std::function<void(const Point3&, double*)>& sampler,
                               int n, const Point3& p, int order, double step) {
  check_order(order);
  if (!(step > 0.0)) throw Error("finite-difference step must be positive");
  for (int i = 0; i < 3; ++i)
    if (order > 0 && p[i] + step == p[i]) throw Error("finite-difference step underflow");

  std::map<Offset, std::vector<double>> cache;
  auto sample = [&](const Offset& o) -> const std::vector<double>& {
    auto it = cache.find(o);
    if (it != cache.end()) return it->second;
    std::vector<double> out(n);
    const Point3 q{p[0] + o[0] * step, p[1] + o[1] * step, p[2] + o[2] * step};
    sampler(q, out.data());
    for (double v : out)
      if (!std::isfinite(v)) throw Error("sampler returned a non-finite value");
    return cache.emplace(o, std::move(out)).first->second;
  };

  std::vector<ScalarJet> jets(n);
  const std::vector<double> f0 = sample({0, 0, 0});
  for (int c = 0; c < n; ++c) {
    jets[c] = ScalarJet::constant(f0[c], order);
  }

  auto accumulate = [&](const Offset& o, double w, auto setter) {
    // Differences against the center keep constant samplers exactly flat.
    const auto& f = sample(o);
    for (int c = 0; c < n; ++c) setter(jets[c], w * (f[c] - f0[c]));
  };

  const double h = step;
  if (order >= 1) {
    for (int i = 0; i < 3; ++i)
      for (auto [a, w] : kD1) {
        Offset o{};
        o[i] = a;
        accumulate(o, w / h, [i](ScalarJet& j, double v) { j.grad[i] += v; });
      }
  }
  if (order >= 2) {
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        auto set = [i, j](ScalarJet& J, double v) {
          J.hess[i][j] += v;
          if (i != j) J.hess[j][i] += v;
        };
        if (i == j) {
          for (auto [a, w] : kD2) {
            Offset o{};
            o[i] = a;
            accumulate(o, w / (h * h), set);
          }
        } else {
          for (auto [a, wa] : kD1)
            for (auto [b, wb] : kD1) {
              Offset o{};
              o[i] = a;
              o[j] = b;
              accumulate(o, wa * wb / (h * h), set);
            }
        }
      }
  }
  if (order >= 3) {
    const double h3 = h * h * h;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        for (int k = j; k < 3; ++k) {
          auto set = [i, j, k](ScalarJet& J, double v) {
            const int idx[3] = {i, j, k};
            int perm[3] = {0, 1, 2};
            // Write v into every distinct permutation of (i, j, k) exactly once.
            std::array<Offset, 6> seen{};
            int nseen = 0;
            do {
              const Offset t{idx[perm[0]], idx[perm[1]], idx[perm[2]]};
              bool dup = false;
              for (int s = 0; s < nseen; ++s) dup = dup || seen[s] == t;
              if (!dup) {
                seen[nseen++] = t;
                J.third[t[0]][t[1]][t[2]] += v;
              }
            } while (std::next_permutation(perm, perm + 3));
          };
          if (i == j && j == k) {
            for (auto [a, w] : kD3) {
              Offset o{};
              o[i] = a;
              accumulate(o, w / h3, set);
            }
          } else if (i == j || j == k) {
            const int twice = (i == j) ? i : k;
            const int once = (i == j) ? k : i;
            for (auto [a, wa] : kD2)
              for (auto [b, wb] : kD1) {
                Offset o{};
                o[twice] = a;
                o[once] = b;
                accumulate(o, wa * wb / h3, set);
              }
          } else {
            for (auto [a, wa] : kD1)
              for (auto [b, wb] : kD1)
                for (auto [c, wc] : kD1) {
                  Offset o{};
                  o[i] = a;
                  o[j] = b;
                  o[k] = c;
                  accumulate(o, wa * wb * wc / h3, set);
                }
          }
        }
  }
  return jets;
}

ScalarJet fd_jet_oracle(const ScalarField::Sampler& sampler, const Point3& p, int order,
                        double step) {
  auto vec = [&sampler](const Point3& q, double* out) { out[0] = sampler(q); };
  return fd_jets(vec, 1, p, order, step)[0];
}

}  // namespace jangbench
