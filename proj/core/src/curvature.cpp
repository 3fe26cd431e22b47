#include "jangbench/curvature.hpp"

#include <cmath>

namespace jangbench {

double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 inverse3(const Mat3& m) {
  const double d = det3(m);
  if (!(std::abs(d) >= kMinMetricDet)) throw Error("singular metric (det below 1e-12)");
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int a = (j + 1) % 3, b = (j + 2) % 3, c = (i + 1) % 3, e = (i + 2) % 3;
      r[i][j] = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) / d;
    }
  return r;
}

Sym2Jet inverse_jet(const Sym2Jet& g) {
  const double dv = det3(g.values());
  if (!(std::abs(dv) >= kMinMetricDet)) throw Error("singular metric (det below 1e-12)");
  const auto& m = g.c;
  std::array<std::array<ScalarJet, 3>, 3> cof;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int a = (j + 1) % 3, b = (j + 2) % 3, c = (i + 1) % 3, e = (i + 2) % 3;
      cof[i][j] = m[a][c] * m[b][e] - m[a][e] * m[b][c];
    }
  const ScalarJet det = m[0][0] * cof[0][0] + m[0][1] * cof[1][0] + m[0][2] * cof[2][0];
  const ScalarJet inv_det = 1.0 / det;
  Sym2Jet r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      r.c[i][j] = cof[i][j] * inv_det;
      r.c[j][i] = r.c[i][j];
    }
  return r;
}

ChristoffelJet christoffel_jet(const Sym2Jet& g, const Sym2Jet& g_inv) {
  // First-kind symbols [ij,m] = 1/2 (g_im,j + g_jm,i - g_ij,m).
  std::array<std::array<std::array<ScalarJet, 3>, 3>, 3> first;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int m = 0; m < 3; ++m) {
        first[i][j][m] =
            0.5 * (partial(g.c[i][m], j) + partial(g.c[j][m], i) - partial(g.c[i][j], m));
        first[j][i][m] = first[i][j][m];
      }
  ChristoffelJet out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        ScalarJet s = g_inv.c[k][0] * first[i][j][0];
        s += g_inv.c[k][1] * first[i][j][1];
        s += g_inv.c[k][2] * first[i][j][2];
        out[i][j][k] = s;
        out[j][i][k] = s;
      }
  return out;
}

Christoffel3 values(const ChristoffelJet& gj) {
  Christoffel3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c.gamma[i][j][k] = gj[i][j][k].value;
  return c;
}

Christoffel3 christoffel(const Sym2Jet& g, const Mat3& g_inv) {
  if (g.order() < 1) throw Error("christoffel: metric jet of order >= 1 required");
  Christoffel3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int m = 0; m < 3; ++m)
          s += g_inv[k][m] * (g.d1(i, m, j) + g.d1(j, m, i) - g.d1(i, j, m));
        c.gamma[i][j][k] = 0.5 * s;
      }
  return c;
}

Christoffel3 christoffel(const Sym2Jet& g) { return christoffel(g, inverse3(g.values())); }

CurvatureAtPoint curvature_from_christoffel(const ChristoffelJet& G, const Mat3& g_inv) {
  CurvatureAtPoint out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = G[j][k][l].grad[i] - G[i][k][l].grad[j];
          for (int a = 0; a < 3; ++a)
            s += G[j][k][a].value * G[i][a][l].value - G[i][k][a].value * G[j][a][l].value;
          out.riemann[i][j][k][l] = s;
        }
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += out.riemann[i][j][k][i];
      out.ricci[j][k] = s;
    }
  double R = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) R += g_inv[j][k] * out.ricci[j][k];
  out.scalar = R;
  return out;
}

CurvatureAtPoint riemann_ricci_scalar(const Sym2Jet& g) {
  if (g.order() < 2) throw Error("riemann_ricci_scalar: metric jet of order 2 required");
  const Sym2Jet gi = inverse_jet(g.truncated(2));
  const ChristoffelJet G = christoffel_jet(g.truncated(2), gi);
  return curvature_from_christoffel(G, gi.values());
}

Sym2Jet hessian_jet(const ChristoffelJet& gamma, const ScalarJet& s) {
  if (s.order < 1) throw Error("hessian: scalar jet of order 2 required");
  JetVec ds{partial(s, 0), partial(s, 1), partial(s, 2)};
  Sym2Jet h;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      ScalarJet v = partial(ds[i], j);
      for (int k = 0; k < 3; ++k) v -= gamma[i][j][k] * ds[k];
      h.c[i][j] = v;
      h.c[j][i] = v;
    }
  return h;
}

HessianLaplacian hessian_laplacian(const Sym2Jet& g, const ScalarJet& s) {
  if (s.order < 2) throw Error("hessian_laplacian: scalar jet of order 2 required");
  const Mat3 gi = inverse3(g.values());
  const Christoffel3 G = christoffel(g, gi);
  HessianLaplacian out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = s.hess[i][j];
      for (int k = 0; k < 3; ++k) v -= G.gamma[i][j][k] * s.grad[k];
      out.hess[i][j] = v;
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.laplacian += gi[i][j] * out.hess[i][j];
  return out;
}

Vec3 divergence_sym2(const Christoffel3& G, const Mat3& gi, const Sym2Jet& T) {
  if (T.order() < 1) throw Error("divergence: tensor jet of order 1 required");
  Vec3 out{};
  for (int j = 0; j < 3; ++j) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int m = 0; m < 3; ++m) {
        double t = T.d1(m, j, i);
        for (int k = 0; k < 3; ++k)
          t -= G.gamma[i][m][k] * T.comp(k, j) + G.gamma[i][j][k] * T.comp(m, k);
        s += gi[i][m] * t;
      }
    out[j] = s;
  }
  return out;
}

Vec3 divergence_sym2(const Sym2Jet& g, const Sym2Jet& T) {
  const Mat3 gi = inverse3(g.values());
  return divergence_sym2(christoffel(g, gi), gi, T);
}

double divergence_covector(const Christoffel3& G, const Mat3& gi, const JetVec& w) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (w[j].order < 1) throw Error("divergence: covector jet of order 1 required");
      double t = w[j].grad[i];
      for (int k = 0; k < 3; ++k) t -= G.gamma[i][j][k] * w[k].value;
      s += gi[i][j] * t;
    }
  return s;
}

double level_set_mean_curvature(const Sym2Jet& g, const ScalarJet& s) {
  const Mat3 gi = inverse3(g.values());
  const HessianLaplacian hl = hessian_laplacian(g, s);
  const Vec3 up = raise(gi, grad_of(s));
  const double n2 = up[0] * s.grad[0] + up[1] * s.grad[1] + up[2] * s.grad[2];
  if (!(n2 > 1e-300)) throw Error("level set: vanishing gradient");
  const double n = std::sqrt(n2);
  return (hl.laplacian - quad(hl.hess, up, up) / n2) / n;
}

Vec3 raise(const Mat3& gi, const Vec3& w) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += gi[i][j] * w[j];
  return r;
}

double contract(const Mat3& gi, const Vec3& a, const Vec3& b) { return quad(gi, a, b); }

double quad(const Mat3& m, const Vec3& a, const Vec3& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += m[i][j] * a[i] * b[j];
  return s;
}

Vec3 grad_of(const ScalarJet& s) { return s.grad; }

Vec3 values(const JetVec& w) { return {w[0].value, w[1].value, w[2].value}; }

}  // namespace jangbench
