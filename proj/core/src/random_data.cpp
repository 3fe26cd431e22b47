#include "jangbench/random_data.hpp"

#include <random>

namespace jangbench {

namespace {

struct Mode {
  double a = 0.0, b = 0.0;
  Vec3 w{};
};

std::vector<Mode> draw_modes(std::mt19937_64& rng, double amplitude, int terms,
                             double max_frequency) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> P(0.0, 6.283185307179586);
  std::vector<Mode> modes(terms);
  double total = 0.0;
  for (auto& m : modes) {
    m.a = U(rng);
    m.b = P(rng);
    for (double& w : m.w) w = max_frequency * U(rng);
    total += std::abs(m.a);
  }
  if (total > 0.0)
    for (auto& m : modes) m.a *= amplitude / total;
  return modes;
}

ScalarJet eval_modes(const std::vector<Mode>& modes, double offset, const JetVec& x) {
  ScalarJet s = ScalarJet::constant(offset, x[0].order);
  for (const auto& m : modes) s += m.a * sin(m.w[0] * x[0] + m.w[1] * x[1] + m.w[2] * x[2] + m.b);
  return s;
}

}  // namespace

ScalarField random_trig_scalar(std::uint64_t seed, double offset, double amplitude, int terms,
                               double max_frequency) {
  std::mt19937_64 rng(seed);
  auto modes = draw_modes(rng, amplitude, terms, max_frequency);
  return ScalarField::closed_form(
      [modes, offset](const JetVec& x) { return eval_modes(modes, offset, x); });
}

namespace {

Sym2Field sym2_with_diagonal(std::uint64_t seed, double amplitude, double diagonal) {
  std::mt19937_64 rng(seed);
  std::array<std::vector<Mode>, 6> comps;
  for (auto& c : comps) c = draw_modes(rng, amplitude, 3, 1.5);
  return Sym2Field::closed_form([comps, diagonal](const JetVec& x) {
    Sym2Jet s;
    int n = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        s.c[i][j] = eval_modes(comps[n++], i == j ? diagonal : 0.0, x);
        s.c[j][i] = s.c[i][j];
      }
    return s;
  });
}

}  // namespace

Sym2Field random_sym2(std::uint64_t seed, double amplitude) {
  return sym2_with_diagonal(seed, amplitude, 0.0);
}

Sym2Field random_metric(std::uint64_t seed, double amplitude) {
  if (!(amplitude < 1.0 / 3.0)) throw Error("random metric amplitude must be below 1/3");
  return sym2_with_diagonal(seed, amplitude, 1.0);
}

RandomConfiguration random_configuration(std::uint64_t seed) {
  std::mt19937_64 seeder(seed);
  RandomConfiguration c;
  c.seed = seed;
  c.data.domain = "random trigonometric data on R^3";
  c.data.g = random_metric(seeder(), 0.15);
  c.data.k = random_sym2(seeder(), 0.5);
  c.pair.f = random_trig_scalar(seeder(), 0.0, 1.0);
  c.pair.phi = random_trig_scalar(seeder(), 1.0, 0.3);
  c.k_test = random_sym2(seeder(), 0.7);
  return c;
}

CauchyData data_with_k_equal_h(const Sym2Field& g, const JangPair& pair) {
  CauchyData data;
  data.domain = "k = h";
  data.g = g;
  // The jet of h at order n needs g at n + 1, phi at n + 1 and f at n + 2.
  data.k = Sym2Field::derived(
      [g, pair](const Point3& p, int order) {
        const DeformationJets d = deformation_jets(
            g.jet(p, order + 1), Sym2Jet::constant({}, order), pair.f.jet(p, order + 2),
            pair.phi.jet(p, order + 1));
        return d.h;
      },
      1);
  return data;
}

std::vector<Point3> random_points(std::uint64_t seed, int n, double half_width) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-half_width, half_width);
  std::vector<Point3> pts(n);
  for (auto& p : pts) p = {U(rng), U(rng), U(rng)};
  return pts;
}

}  // namespace jangbench
