#pragma once

// Seeded analytic test data: trigonometric polynomials with bounded
// coefficients, closed-form so that every jet is exact.

#include <cstdint>

#include "jangbench/jang_deformation.hpp"

namespace jangbench {

// offset + sum of `terms` modes a_n sin(w_n . x + b_n), with sum |a_n| <= amplitude.
ScalarField random_trig_scalar(std::uint64_t seed, double offset, double amplitude,
                               int terms = 3, double max_frequency = 1.5);

// Symmetric tensor whose components are independent random trig polynomials of
// amplitude at most `amplitude`.
Sym2Field random_sym2(std::uint64_t seed, double amplitude);

// delta + P with |P_ij| <= amplitude; positive definite for amplitude < 1/3.
Sym2Field random_metric(std::uint64_t seed, double amplitude = 0.15);

struct RandomConfiguration {
  std::uint64_t seed = 0;
  CauchyData data;
  JangPair pair;
  Sym2Field k_test;
};

// Random (g, k, f, phi) with phi in [0.7, 1.3], together with an independent
// symmetric k_test.
RandomConfiguration random_configuration(std::uint64_t seed);

// Cauchy data whose k equals the second fundamental form h induced by `pair`,
// so the generalized Jang equation holds identically. k carries first-order jets.
CauchyData data_with_k_equal_h(const Sym2Field& g, const JangPair& pair);

// Sample points uniformly in the cube [-half_width, half_width]^3.
std::vector<Point3> random_points(std::uint64_t seed, int n, double half_width = 1.0);

}  // namespace jangbench
