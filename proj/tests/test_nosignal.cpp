#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nsbound/discrim.hpp"
#include "nsbound/nosignal.hpp"

using namespace nsbound;

namespace {

constexpr double kPi = std::numbers::pi;

// Exhaustive vertex enumeration of max (1/N) sum P_k, sum p_k P_k <= 1, 0 <= P_k <= 1.
// A vertex has every coordinate at a bound except possibly one, fixed by the budget.
double lp_by_vertices(const std::vector<double>& p) {
  const std::size_t n = p.size();
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double cost = 0.0, value = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (mask & (1u << k)) {
        cost += p[k];
        value += 1.0;
      }
    if (cost > 1.0 + 1e-15) continue;
    best = std::max(best, value);
    for (std::size_t f = 0; f < n; ++f) {
      if (mask & (1u << f)) continue;
      const double x = (1.0 - cost) / p[f];
      if (x >= 0.0 && x <= 1.0) best = std::max(best, value + x);
    }
  }
  return best / static_cast<double>(n);
}

}  // namespace

TEST_CASE("qubit_delta_states") {
  const auto d = qubit_delta_states(3, kPi / 2);
  const BlochVector b0 = bloch_from_density(d[0]);
  CHECK(b0.x == doctest::Approx(-1.0));
  CHECK(std::abs(b0.y) <= 1e-15);
  CHECK(std::abs(b0.z) <= 1e-15);

  for (int n = 2; n <= 6; ++n) {
    for (double theta : {0.4, 1.5, 2.8, -1.0, 4.0}) {
      const auto deltas = qubit_delta_states(n, theta);
      const ComplexMatrix v = qubit_family_rotation(n);
      for (int j = 0; j < n; ++j) {
        CHECK(std::abs(bloch_from_density(deltas[j]).norm() - 1.0) <= 1e-12);
        CHECK(frobenius_distance(conjugate(v, deltas[j].matrix()), deltas[(j + 1) % n].matrix()) <= 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(qubit_delta_states(3, 0.0), std::domain_error);
  CHECK_THROWS_AS(qubit_delta_states(3, kPi), std::domain_error);
}

TEST_CASE("build_qubit_family weights and averages") {
  const auto trine = build_qubit_family(3, kPi / 2, 1.0 / 3.0);
  for (double p : trine.target_weights()) CHECK(p == doctest::Approx(0.75).epsilon(1e-15));
  const auto pure = build_qubit_family(4, kPi / 2, 1.0);
  for (double p : pure.target_weights()) CHECK(p == doctest::Approx(0.5).epsilon(1e-15));

  for (int n = 2; n <= 6; ++n)
    for (double theta : {0.3, 1.1, 2.2, 3.0, -0.7})
      for (double r : {0.0, 0.5, 1.0}) {
        const auto fam = build_qubit_family(n, theta, r);
        CHECK(fam.max_average_distance() <= 1e-12);
        const BlochVector avg = bloch_from_density(DensityOperator(fam.decompositions()[0].average()));
        CHECK(std::hypot(avg.x, avg.y) <= 1e-12);
      }
  CHECK_THROWS_AS(build_qubit_family(3, 0.0, 0.5), std::domain_error);
}

TEST_CASE("DecompositionFamily rejects different averages") {
  const auto a = density_from_bloch({0, 0, 1});
  const auto b = density_from_bloch({0, 0, -1});
  const auto mixed = density_from_bloch({0, 0, 0});
  Decomposition d0({{0.5, a}, {0.5, b}}, 0);
  Decomposition d1({{1.0, mixed}}, 0);
  CHECK_NOTHROW(DecompositionFamily({d0, d1}));
  Decomposition d2({{0.6, a}, {0.4, b}}, 0);
  CHECK_THROWS_AS(DecompositionFamily({d0, d2}), std::invalid_argument);
  CHECK_THROWS_AS(DecompositionFamily({d0}), std::invalid_argument);
  CHECK_THROWS_AS(Decomposition({{0.5, a}, {0.4, b}}, 0), std::invalid_argument);
  CHECK_THROWS_AS(Decomposition({{0.5, a}, {0.5, b}}, 2), std::invalid_argument);
}

TEST_CASE("lp_bound examples") {
  const auto trine = lp_bound({0.75, 0.75, 0.75});
  CHECK(trine.success_upper == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK(trine.error_lower == doctest::Approx(5.0 / 9.0).epsilon(1e-15));

  const auto loose = lp_bound({0.25, 0.25, 0.25, 0.25});
  CHECK(loose.success_upper == 1.0);

  const auto two = lp_bound({0.9, 0.3});
  CHECK(two.allocation[0] == doctest::Approx(7.0 / 9.0));
  CHECK(two.allocation[1] == doctest::Approx(1.0));
  CHECK(two.success_upper == doctest::Approx(8.0 / 9.0));

  CHECK_THROWS_AS(lp_bound({0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(lp_bound(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("lp_bound matches vertex enumeration and its invariants") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> p(size(rng));
    for (auto& x : p) x = u(rng);
    const auto b = lp_bound(p);
    CHECK(std::abs(b.success_upper - lp_by_vertices(p)) <= 1e-12);

    double spent = 0.0, total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      CHECK(b.allocation[k] >= 0.0);
      CHECK(b.allocation[k] <= 1.0);
      spent += p[k] * b.allocation[k];
      total += b.allocation[k];
    }
    CHECK(spent <= 1.0 + 1e-12);
    CHECK(std::abs(total / p.size() - b.success_upper) <= 1e-15);
    CHECK(b.error_lower == doctest::Approx(1.0 - b.success_upper));

    // Raising any weight never raises the bound.
    auto q = p;
    q[trial % q.size()] += 0.1;
    CHECK(lp_bound(q).success_upper <= b.success_upper + 1e-15);
  }

  for (int n = 1; n <= 6; ++n)
    for (double p : {0.05, 0.2, 0.5, 0.9})
      CHECK(lp_bound(std::vector<double>(n, p)).success_upper == std::min(1.0, 1.0 / (n * p)));
}

TEST_CASE("min_over_decompositions") {
  const double theta = 1.1, r = 2.0 / 3.0;
  const int n = 4;
  const auto canonical = build_qubit_family(n, theta, r);
  const auto single = min_over_decompositions({canonical});
  CHECK(single.bound.success_upper == lp_bound(canonical).success_upper);
  CHECK(single.best_candidate == 0);

  // Mix every decomposition with extra I/2 weight: same average up to a common
  // mixing, smaller target weight, so never better than the canonical family.
  const auto mixed_state = density_from_bloch({0, 0, 0});
  std::vector<DecompositionFamily> candidates;
  for (double eps : {0.1, 0.3}) {
    std::vector<Decomposition> decs;
    for (const auto& d : canonical.decompositions()) {
      std::vector<WeightedState> members;
      for (const auto& m : d.members()) members.push_back({(1.0 - eps) * m.weight, m.state});
      members.push_back({eps, mixed_state});
      decs.emplace_back(std::move(members), 0);
    }
    candidates.emplace_back(std::move(decs));
  }
  candidates.push_back(canonical);
  const auto best = min_over_decompositions(candidates);
  CHECK(best.best_candidate == 2);
  CHECK(std::abs(best.bound.success_upper - (1.0 + r * std::sin(theta)) / n) <= 1e-12);

  CHECK_THROWS_AS(min_over_decompositions({}), std::invalid_argument);
  CHECK_THROWS_AS(min_over_decompositions({canonical, build_qubit_family(n, theta, 0.5)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(min_over_decompositions({canonical, build_qubit_family(3, theta, r)}),
                  std::invalid_argument);
}

TEST_CASE("qubit_ns_bound") {
  const auto trine = qubit_ns_bound(3, kPi / 2, 1.0 / 3.0);
  CHECK(std::abs(trine.error_lower - 5.0 / 9.0) <= 1e-12);
  CHECK(qubit_ns_bound(2, kPi / 2, 1.0).success_upper == 1.0);
  CHECK(qubit_ns_bound(5, 0.0, 1.0).success_upper == doctest::Approx(0.2));
  CHECK(qubit_ns_bound(5, kPi, 1.0).success_upper == doctest::Approx(0.2));
  CHECK_THROWS_AS(qubit_ns_bound(1, 0.3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(qubit_ns_bound(3, 0.3, 1.1), std::invalid_argument);

  for (int n = 2; n <= 6; ++n)
    for (int i = 1; i < 25; ++i) {
      const double theta = kPi * i / 25.0;
      for (double r : {1.0 / 3.0, 2.0 / 3.0, 1.0}) {
        const double lp = lp_bound(build_qubit_family(n, theta, r)).success_upper;
        CHECK(std::abs(qubit_ns_bound(n, theta, r).success_upper - lp) <= 1e-12);
        CHECK(std::abs(lp - (1.0 + r * std::abs(std::sin(theta))) / n) <= 1e-12);
      }
    }
}

TEST_CASE("spin sigma states and beta_max") {
  const SpinSystem one = spin_generators(2);
  const auto tiny = spin_sigma_states(one, 1e-9, {0.0, 1.0});
  CHECK(frobenius_distance(tiny[1].matrix(), (1.0 / 3.0) * ComplexMatrix::identity(3)) <= 1e-9);
  const auto edge = spin_sigma_states(one, 1.0 / std::sqrt(2.0), {0.0});
  CHECK(std::abs(min_eigenvalue(edge[0].matrix())) <= 1e-10);
  CHECK_THROWS_AS(spin_sigma_states(one, 0.8, {0.0}), std::domain_error);

  CHECK(std::abs(beta_max(one) - 1.0 / std::sqrt(2.0)) <= 1e-9);
  CHECK(std::abs(beta_max(spin_generators(1)) - std::sqrt(2.0)) <= 1e-9);
  // The extreme eigenvalue of (J1 + J3) is -sqrt(2) j.
  for (int two_j = 1; two_j <= 6; ++two_j)
    CHECK(std::abs(beta_max(spin_generators(two_j)) - 2.0 / (std::sqrt(2.0) * two_j)) <= 1e-9);
}

TEST_CASE("spin_ns_bound") {
  const SpinSystem one = spin_generators(2);
  const std::vector<double> equal{0.0, 2 * kPi / 3, 4 * kPi / 3};
  for (double alpha : {0.1, 0.3, 0.5})
    CHECK(std::abs(spin_ns_bound(one, alpha, equal).success_upper -
                   (1.0 + std::sqrt(2.0) * alpha) / 3.0) <= 1e-10);
  CHECK(spin_ns_bound(one, 0.0, equal).success_upper == doctest::Approx(1.0 / 3.0));
  CHECK(std::abs(spin_ns_bound(one, -0.3, equal).success_upper -
                 (1.0 + std::sqrt(2.0) * 0.3) / 3.0) <= 1e-10);

  const auto fam = build_spin_family(one, 0.3, beta_max(one), equal);
  CHECK(fam.max_average_distance() <= 1e-10);
  // The common average lies along J3: diagonal in the |j,m> basis.
  const ComplexMatrix& avg = fam.decompositions()[0].average();
  CHECK(std::abs(avg(0, 1)) + std::abs(avg(1, 2)) + std::abs(avg(0, 2)) <= 1e-12);

  CHECK_THROWS_AS(spin_ns_bound(one, 0.9, equal), std::domain_error);

  // Also valid for spin-3/2 with uneven angles: bound 1/(N p) with p = b/(a+b).
  const SpinSystem three_half = spin_generators(3);
  const std::vector<double> uneven{0.0, 1.0, 2.5, 4.0};
  const double b = beta_max(three_half);
  CHECK(std::abs(spin_ns_bound(three_half, 0.2, uneven).success_upper - (0.2 + b) / (4.0 * b)) <= 1e-12);
}
