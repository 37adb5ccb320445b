#include "nsbound/nosignal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace nsbound {

namespace {

constexpr double kDegenerateSin = 1e-12;
constexpr double kBetaTol = 1e-10;

NoSignalBound make_bound(double success, std::vector<double> allocation) {
  success = std::clamp(success, 0.0, 1.0);
  return NoSignalBound{success, 1.0 - success, std::move(allocation)};
}

}  // namespace

Decomposition::Decomposition(std::vector<WeightedState> members, std::size_t target_index)
    : members_(std::move(members)), target_(target_index) {
  if (members_.empty()) throw std::invalid_argument("decomposition: no members");
  if (target_ >= members_.size()) throw std::invalid_argument("decomposition: bad target index");
  const std::size_t d = members_.front().state.dim();
  average_ = ComplexMatrix(d);
  double total = 0.0;
  for (const auto& m : members_) {
    if (!(m.weight >= 0.0)) throw std::invalid_argument("decomposition: negative weight");
    if (m.state.dim() != d) throw std::invalid_argument("decomposition: dimension mismatch");
    total += m.weight;
    average_ += m.weight * m.state.matrix();
  }
  if (std::abs(total - 1.0) > kPriorTol)
    throw std::invalid_argument("decomposition: weights do not sum to 1");
}

DecompositionFamily::DecompositionFamily(std::vector<Decomposition> decompositions)
    : decompositions_(std::move(decompositions)) {
  if (decompositions_.size() < 2)
    throw std::invalid_argument("decomposition family: need at least 2 decompositions");
  const std::size_t d = decompositions_.front().average().dim();
  for (std::size_t a = 0; a < decompositions_.size(); ++a) {
    if (decompositions_[a].average().dim() != d)
      throw std::invalid_argument("decomposition family: dimension mismatch");
    target_weights_.push_back(decompositions_[a].target_weight());
    for (std::size_t b = 0; b < a; ++b)
      max_distance_ = std::max(max_distance_, frobenius_distance(decompositions_[a].average(),
                                                                 decompositions_[b].average()));
  }
  if (max_distance_ > kAverageTol)
    throw std::invalid_argument("decomposition family: averages differ by " +
                                std::to_string(max_distance_) + " (Frobenius)");
}

std::vector<DensityOperator> qubit_delta_states(int n, double theta) {
  if (n < 2) throw std::invalid_argument("delta states: N must be >= 2");
  const double st = std::sin(theta);
  if (std::abs(st) < kDegenerateSin)
    throw std::domain_error("delta states: sin(theta) = 0, the construction is degenerate");
  const double sgn = st > 0.0 ? 1.0 : -1.0;
  std::vector<DensityOperator> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / n;
    out.push_back(density_from_bloch({-sgn * std::cos(phi), -sgn * std::sin(phi), 0.0}));
  }
  return out;
}

DecompositionFamily build_qubit_family(int n, double theta, double r) {
  auto deltas = qubit_delta_states(n, theta);
  const Ensemble rhos = symmetric_qubit_family(n, theta, r);
  const double p = 1.0 / (1.0 + r * std::abs(std::sin(theta)));
  std::vector<Decomposition> decs;
  decs.reserve(n);
  for (int k = 0; k < n; ++k)
    decs.emplace_back(std::vector<WeightedState>{{p, rhos[k].state}, {1.0 - p, deltas[k]}}, 0);
  return DecompositionFamily(std::move(decs));
}

NoSignalBound lp_bound(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("lp_bound: empty weight list");
  for (double p : weights)
    if (!(p > 0.0)) throw std::invalid_argument("lp_bound: target weights must be positive");

  const bool equal = std::all_of(weights.begin(), weights.end(),
                                 [&](double p) { return p == weights.front(); });
  if (equal) {
    const double each = std::min(1.0, 1.0 / (static_cast<double>(n) * weights.front()));
    return make_bound(each, std::vector<double>(n, each));
  }

  // Fractional knapsack: unit value per variable, cost p_k, so cheapest first.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });
  std::vector<double> alloc(n, 0.0);
  double budget = 1.0;
  for (std::size_t k : order) {
    if (budget <= 0.0) break;
    const double take = std::min(1.0, budget / weights[k]);
    alloc[k] = take;
    budget -= take * weights[k];
  }
  const double total = std::accumulate(alloc.begin(), alloc.end(), 0.0);
  return make_bound(total / static_cast<double>(n), std::move(alloc));
}

NoSignalBound lp_bound(const DecompositionFamily& family) {
  return lp_bound(family.target_weights());
}

MinimizedBound min_over_decompositions(const std::vector<DecompositionFamily>& families) {
  if (families.empty()) throw std::invalid_argument("min_over_decompositions: no candidates");
  const auto& ref = families.front();
  for (std::size_t f = 1; f < families.size(); ++f) {
    const auto& fam = families[f];
    if (fam.size() != ref.size())
      throw std::invalid_argument("min_over_decompositions: candidate " + std::to_string(f) +
                                  " has a different number of targets");
    for (std::size_t k = 0; k < ref.size(); ++k) {
      const auto& a = ref.decompositions()[k].target().state.matrix();
      const auto& b = fam.decompositions()[k].target().state.matrix();
      if (a.dim() != b.dim() || frobenius_distance(a, b) > kAverageTol)
        throw std::invalid_argument("min_over_decompositions: candidate " + std::to_string(f) +
                                    " targets a different state at index " + std::to_string(k));
    }
  }
  MinimizedBound best{lp_bound(ref), 0};
  for (std::size_t f = 1; f < families.size(); ++f) {
    auto b = lp_bound(families[f]);
    if (b.success_upper < best.bound.success_upper) best = {std::move(b), f};
  }
  return best;
}

NoSignalBound qubit_ns_bound(int n, double theta, double r) {
  if (n < 2) throw std::invalid_argument("qubit_ns_bound: N must be >= 2");
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("qubit_ns_bound: r outside [0,1]");
  const double st = std::abs(std::sin(theta));
  const double inv_n = 1.0 / static_cast<double>(n);
  if (st < kDegenerateSin) return make_bound(inv_n, std::vector<double>(n, 1.0));
  const double each = std::min(1.0, (1.0 + r * st) * inv_n);
  return make_bound(each, std::vector<double>(n, each));
}

std::vector<DensityOperator> spin_sigma_states(const SpinSystem& sys, double beta,
                                               const std::vector<double>& thetas, bool flip_x) {
  const DensityOperator sigma0 = spin_state(sys, {flip_x ? -beta : beta, 0.0, beta});
  std::vector<DensityOperator> out;
  out.reserve(thetas.size());
  for (double t : thetas)
    out.emplace_back(conjugate(unitary_from_generator(t, sys.j3), sigma0.matrix()));
  return out;
}

double beta_max(const SpinSystem& sys) {
  const ComplexMatrix axis = sys.j1 + sys.j3;
  const double scale = 1.0 / static_cast<double>(sys.dim());
  const ComplexMatrix id = ComplexMatrix::identity(sys.dim());
  auto lowest = [&](double beta) { return min_eigenvalue(scale * (id + beta * axis)); };

  double hi = 1.0;
  while (lowest(hi) >= 0.0) hi *= 2.0;

  constexpr int kGrid = 16;
  double prev = lowest(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double cur = lowest(hi * i / kGrid);
    if (cur > prev + 1e-12) throw NumericalError("beta_max: min eigenvalue not monotone in beta");
    prev = cur;
  }

  double lo = 0.0;
  while (hi - lo > kBetaTol) {
    const double mid = 0.5 * (lo + hi);
    (lowest(mid) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

DecompositionFamily build_spin_family(const SpinSystem& sys, double alpha, double beta,
                                      const std::vector<double>& thetas) {
  if (!(beta > 0.0)) throw std::invalid_argument("build_spin_family: beta must be positive");
  const Ensemble rhos = spin_family(sys, alpha, thetas);
  const auto sigmas = spin_sigma_states(sys, beta, thetas, alpha < 0.0);
  const double p = beta / (std::abs(alpha) + beta);
  std::vector<Decomposition> decs;
  decs.reserve(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k)
    decs.emplace_back(std::vector<WeightedState>{{p, rhos[k].state}, {1.0 - p, sigmas[k]}}, 0);
  return DecompositionFamily(std::move(decs));
}

NoSignalBound spin_ns_bound(const SpinSystem& sys, double alpha,
                            const std::vector<double>& thetas) {
  // (|alpha| + beta) / (beta N) decreases in beta, so the largest admissible beta wins.
  return lp_bound(build_spin_family(sys, alpha, beta_max(sys), thetas));
}

}  // namespace nsbound
