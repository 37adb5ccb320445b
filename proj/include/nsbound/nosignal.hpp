#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nsbound/matrix.hpp"
#include "nsbound/states.hpp"

namespace nsbound {

/// Frobenius tolerance for the identical-average condition.
inline constexpr double kAverageTol = 1e-10;

struct WeightedState {
  double weight;
  DensityOperator state;
};

/// One convex decomposition of an average state; `target()` is the member
/// whose detection probability enters the bound.
class Decomposition {
 public:
  Decomposition(std::vector<WeightedState> members, std::size_t target_index);

  const std::vector<WeightedState>& members() const { return members_; }
  std::size_t target_index() const { return target_; }
  const WeightedState& target() const { return members_[target_]; }
  double target_weight() const { return members_[target_].weight; }
  const ComplexMatrix& average() const { return average_; }

 private:
  std::vector<WeightedState> members_;
  std::size_t target_;
  ComplexMatrix average_;
};

/// N decompositions of one common average. Construction rejects families
/// whose averages differ by more than kAverageTol in Frobenius norm.
class DecompositionFamily {
 public:
  explicit DecompositionFamily(std::vector<Decomposition> decompositions);

  std::size_t size() const { return decompositions_.size(); }
  const std::vector<Decomposition>& decompositions() const { return decompositions_; }
  const std::vector<double>& target_weights() const { return target_weights_; }
  /// Largest pairwise Frobenius distance between averages.
  double max_average_distance() const { return max_distance_; }

 private:
  std::vector<Decomposition> decompositions_;
  std::vector<double> target_weights_;
  double max_distance_ = 0.0;
};

struct NoSignalBound {
  double success_upper = 0.0;
  double error_lower = 1.0;
  /// Detection probabilities P(k|rho_k) attaining the optimum of the budget program.
  std::vector<double> allocation;
};

struct MinimizedBound {
  NoSignalBound bound;
  std::size_t best_candidate = 0;
};

/// Equatorial pure states delta_j opposite the azimuth of rho_j.
/// Throws std::domain_error when sin(theta) vanishes.
std::vector<DensityOperator> qubit_delta_states(int n, double theta);

/// Decomposition k = p rho_k + (1 - p) delta_k with p = 1 / (1 + r |sin theta|).
DecompositionFamily build_qubit_family(int n, double theta, double r);

/// max (1/N) sum P_k  s.t.  sum p_k P_k <= 1, 0 <= P_k <= 1.
NoSignalBound lp_bound(const DecompositionFamily& family);
/// Same program on bare target weights.
NoSignalBound lp_bound(const std::vector<double>& target_weights);

/// Smallest lp_bound over candidate families for the same targets.
MinimizedBound min_over_decompositions(const std::vector<DecompositionFamily>& families);

/// (1 + r |sin theta|) / N, clamped to [0, 1].
NoSignalBound qubit_ns_bound(int n, double theta, double r);

/// sigma_k = U_k sigma_0 U_k^dagger, sigma_0 = (I + beta(s J1 + J3)) / (2j+1), where
/// s = -1 only when `flip_x` is set (used to pair with negative alpha).
std::vector<DensityOperator> spin_sigma_states(const SpinSystem& sys, double beta,
                                               const std::vector<double>& thetas,
                                               bool flip_x = false);

/// Largest beta for which (I + beta(J1 + J3)) / (2j+1) stays PSD.
double beta_max(const SpinSystem& sys);

/// Decomposition k = p rho_k + (1 - p) sigma_k, p = beta / (|alpha| + beta).
DecompositionFamily build_spin_family(const SpinSystem& sys, double alpha, double beta,
                                      const std::vector<double>& thetas);

/// lp_bound of build_spin_family at beta = beta_max.
NoSignalBound spin_ns_bound(const SpinSystem& sys, double alpha, const std::vector<double>& thetas);

}  // namespace nsbound
