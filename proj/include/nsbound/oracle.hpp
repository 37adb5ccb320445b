#pragma once

#include <cstdint>
#include <vector>

#include "nsbound/discrim.hpp"
#include "nsbound/states.hpp"

namespace nsbound {

struct OracleOptions {
  int max_iters = 10000;
  double tol = kCertificateTol;
  /// Keep the per-iteration success values (for monotonicity checks).
  bool record_history = false;
};

struct OracleResult {
  Povm povm;
  double success = 0.0;
  double certificate_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Set when the update operator lost rank and the pseudo-inverse was used.
  bool rank_deficient = false;
  std::vector<double> history;
};

/// Fixed-point iteration on the minimum-error optimality conditions,
/// started from `start` (or {I/N} when empty). Stops once the certificate
/// gap is at least -tol; non-convergence is reported, never thrown.
OracleResult optimize_povm(const Ensemble& ensemble, const OracleOptions& options = {},
                           const std::vector<ComplexMatrix>& start = {});

/// Uniform start plus (restarts - 1) seeded random starts; best certified result.
OracleResult random_restarts(const Ensemble& ensemble, int restarts, std::uint64_t seed,
                             const OracleOptions& options = {});

/// SplitMix64, usable as a standard uniform random bit generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

 private:
  std::uint64_t state_;
};

/// Random POVM from normalized squares G G^dagger of complex Gaussian matrices.
std::vector<ComplexMatrix> random_povm_elements(std::size_t n, std::size_t dim, SplitMix64& rng);

}  // namespace nsbound
