#include "nsbound/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nsbound {

namespace {

constexpr double kEigFloor = 1e-12;

/// S^{-1/2} M_k S^{-1/2} with S = sum M_k, then any identity deficit off the
/// support of S is shared equally so the elements sum to I.
std::vector<ComplexMatrix> normalize(std::vector<ComplexMatrix> elements, bool& deficient) {
  const std::size_t d = elements.front().dim();
  ComplexMatrix total(d);
  for (const auto& m : elements) total += m;
  bool lost = false;
  const ComplexMatrix w = inverse_sqrt_psd(total.hermitian_part(), kEigFloor, &lost);
  ComplexMatrix sum(d);
  for (auto& m : elements) {
    m = (w * m * w).hermitian_part();
    sum += m;
  }
  if (lost) {
    deficient = true;
    const ComplexMatrix fill =
        (1.0 / static_cast<double>(elements.size())) * (ComplexMatrix::identity(d) - sum);
    for (auto& m : elements) m = (m + fill).hermitian_part();
  }
  return elements;
}

double success_of(const Ensemble& ensemble, const std::vector<ComplexMatrix>& elements) {
  double total = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k)
    total += ensemble.prior(k) * trace_product(elements[k], ensemble.state(k)).real();
  return total;
}

double gap_of(const Ensemble& ensemble, const std::vector<ComplexMatrix>& elements) {
  ComplexMatrix gamma(ensemble.dim());
  for (std::size_t k = 0; k < ensemble.size(); ++k)
    gamma += ensemble.prior(k) * (ensemble.state(k) * elements[k]);
  gamma = gamma.hermitian_part();
  double gap = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const double lo = eig_hermitian(gamma - ensemble.prior(k) * ensemble.state(k)).values.front();
    if (k == 0 || lo < gap) gap = lo;
  }
  return gap;
}

}  // namespace

SplitMix64::result_type SplitMix64::operator()() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<ComplexMatrix> random_povm_elements(std::size_t n, std::size_t dim, SplitMix64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ComplexMatrix> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ComplexMatrix g(dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
    out.push_back(g * g.adjoint());
  }
  bool unused = false;
  return normalize(std::move(out), unused);
}

OracleResult optimize_povm(const Ensemble& ensemble, const OracleOptions& options,
                           const std::vector<ComplexMatrix>& start) {
  if (options.max_iters < 1) throw std::invalid_argument("optimize_povm: max_iters must be >= 1");
  const std::size_t n = ensemble.size();
  const std::size_t d = ensemble.dim();

  std::vector<ComplexMatrix> m;
  if (start.empty()) {
    m.assign(n, (1.0 / static_cast<double>(n)) * ComplexMatrix::identity(d));
  } else {
    if (start.size() != n) throw std::invalid_argument("optimize_povm: start has wrong length");
    m = start;
  }

  std::vector<ComplexMatrix> weighted(n);
  for (std::size_t k = 0; k < n; ++k) weighted[k] = ensemble.prior(k) * ensemble.state(k);

  OracleResult result{Povm(m), 0.0, 0.0, 0, false, false, {}};
  double success = success_of(ensemble, m);
  double gap = gap_of(ensemble, m);
  if (options.record_history) result.history.push_back(success);

  int iter = 0;
  while (gap < -options.tol && iter < options.max_iters) {
    ++iter;
    std::vector<ComplexMatrix> next(n);
    ComplexMatrix lambda_sq(d);
    for (std::size_t k = 0; k < n; ++k) {
      next[k] = (weighted[k] * m[k] * weighted[k]).hermitian_part();
      lambda_sq += next[k];
    }
    bool lost = false;
    const ComplexMatrix inv_lambda = inverse_sqrt_psd(lambda_sq.hermitian_part(), kEigFloor, &lost);
    result.rank_deficient = result.rank_deficient || lost;
    for (auto& e : next) e = inv_lambda * e * inv_lambda;
    m = normalize(std::move(next), result.rank_deficient);

    success = success_of(ensemble, m);
    gap = gap_of(ensemble, m);
    if (options.record_history) result.history.push_back(success);
  }

  result.povm = Povm(std::move(m));
  result.success = success_probability(ensemble, result.povm);
  result.certificate_gap = gap;
  result.iterations = iter;
  result.converged = gap >= -options.tol;
  return result;
}

OracleResult random_restarts(const Ensemble& ensemble, int restarts, std::uint64_t seed,
                             const OracleOptions& options) {
  if (restarts < 1) throw std::invalid_argument("random_restarts: restarts must be >= 1");
  OracleResult best = optimize_povm(ensemble, options);
  auto better = [](const OracleResult& a, const OracleResult& b) {
    if (a.converged != b.converged) return a.converged;
    return a.success > b.success;
  };
  for (int r = 1; r < restarts; ++r) {
    // Each restart owns a stream keyed by (seed, r), so prefixes are stable.
    SplitMix64 mixer(seed ^ (0xd1b54a32d192ed03ULL * static_cast<std::uint64_t>(r)));
    SplitMix64 rng(mixer());
    auto start = random_povm_elements(ensemble.size(), ensemble.dim(), rng);
    OracleResult candidate = optimize_povm(ensemble, options, start);
    if (better(candidate, best)) best = std::move(candidate);
  }
  return best;
}

}  // namespace nsbound
