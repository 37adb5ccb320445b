#include "nsbound/discrim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nsbound {

namespace {

void require_matching(const Ensemble& ensemble, const Povm& povm, const char* who) {
  if (povm.size() != ensemble.size())
    throw std::invalid_argument(std::string(who) + ": POVM has " + std::to_string(povm.size()) +
                                " outcomes for " + std::to_string(ensemble.size()) + " states");
  if (povm.dim() != ensemble.dim())
    throw std::invalid_argument(std::string(who) + ": POVM dimension " +
                                std::to_string(povm.dim()) + " vs state dimension " +
                                std::to_string(ensemble.dim()));
}

}  // namespace

Povm::Povm(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw std::invalid_argument("POVM: no elements");
  const std::size_t d = elements_.front().dim();
  ComplexMatrix total(d);
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (elements_[k].dim() != d)
      throw std::invalid_argument("POVM: element " + std::to_string(k) + " has wrong dimension");
    elements_[k] = symmetrize_checked(elements_[k]);
    const double lo = min_eigenvalue(elements_[k]);
    if (lo < -kPovmTol)
      throw std::invalid_argument("POVM: element " + std::to_string(k) +
                                  " has negative eigenvalue " + std::to_string(lo));
    total += elements_[k];
  }
  const double defect = frobenius_distance(total, ComplexMatrix::identity(d));
  if (defect > kPovmTol)
    throw std::invalid_argument("POVM: elements do not sum to identity (defect " +
                                std::to_string(defect) + ")");
}

double success_probability(const Ensemble& ensemble, const Povm& povm) {
  require_matching(ensemble, povm, "success_probability");
  double total = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k)
    total += ensemble.prior(k) * trace_product(povm[k], ensemble.state(k)).real();
  return std::clamp(total, 0.0, 1.0);
}

double helstrom_two_state(const DensityOperator& rho0, const DensityOperator& rho1, double mu0) {
  if (rho0.dim() != rho1.dim()) throw std::invalid_argument("helstrom: dimension mismatch");
  if (!(mu0 >= 0.0 && mu0 <= 1.0)) throw std::invalid_argument("helstrom: prior outside [0,1]");
  const double mu1 = 1.0 - mu0;
  const ComplexMatrix diff = mu0 * rho0.matrix() - mu1 * rho1.matrix();
  const double value = mu1 + positive_part(diff).trace().real();
  return std::clamp(value, std::max(mu0, mu1), 1.0);
}

Povm symmetric_pure_optimal_povm(int n, const std::vector<Complex>& c) {
  if (n < 2) throw std::invalid_argument("symmetric pure POVM: N must be >= 2");
  if (c.empty() || c.size() > static_cast<std::size_t>(n))
    throw std::invalid_argument("symmetric pure POVM: need 1 <= D <= N coefficients");
  std::vector<Complex> phase(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double mag = std::abs(c[k]);
    if (mag == 0.0)
      throw std::domain_error("symmetric pure POVM: coefficient " + std::to_string(k) +
                              " is zero, its phase is undefined");
    phase[k] = c[k] / mag;
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<ComplexMatrix> elements;
  elements.reserve(n);
  for (int j = 0; j < n; ++j) {
    std::vector<Complex> mu(c.size());
    for (std::size_t k = 0; k < c.size(); ++k)
      mu[k] = norm * phase[k] * std::polar(1.0, 2.0 * std::numbers::pi * j * k / n);
    elements.push_back(ComplexMatrix::outer(mu));
  }
  return Povm(std::move(elements));
}

double symmetric_pure_success(int n, const std::vector<Complex>& c) {
  double s = 0.0;
  for (const auto& ck : c) s += std::abs(ck);
  return s * s / static_cast<double>(n);
}

Povm symmetric_qubit_optimal_povm(int n) {
  if (n < 2) throw std::invalid_argument("symmetric qubit POVM: N must be >= 2");
  std::vector<ComplexMatrix> elements;
  elements.reserve(n);
  const double amp = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    const std::vector<Complex> e{amp, amp * std::polar(1.0, 2.0 * std::numbers::pi * j / n)};
    elements.push_back((2.0 / n) * ComplexMatrix::outer(e));
  }
  return Povm(std::move(elements));
}

L4Bound l4_bound(const Ensemble& ensemble) {
  const std::size_t n = ensemble.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const ComplexMatrix weighted_k = ensemble.prior(k) * ensemble.state(k);
    double value = ensemble.prior(k);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      value += positive_part(ensemble.prior(j) * ensemble.state(j) - weighted_k).trace().real();
    }
    best = std::min(best, value);
  }
  best = std::min(best, 1.0);
  return {1.0 - best, best};
}

double spin1_eta(double theta2, double theta3) {
  return (2.0 / 3.0) * (std::sin(0.5 * theta2) + std::sin(0.5 * theta3));
}

double spin1_one_minus_l4(double theta2, double theta3, double alpha) {
  return (1.0 + spin1_eta(theta2, theta3) * alpha) / 3.0;
}

CertificateReport certificate(const Ensemble& ensemble, const Povm& povm, double tol) {
  require_matching(ensemble, povm, "certificate");
  ComplexMatrix gamma(ensemble.dim());
  for (std::size_t k = 0; k < ensemble.size(); ++k)
    gamma += ensemble.prior(k) * (ensemble.state(k) * povm[k]);
  gamma = gamma.hermitian_part();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ensemble.size(); ++k)
    gap = std::min(gap, eig_hermitian(gamma - ensemble.prior(k) * ensemble.state(k)).values.front());
  return {std::move(gamma), gap, gap >= -tol};
}

}  // namespace nsbound
