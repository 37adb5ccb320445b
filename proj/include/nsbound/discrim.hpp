#pragma once

#include <cstddef>
#include <vector>

#include "nsbound/matrix.hpp"
#include "nsbound/states.hpp"

namespace nsbound {

inline constexpr double kPovmTol = 1e-9;
inline constexpr double kCertificateTol = 1e-8;

/// PSD elements (min eigenvalue >= -1e-9) summing to the identity within 1e-9.
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> elements);

  std::size_t size() const { return elements_.size(); }
  std::size_t dim() const { return elements_.front().dim(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const ComplexMatrix& operator[](std::size_t k) const { return elements_[k]; }

 private:
  std::vector<ComplexMatrix> elements_;
};

struct CertificateReport {
  ComplexMatrix gamma;
  double gap = 0.0;
  bool optimal = false;
};

struct L4Bound {
  double error_lower;
  double success_upper;  // 1 - error_lower
};

/// sum_k mu_k tr(M_k rho_k), clamped to [0, 1].
double success_probability(const Ensemble& ensemble, const Povm& povm);

/// mu_1 + tr(mu_0 rho_0 - mu_1 rho_1)_+
double helstrom_two_state(const DensityOperator& rho0, const DensityOperator& rho1, double mu0);

/// Square-root-phase measurement for the symmetric pure family; throws
/// std::domain_error if any coefficient vanishes.
Povm symmetric_pure_optimal_povm(int n, const std::vector<Complex>& coefficients);

/// (1/N) (sum_k |c_k|)^2
double symmetric_pure_success(int n, const std::vector<Complex>& coefficients);

/// (2/N) |e_j><e_j| with |e_j> the equatorial pure state at azimuth 2 pi j / N.
Povm symmetric_qubit_optimal_povm(int n);

/// L4 = 1 - min_k (mu_k + sum_{j != k} tr(mu_j rho_j - mu_k rho_k)_+)
L4Bound l4_bound(const Ensemble& ensemble);

/// (2/3)(sin(theta2 / 2) + sin(theta3 / 2)), reference angle theta1 = 0.
double spin1_eta(double theta2, double theta3);
/// (1 + eta alpha) / 3
double spin1_one_minus_l4(double theta2, double theta3, double alpha);

/// Minimum-error optimality conditions: Gamma = sym(sum mu_k rho_k M_k) must
/// dominate every mu_k rho_k.
CertificateReport certificate(const Ensemble& ensemble, const Povm& povm,
                              double tol = kCertificateTol);

}  // namespace nsbound
