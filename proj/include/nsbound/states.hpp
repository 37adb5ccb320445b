#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "nsbound/matrix.hpp"

namespace nsbound {

inline constexpr double kStateTol = 1e-10;
inline constexpr double kPriorTol = 1e-12;

/// Hermitian, unit-trace, positive-semidefinite matrix (each within 1e-10).
/// The stored matrix is the symmetrized input.
class DensityOperator {
 public:
  explicit DensityOperator(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.dim(); }
  double purity() const { return trace_product(matrix_, matrix_).real(); }

 private:
  ComplexMatrix matrix_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

struct EnsembleMember {
  double prior;
  DensityOperator state;
};

/// At least two states of one dimension with priors summing to one.
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleMember> members);
  /// Equal priors 1/N.
  static Ensemble uniform(std::vector<DensityOperator> states);

  std::size_t size() const { return members_.size(); }
  std::size_t dim() const { return members_.front().state.dim(); }
  const std::vector<EnsembleMember>& members() const { return members_; }
  const EnsembleMember& operator[](std::size_t k) const { return members_[k]; }
  double prior(std::size_t k) const { return members_[k].prior; }
  const ComplexMatrix& state(std::size_t k) const { return members_[k].state.matrix(); }
  bool has_uniform_priors(double tol = kPriorTol) const;

 private:
  std::vector<EnsembleMember> members_;
};

/// Spin-j generators in the basis |j,m>, m = j, j-1, ..., -j.
struct SpinSystem {
  int two_j;
  ComplexMatrix j1;
  ComplexMatrix j2;
  ComplexMatrix j3;

  double j() const { return 0.5 * two_j; }
  std::size_t dim() const { return static_cast<std::size_t>(two_j) + 1; }
  /// v . J
  ComplexMatrix dot(const std::array<double, 3>& v) const;
};

/// Pauli matrices sigma_x, sigma_y, sigma_z.
const std::array<ComplexMatrix, 3>& pauli();

DensityOperator density_from_bloch(const BlochVector& n);
BlochVector bloch_from_density(const DensityOperator& rho);

/// N qubit states with Bloch vectors r (sin t cos(2 pi j/N), sin t sin(2 pi j/N), cos t),
/// cyclically permuted by a z rotation through 2 pi / N.
Ensemble symmetric_qubit_family(int n, double theta, double r);

/// exp(-i (2 pi / N) sigma_z / 2), the generator of the qubit family symmetry.
ComplexMatrix qubit_family_rotation(int n);

/// |phi_j> = sum_k c_k e^{2 pi i j k / N} |k>, j = 0..N-1, with equal priors.
Ensemble symmetric_pure_family(int n, const std::vector<Complex>& coefficients);

SpinSystem spin_generators(int two_j);

/// (I + v.J) / (2j+1); throws std::domain_error if not PSD within 1e-10.
DensityOperator spin_state(const SpinSystem& sys, const std::array<double, 3>& v);

/// rho_k = U_k rho_0 U_k^dagger, U_k = exp(-i theta_k J3),
/// rho_0 = (I + alpha(-J1 + J3)) / (2j+1).
Ensemble spin_family(const SpinSystem& sys, double alpha, const std::vector<double>& thetas);

}  // namespace nsbound
