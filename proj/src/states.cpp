#include "nsbound/states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nsbound {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

DensityOperator::DensityOperator(const ComplexMatrix& m) : matrix_(symmetrize_checked(m)) {
  if (matrix_.dim() == 0) throw std::invalid_argument("density operator: empty matrix");
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kStateTol)
    throw std::invalid_argument("density operator: trace " + fmt(tr) + " != 1");
  const double lo = min_eigenvalue(matrix_);
  if (lo < -kStateTol)
    throw std::invalid_argument("density operator: negative eigenvalue " + fmt(lo));
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
  if (members_.size() < 2) throw std::invalid_argument("ensemble: need at least 2 states");
  double total = 0.0;
  for (std::size_t k = 0; k < members_.size(); ++k) {
    const auto& m = members_[k];
    if (!(m.prior >= 0.0))
      throw std::invalid_argument("ensemble: state " + std::to_string(k) + " has negative prior");
    if (m.state.dim() != members_.front().state.dim())
      throw std::invalid_argument("ensemble: state " + std::to_string(k) +
                                  " has dimension " + std::to_string(m.state.dim()) +
                                  ", expected " + std::to_string(members_.front().state.dim()));
    total += m.prior;
  }
  if (std::abs(total - 1.0) > kPriorTol)
    throw std::invalid_argument("ensemble: priors sum to " + fmt(total) + ", expected 1");
}

Ensemble Ensemble::uniform(std::vector<DensityOperator> states) {
  std::vector<EnsembleMember> members;
  const double w = 1.0 / static_cast<double>(states.size());
  for (auto& s : states) members.push_back({w, std::move(s)});
  return Ensemble(std::move(members));
}

bool Ensemble::has_uniform_priors(double tol) const {
  const double w = 1.0 / static_cast<double>(members_.size());
  for (const auto& m : members_)
    if (std::abs(m.prior - w) > tol) return false;
  return true;
}

ComplexMatrix SpinSystem::dot(const std::array<double, 3>& v) const {
  return v[0] * j1 + v[1] * j2 + v[2] * j3;
}

const std::array<ComplexMatrix, 3>& pauli() {
  using namespace std::complex_literals;
  static const std::array<ComplexMatrix, 3> p{
      ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}},
      ComplexMatrix{{0.0, -1i}, {1i, 0.0}},
      ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}},
  };
  return p;
}

DensityOperator density_from_bloch(const BlochVector& n) {
  if (!(n.norm() <= 1.0 + kStateTol))
    throw std::invalid_argument("Bloch vector length " + fmt(n.norm()) + " exceeds 1");
  const auto& s = pauli();
  ComplexMatrix m = ComplexMatrix::identity(2) + n.x * s[0] + n.y * s[1] + n.z * s[2];
  return DensityOperator(0.5 * m);
}

BlochVector bloch_from_density(const DensityOperator& rho) {
  if (rho.dim() != 2)
    throw std::invalid_argument("Bloch vector needs a qubit, got dimension " +
                                std::to_string(rho.dim()));
  const auto& s = pauli();
  return {trace_product(rho.matrix(), s[0]).real(), trace_product(rho.matrix(), s[1]).real(),
          trace_product(rho.matrix(), s[2]).real()};
}

Ensemble symmetric_qubit_family(int n, double theta, double r) {
  if (n < 2) throw std::invalid_argument("symmetric qubit family: N must be >= 2");
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("symmetric qubit family: r = " + fmt(r) + " outside [0,1]");
  std::vector<DensityOperator> states;
  states.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / n;
    states.push_back(density_from_bloch({r * std::sin(theta) * std::cos(phi),
                                         r * std::sin(theta) * std::sin(phi),
                                         r * std::cos(theta)}));
  }
  return Ensemble::uniform(std::move(states));
}

ComplexMatrix qubit_family_rotation(int n) {
  return unitary_from_generator(2.0 * std::numbers::pi / n, 0.5 * pauli()[2]);
}

Ensemble symmetric_pure_family(int n, const std::vector<Complex>& coefficients) {
  if (n < 2) throw std::invalid_argument("symmetric pure family: N must be >= 2");
  const std::size_t d = coefficients.size();
  if (d == 0 || d > static_cast<std::size_t>(n))
    throw std::invalid_argument("symmetric pure family: need 1 <= D <= N coefficients");
  double norm2 = 0.0;
  for (const auto& c : coefficients) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > kStateTol)
    throw std::invalid_argument("symmetric pure family: sum |c_k|^2 = " + fmt(norm2) +
                                ", expected 1");
  std::vector<DensityOperator> states;
  states.reserve(n);
  for (int j = 0; j < n; ++j) {
    std::vector<Complex> phi(d);
    for (std::size_t k = 0; k < d; ++k)
      phi[k] = coefficients[k] * std::polar(1.0, 2.0 * std::numbers::pi * j * k / n);
    states.emplace_back(ComplexMatrix::outer(phi));
  }
  return Ensemble::uniform(std::move(states));
}

SpinSystem spin_generators(int two_j) {
  if (two_j < 1) throw std::invalid_argument("spin generators: two_j must be >= 1");
  const std::size_t d = static_cast<std::size_t>(two_j) + 1;
  const double j = 0.5 * two_j;
  ComplexMatrix raise(d);
  std::vector<double> diag(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double m = j - static_cast<double>(i);
    diag[i] = m;
    // <j, m+1 | J+ | j, m>; index i-1 holds m+1.
    if (i > 0) raise(i - 1, i) = std::sqrt((j - m) * (j + m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  const Complex half_over_i(0.0, -0.5);
  return SpinSystem{two_j, 0.5 * (raise + lower), half_over_i * (raise - lower),
                    ComplexMatrix::diagonal(diag)};
}

DensityOperator spin_state(const SpinSystem& sys, const std::array<double, 3>& v) {
  const double scale = 1.0 / static_cast<double>(sys.dim());
  const ComplexMatrix m = scale * (ComplexMatrix::identity(sys.dim()) + sys.dot(v));
  const double lo = min_eigenvalue(m);
  if (lo < -kStateTol)
    throw std::domain_error("spin state not positive: min eigenvalue " + fmt(lo));
  return DensityOperator(m);
}

Ensemble spin_family(const SpinSystem& sys, double alpha, const std::vector<double>& thetas) {
  if (thetas.size() < 2) throw std::invalid_argument("spin family: need at least 2 angles");
  const DensityOperator rho0 = spin_state(sys, {-alpha, 0.0, alpha});
  std::vector<DensityOperator> states;
  states.reserve(thetas.size());
  for (double t : thetas)
    states.emplace_back(conjugate(unitary_from_generator(t, sys.j3), rho0.matrix()));
  return Ensemble::uniform(std::move(states));
}

}  // namespace nsbound
