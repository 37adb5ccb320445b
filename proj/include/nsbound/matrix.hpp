#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace nsbound {

using Complex = std::complex<double>;

/// Hermiticity tolerance: inputs closer than this (relative to max(1, |H|_F))
/// are silently symmetrized, anything further away is rejected.
inline constexpr double kHermitianTol = 1e-10;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> row_major);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zeros(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix diagonal(const std::vector<double>& diag);
  static ComplexMatrix from_rows(const std::vector<std::vector<Complex>>& rows);
  /// |v><v|
  static ComplexMatrix outer(const std::vector<Complex>& v);

  std::size_t dim() const { return dim_; }
  const std::vector<Complex>& data() const { return data_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * dim_ + c];
  }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  /// (H + H^dagger) / 2
  ComplexMatrix hermitian_part() const;
  /// |H - H^dagger|_F
  double hermiticity_defect() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= Complex(s); }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex(s); }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  void require_same_dim(const ComplexMatrix& other, const char* op) const;

  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// |A - B|_F
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// U M U^dagger
ComplexMatrix conjugate(const ComplexMatrix& u, const ComplexMatrix& m);

/// tr(A B) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Spectral decomposition of a Hermitian matrix. Eigenvalues ascending,
/// eigenvectors stored as the columns of `vectors`.
struct HermitianEig {
  std::vector<double> values;
  ComplexMatrix vectors;

  /// Column k as a vector.
  std::vector<Complex> eigenvector(std::size_t k) const;
  /// sum_k f(lambda_k) |v_k><v_k|
  ComplexMatrix rebuild(const std::function<double(double)>& f) const;
  ComplexMatrix rebuild() const;
};

/// Cyclic complex Jacobi. Throws std::invalid_argument for non-Hermitian
/// input and NumericalError if the sweep cap is hit before convergence.
HermitianEig eig_hermitian(const ComplexMatrix& h);

/// Validates Hermiticity within kHermitianTol and returns (H + H^dagger)/2.
ComplexMatrix symmetrize_checked(const ComplexMatrix& h);

ComplexMatrix positive_part(const ComplexMatrix& h);
double min_eigenvalue(const ComplexMatrix& h);
/// Sum of absolute eigenvalues.
double trace_norm(const ComplexMatrix& h);

/// exp(-i theta G) for Hermitian G.
ComplexMatrix unitary_from_generator(double theta, const ComplexMatrix& g);

/// Principal square root of a PSD matrix; negative noise eigenvalues clamp to 0.
ComplexMatrix sqrt_psd(const ComplexMatrix& h);

/// H^{-1/2} on the support of H; eigenvalues below `floor` are treated as zero.
/// `rank_deficient` is set when any eigenvalue fell below the floor.
ComplexMatrix inverse_sqrt_psd(const ComplexMatrix& h, double floor = 1e-12,
                               bool* rank_deficient = nullptr);

}  // namespace nsbound
