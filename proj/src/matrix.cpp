#include "nsbound/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nsbound {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kJacobiRelTol = 1e-14;

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (r != c) sum += std::norm(a(r, c));
  return std::sqrt(sum);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (data_.size() != dim_ * dim_)
    throw std::invalid_argument("ComplexMatrix: expected " + std::to_string(dim_ * dim_) +
                                " entries, got " + std::to_string(data_.size()));
  if (!all_finite()) throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()), data_() {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw std::invalid_argument("ComplexMatrix: matrix must be square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!all_finite()) throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  if (!m.all_finite()) throw std::invalid_argument("ComplexMatrix: non-finite entry");
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<Complex>>& rows) {
  const std::size_t n = rows.size();
  std::vector<Complex> flat;
  flat.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n)
      throw std::invalid_argument("ComplexMatrix: row " + std::to_string(r) + " has " +
                                  std::to_string(rows[r].size()) + " entries, expected " +
                                  std::to_string(n));
    flat.insert(flat.end(), rows[r].begin(), rows[r].end());
  }
  return ComplexMatrix(n, std::move(flat));
}

ComplexMatrix ComplexMatrix::outer(const std::vector<Complex>& v) {
  ComplexMatrix m(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[r] * std::conj(v[c]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  ComplexMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c)
      m(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
  return m;
}

double ComplexMatrix::hermiticity_defect() const {
  double sum = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c)
      sum += std::norm((*this)(r, c) - std::conj((*this)(c, r)));
  return std::sqrt(sum);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

void ComplexMatrix::require_same_dim(const ComplexMatrix& other, const char* op) const {
  if (other.dim_ != dim_)
    throw std::invalid_argument(std::string("ComplexMatrix ") + op + ": dimension mismatch " +
                                std::to_string(dim_) + " vs " + std::to_string(other.dim_));
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(rhs, "+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(rhs, "-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.require_same_dim(b, "*");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex(0.0)) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).frobenius_norm();
}

ComplexMatrix conjugate(const ComplexMatrix& u, const ComplexMatrix& m) {
  return u * m * u.adjoint();
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_product: dimension mismatch");
  Complex t = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t k = 0; k < a.dim(); ++k) t += a(r, k) * b(k, r);
  return t;
}

std::vector<Complex> HermitianEig::eigenvector(std::size_t k) const {
  std::vector<Complex> v(vectors.dim());
  for (std::size_t r = 0; r < v.size(); ++r) v[r] = vectors(r, k);
  return v;
}

ComplexMatrix HermitianEig::rebuild(const std::function<double(double)>& f) const {
  const std::size_t n = vectors.dim();
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(values[k]);
    if (w == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = w * vectors(r, k);
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(vectors(c, k));
    }
  }
  return out;
}

ComplexMatrix HermitianEig::rebuild() const {
  return rebuild([](double x) { return x; });
}

ComplexMatrix symmetrize_checked(const ComplexMatrix& h) {
  if (!h.all_finite()) throw std::invalid_argument("symmetrize_checked: non-finite entry");
  const double defect = h.hermiticity_defect();
  const double scale = std::max(1.0, h.frobenius_norm());
  if (defect > kHermitianTol * scale)
    throw std::invalid_argument("matrix is not Hermitian: |H - H^dagger|_F = " +
                                std::to_string(defect));
  return h.hermitian_part();
}

HermitianEig eig_hermitian(const ComplexMatrix& h) {
  ComplexMatrix a = symmetrize_checked(h);
  const std::size_t n = a.dim();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = kJacobiRelTol * a.frobenius_norm();

  bool converged = false;
  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        // Phase e^{-i phi} on column q makes the (p,q) entry real, then a
        // real Givens rotation annihilates it.
        const Complex phase = std::conj(apq) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // W restricted to (p,q): [[c, s], [-s*phase, c*phase]]
        const Complex wpp = c, wpq = s, wqp = -s * phase, wqq = c * phase;
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * wpp + akq * wqp;
          a(k, q) = akp * wpq + akq * wqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(wpp) * apk + std::conj(wqp) * aqk;
          a(q, k) = std::conj(wpq) * apk + std::conj(wqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * wpp + vkq * wqp;
          v(k, q) = vkp * wpq + vkq * wqq;
        }
      }
    }
  }
  if (!converged)
    throw NumericalError("eig_hermitian: no convergence after " + std::to_string(kMaxSweeps) +
                         " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  HermitianEig out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

ComplexMatrix positive_part(const ComplexMatrix& h) {
  return eig_hermitian(h).rebuild([](double x) { return x > 0.0 ? x : 0.0; });
}

double min_eigenvalue(const ComplexMatrix& h) {
  const auto eig = eig_hermitian(h);
  return eig.values.empty() ? 0.0 : eig.values.front();
}

double trace_norm(const ComplexMatrix& h) {
  const auto eig = eig_hermitian(h);
  double sum = 0.0;
  for (double x : eig.values) sum += std::abs(x);
  return sum;
}

ComplexMatrix unitary_from_generator(double theta, const ComplexMatrix& g) {
  const auto eig = eig_hermitian(g);
  const std::size_t n = g.dim();
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex w = std::polar(1.0, -theta * eig.values[k]);
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = w * eig.vectors(r, k);
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(eig.vectors(c, k));
    }
  }
  return out;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& h) {
  return eig_hermitian(h).rebuild([](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

ComplexMatrix inverse_sqrt_psd(const ComplexMatrix& h, double floor, bool* rank_deficient) {
  const auto eig = eig_hermitian(h);
  bool deficient = false;
  auto out = eig.rebuild([&](double x) {
    if (x <= floor) {
      deficient = true;
      return 0.0;
    }
    return 1.0 / std::sqrt(x);
  });
  if (rank_deficient) *rank_deficient = deficient;
  return out;
}

}  // namespace nsbound
