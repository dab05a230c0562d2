#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "irsched/core.hpp"

namespace irsched::linalg {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {
    check_shape();
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    check_shape();
    if (entries_.size() != rows_ * cols_)
      throw std::invalid_argument("ComplexMatrix: entries length != rows*cols");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  const std::vector<Complex>& entries() const { return entries_; }
  std::vector<Complex>& entries() { return entries_; }

  double frobenius_norm() const;

  bool operator==(const ComplexMatrix&) const = default;

 private:
  void check_shape() const {
    if (rows_ < 1 || cols_ < 1)
      throw std::invalid_argument("ComplexMatrix: rows and cols must be >= 1");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

/// Dominant singular value with its unit-norm left and right vectors.
struct SingularTriplet {
  double sigma = 0.0;
  std::vector<Complex> left;
  std::vector<Complex> right;
};

/// Raised when power iteration hits the iteration cap; carries the last
/// iterate so callers can inspect how far it got.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, SingularTriplet last)
      : std::runtime_error(what), last_iterate(std::move(last)) {}

  SingularTriplet last_iterate;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// G * diag(e^{j theta}) * H without materializing the diagonal matrix.
ComplexMatrix apply_irs(const ComplexMatrix& g, const IrsConfiguration& theta,
                        const ComplexMatrix& h);

/// Dominant singular triplet by power iteration on A^H A. The returned pair
/// satisfies ||A v - sigma u|| <= tol*sigma and ||A^H u - sigma v|| <= tol*sigma.
/// Global phase is fixed by making the largest-magnitude entry of v real
/// positive.
SingularTriplet top_singular_triplet(const ComplexMatrix& a, double tol = 1e-10,
                                     std::size_t max_iter = 10000);

double vector_norm(const std::vector<Complex>& v);

}  // namespace irsched::linalg
