#include "irsched/linalg.hpp"

#include <cmath>

#include "irsched/rng.hpp"

namespace irsched::linalg {

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& e : entries_) s += std::norm(e);
  return std::sqrt(s);
}

double vector_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const Complex& e : v) s += std::norm(e);
  return std::sqrt(s);
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul: dimension mismatch (" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + ")");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  }
  return c;
}

ComplexMatrix apply_irs(const ComplexMatrix& g, const IrsConfiguration& theta,
                        const ComplexMatrix& h) {
  if (g.cols() != h.rows() || theta.size() != g.cols())
    throw std::invalid_argument("apply_irs: dimension mismatch");
  // Scale the columns of G by the per-element reflection coefficients, then
  // multiply by H.
  ComplexMatrix scaled(g.rows(), g.cols());
  for (std::size_t n = 0; n < g.cols(); ++n) {
    Complex phase = std::polar(1.0, theta[n]);
    for (std::size_t i = 0; i < g.rows(); ++i) scaled(i, n) = g(i, n) * phase;
  }
  return matmul(scaled, h);
}

namespace {

// y = A x
void mat_vec(const ComplexMatrix& a, const std::vector<Complex>& x,
             std::vector<Complex>& y) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
}

// y = A^H x
void mat_vec_adjoint(const ComplexMatrix& a, const std::vector<Complex>& x,
                     std::vector<Complex>& y) {
  for (std::size_t j = 0; j < a.cols(); ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += std::conj(a(i, j)) * x[i];
  }
}

void normalize(std::vector<Complex>& v) {
  double n = vector_norm(v);
  for (Complex& e : v) e /= n;
}

// Largest-magnitude entry of v made real positive; u carries the same
// rotation so that A v = sigma u is preserved.
void fix_global_phase(std::vector<Complex>& u, std::vector<Complex>& v) {
  std::size_t pivot = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double m = std::abs(v[i]);
    if (m > best) {
      best = m;
      pivot = i;
    }
  }
  if (best <= 0.0) return;
  Complex rot = std::conj(v[pivot]) / std::abs(v[pivot]);
  for (Complex& e : v) e *= rot;
  for (Complex& e : u) e *= rot;
}

}  // namespace

SingularTriplet top_singular_triplet(const ComplexMatrix& a, double tol,
                                     std::size_t max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("top_singular_triplet: tol must be > 0");
  if (a.frobenius_norm() == 0.0)
    throw std::domain_error("degenerate channel: zero matrix");

  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  // Deterministic seeded start vector.
  Rng rng(0x5EEDF00Dull + 0x9E37ull * n + m);
  std::vector<Complex> v(n);
  for (Complex& e : v) e = rng.complex_gaussian();
  normalize(v);

  std::vector<Complex> av(m);
  std::vector<Complex> z(n);
  SingularTriplet trip;

  for (std::size_t it = 0; it < max_iter; ++it) {
    mat_vec(a, v, av);
    double sigma = vector_norm(av);
    if (sigma == 0.0) {
      // v landed in the null space; restart from a fresh direction.
      for (Complex& e : v) e = rng.complex_gaussian();
      normalize(v);
      continue;
    }
    std::vector<Complex> u = av;
    for (Complex& e : u) e /= sigma;

    mat_vec_adjoint(a, u, z);
    double resid = 0.0;
    for (std::size_t j = 0; j < n; ++j) resid += std::norm(z[j] - sigma * v[j]);
    resid = std::sqrt(resid);

    trip.sigma = sigma;
    trip.left = u;
    trip.right = v;

    if (resid <= tol * sigma) {
      fix_global_phase(trip.left, trip.right);
      return trip;
    }
    v = z;
    normalize(v);
  }

  fix_global_phase(trip.left, trip.right);
  throw ConvergenceError("top_singular_triplet: no convergence in " +
                             std::to_string(max_iter) + " iterations",
                         trip);
}

}  // namespace irsched::linalg
