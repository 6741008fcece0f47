#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dilated/error.hpp"
#include "dilated/numeric.hpp"

namespace dilated {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct EigenExtremes {
  double min = 0.0;
  double max = 0.0;
  double condition() const { return min > 0.0 ? max / min : std::numeric_limits<double>::infinity(); }
};

inline EigenExtremes hermitian_extremes(const Matrix& h) {
  if (h.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorKind::NonConvergence, "Hermitian eigensolve failed");
  return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
}

struct PowerIterationResult {
  double value = 0.0;     // largest singular value
  double residual = 0.0;  // ‖M*M x - lambda x‖ / lambda at exit
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value of an operator given by apply / apply_adjoint, by
/// power iteration on M*M. Stops when the eigen-residual of M*M falls below
/// rel_tol; the squared residual bounds the eigenvalue error.
inline PowerIterationResult largest_singular_value(std::size_t dim,
                                                   const std::function<Vector(const Vector&)>& apply,
                                                   const std::function<Vector(const Vector&)>& apply_adjoint,
                                                   double rel_tol = 1e-6, int max_iter = 20000) {
  PowerIterationResult out;
  if (dim == 0) {
    out.converged = true;
    return out;
  }
  // deterministic, non-symmetric start
  Vector x(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    x(static_cast<Eigen::Index>(i)) = cplx(1.0 + 0.37 * std::sin(1.3 * static_cast<double>(i) + 0.2),
                                           0.11 * std::cos(0.7 * static_cast<double>(i)));
  x.normalize();
  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Vector y = apply_adjoint(apply(x));
    lambda = std::real(x.dot(y));
    const double res = (y - lambda * x).norm();
    out.iterations = it;
    const double ny = y.norm();
    if (ny == 0.0) {
      lambda = 0.0;
      out.residual = 0.0;
      out.converged = true;
      break;
    }
    out.residual = lambda > 0.0 ? res / lambda : 0.0;
    if (out.residual <= rel_tol) {
      out.converged = true;
      break;
    }
    x = y / ny;
  }
  out.value = std::sqrt(std::max(0.0, lambda));
  return out;
}

/// Largest eigenvalue of the pencil (A, G) with G Hermitian positive definite.
/// Reduces to L^{-1} A L^{-*} through the Cholesky factor of G.
inline double largest_generalized_eigenvalue(const Matrix& a, const Matrix& g) {
  Eigen::LLT<Matrix> llt(g);
  require(llt.info() == Eigen::Success, ErrorKind::GramNotPositive, "Gram matrix is not positive definite");
  const Matrix l = llt.matrixL();
  Matrix c = l.triangularView<Eigen::Lower>().solve(a);
  c = l.triangularView<Eigen::Lower>().solve(c.adjoint()).adjoint();
  Matrix h = 0.5 * (c + c.adjoint());
  return hermitian_extremes(h).max;
}

}  // namespace dilated
