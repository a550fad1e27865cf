#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace conik {

using Vector = Eigen::VectorXd;
using SymMatrix = Eigen::MatrixXd;

// Argument outside an operation's domain (non-interior point, wrong
// dimension, non-symmetric matrix, unsupported cone kind, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A computed quantity contradicts an identity that holds in exact
// arithmetic beyond the allowed rounding slack.
class InternalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tolerance convention: relative tolerances are scaled by max(1, |input|).
inline double rel_scale(double magnitude) { return magnitude > 1.0 ? magnitude : 1.0; }

bool is_symmetric(const SymMatrix& M, double rel_tol = 1e-12);
void require_symmetric(const SymMatrix& M, const char* who);

struct CholFactor {
  Eigen::MatrixXd L;      // lower triangular, L L^T = M when ok
  bool ok = false;
  int failed_pivot = -1;  // first non-positive pivot column when !ok
};

// Dense Cholesky of a symmetric matrix.  Rejects non-symmetric input,
// reports indefiniteness through the failure flag instead of throwing.
CholFactor chol_factor(const SymMatrix& M);

Vector chol_solve(const CholFactor& F, const Vector& b);
Eigen::MatrixXd chol_solve(const CholFactor& F, const Eigen::MatrixXd& B);
SymMatrix chol_inverse(const CholFactor& F);  // symmetrized M^{-1}
double chol_log_det(const CholFactor& F);

struct GenEigResult {
  double lambda_max;
  Vector vec;  // eigenvector, ||vec||_2 = 1
};

// Largest lambda with A q = lambda B q for symmetric A and SPD B,
// computed by whitening with the Cholesky factor of B.
GenEigResult geneig_max(const SymMatrix& A, const SymMatrix& B);

// Smallest eigenvalue of B - A; nonnegative (within tolerance) certifies
// A <= B in the semidefinite order.
double min_eig_diff(const SymMatrix& A, const SymMatrix& B);

}  // namespace conik
