#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>
#include <string>

namespace qmon {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Numerical thresholds shared by every module.
///
/// `rank` decides rank/invertibility from singular values, `check` bounds
/// identity residuals and `kms` bounds the modular-condition residual.
/// Residuals are Frobenius norms, relative to the operand scale where the
/// operands are not already normalized.
struct Tolerances {
  double rank = 1e-10;
  double check = 1e-8;
  double kms = 1e-7;

  bool valid() const { return 0.0 < rank && rank < check && check <= kms; }
};

enum class ErrorKind {
  NotAoAdmissible,
  NotNormalized,
  SingularMatrix,
  DegenerateEigenpairing,
  Infeasible,
  OddParity,
  NumericalDegeneracy,
  ZeroSpace,
  MultiplicityMismatch,
  BetaMismatch,
  LevelCapExceeded,
  NotMonoidallyEquivalent,
  NotPositive,
  SideNotBuilt,
  DimensionMismatch,
  MissingBlock,
  PreconditionFailed,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Kronecker product in the ordering used throughout: index (i, j) of a
/// vector in A ⊗ B is i * dim(B) + j.
Mat kron(const Mat& a, const Mat& b);

/// Orthonormal basis of the column span of `m`, rank decided at `tol_rank`
/// relative to the largest singular value.
Mat column_basis(const Mat& m, double tol_rank);

/// Numerical rank at `tol_rank` relative to the largest singular value.
int numerical_rank(const Mat& m, double tol_rank);

/// Positive matrix power via the Hermitian eigendecomposition; complex exponent.
Mat positive_power(const Mat& m, cplx exponent);

/// Frobenius norm of a - b divided by max(1, |b|).
double rel_residual(const Mat& a, const Mat& b);

/// Largest-modulus entry made real positive; returns the rescaled matrix.
Mat fix_phase(const Mat& m);

/// Haar-distributed unitary (QR of a Gaussian matrix with the phases of R removed).
Mat random_unitary(int n, std::mt19937_64& rng);

}  // namespace qmon
