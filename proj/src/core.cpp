#include "qmonoidal/core.hpp"

#include <algorithm>
#include <cmath>

namespace qmon {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotAoAdmissible: return "NotAoAdmissible";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::DegenerateEigenpairing: return "DegenerateEigenpairing";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::OddParity: return "OddParity";
    case ErrorKind::NumericalDegeneracy: return "NumericalDegeneracy";
    case ErrorKind::ZeroSpace: return "ZeroSpace";
    case ErrorKind::MultiplicityMismatch: return "MultiplicityMismatch";
    case ErrorKind::BetaMismatch: return "BetaMismatch";
    case ErrorKind::LevelCapExceeded: return "LevelCapExceeded";
    case ErrorKind::NotMonoidallyEquivalent: return "NotMonoidallyEquivalent";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::SideNotBuilt: return "SideNotBuilt";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MissingBlock: return "MissingBlock";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat column_basis(const Mat& m, double tol_rank) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return Mat(m.rows(), 0);
  int r = 0;
  while (r < s.size() && s(r) > tol_rank * std::max(1.0, s(0))) ++r;
  return svd.matrixU().leftCols(r);
}

int numerical_rank(const Mat& m, double tol_rank) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  int r = 0;
  while (r < s.size() && s(r) > tol_rank * std::max(1.0, s(0))) ++r;
  return r;
}

Mat positive_power(const Mat& m, cplx exponent) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
  const RVec& ev = es.eigenvalues();
  Vec d(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) d(i) = std::pow(cplx(ev(i), 0.0), exponent);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

double rel_residual(const Mat& a, const Mat& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

Mat fix_phase(const Mat& m) {
  Eigen::Index bi = 0, bj = 0;
  double best = -1.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > best + 1e-12) {
        best = std::abs(m(i, j));
        bi = i;
        bj = j;
      }
  if (best <= 0.0) return m;
  const cplx ph = std::conj(m(bi, bj)) / std::abs(m(bi, bj));
  return m * ph;
}

Mat random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

}  // namespace qmon
