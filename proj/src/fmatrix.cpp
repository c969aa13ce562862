#include "qmonoidal/fmatrix.hpp"

#include <algorithm>
#include <cmath>

namespace qmon {

namespace {

double smallest_over_largest_sv(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) / std::max(1.0, s(0));
}

// Orthogonalizes v against `basis` (two passes) and appends it if what is
// left has norm above `thresh`.
bool gs_append(std::vector<Vec>& basis, Vec v, double thresh) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& b : basis) v -= b.dot(v) * b;
  const double nv = v.norm();
  if (nv <= thresh) return false;
  basis.push_back(v / nv);
  return true;
}

struct Cluster {
  double value;
  Mat vectors;  // orthonormal eigenvectors
};

// Groups eigenpairs whose values agree to relative tolerance `rtol`.
std::vector<Cluster> clusters(const RVec& values, const Mat& vectors, double rtol) {
  std::vector<Cluster> out;
  Eigen::Index start = 0;
  const Eigen::Index n = values.size();
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || std::abs(values(i) - values(i - 1)) > rtol * std::max(1.0, std::abs(values(i)))) {
      out.push_back({values.segment(start, i - start).mean(), vectors.middleCols(start, i - start)});
      start = i;
    }
  }
  return out;
}

// Deterministic orthonormal basis for the range of V V*: project the standard
// basis vectors in order and keep the well-conditioned ones.
std::vector<Vec> projected_standard_basis(const Mat& v) {
  const Eigen::Index n = v.rows();
  const double thresh = 0.5 / std::sqrt(static_cast<double>(n));
  std::vector<Vec> out;
  for (Eigen::Index k = 0; k < n && static_cast<Eigen::Index>(out.size()) < v.cols(); ++k) {
    Vec x = v * v.row(k).adjoint();
    gs_append(out, x, thresh);
  }
  return out;
}

}  // namespace

FMatrix::FMatrix(Mat entries, const Tolerances& tol) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw Error(ErrorKind::InvalidInput, "F must be a non-empty square matrix");
  if (!m_.allFinite()) throw Error(ErrorKind::InvalidInput, "F has non-finite entries");
  if (smallest_over_largest_sv(m_) < tol.rank)
    throw Error(ErrorKind::SingularMatrix, "smallest singular value below tolerance");
}

std::vector<double> gram_spectrum(const Mat& f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(f.adjoint() * f, Eigen::EigenvaluesOnly);
  const RVec& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double reciprocal_root(double r) {
  if (r < 2.0) r = 2.0;
  return (r - std::sqrt(r * r - 4.0)) / 2.0;
}

Mat canonical_matrix_ao(int sign, const std::vector<double>& lambdas, int fixed_block) {
  const int k = static_cast<int>(lambdas.size());
  const int n = 2 * k + fixed_block;
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < k; ++i) {
    m(i, k + i) = lambdas[i];
    m(k + i, i) = static_cast<double>(sign) / lambdas[i];
  }
  for (int i = 2 * k; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat CanonicalFormAo::canonical() const { return canonical_matrix_ao(sign, lambdas, fixed_block); }

AoParams validate_ao(const FMatrix& f, const Tolerances& tol) {
  const Mat& m = f.matrix();
  const int n = f.n();
  const Mat ffbar = m * m.conjugate();
  const cplx c = ffbar.trace() / static_cast<double>(n);
  const double scale = m.squaredNorm();
  AoParams p;
  p.residual = (ffbar - c * Mat::Identity(n, n)).norm() / scale;
  if (p.residual > tol.check)
    throw Error(ErrorKind::NotAoAdmissible, "F Fbar is not a scalar multiple of the identity");
  if (std::abs(c.imag()) > tol.check * scale)
    throw Error(ErrorKind::NotAoAdmissible, "F Fbar = c 1 with non-real c");
  p.c = c.real();
  p.sign = p.c > 0 ? 1 : -1;
  p.trace = scale;
  p.beta = p.c / p.trace;
  p.qdim = p.trace / std::abs(p.c);
  return p;
}

FMatrix normalize_ao(const FMatrix& f, const Tolerances& tol) {
  const AoParams p = validate_ao(f, tol);
  return FMatrix(f.matrix() / std::sqrt(std::abs(p.c)), tol);
}

CanonicalFormAo canonical_form_ao(const FMatrix& f, const Tolerances& tol) {
  const AoParams par = validate_ao(f, tol);
  if (std::abs(std::abs(par.c) - 1.0) > tol.check)
    throw Error(ErrorKind::NotNormalized, "canonical form needs |c| = 1");
  const Mat& F = f.matrix();
  const int n = f.n();
  if (par.sign < 0 && n % 2 != 0)
    throw Error(ErrorKind::DegenerateEigenpairing, "sign -1 with odd n");

  Eigen::SelfAdjointEigenSolver<Mat> es(F.adjoint() * F);
  RVec p = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Mat& V = es.eigenvectors();
  const double pmax = p(n - 1);
  const double pair_tol = tol.check * std::max(1.0, pmax * pmax);
  for (int i = 0; i < n; ++i)
    if (std::abs(p(i) * p(n - 1 - i) - 1.0) > pair_tol)
      throw Error(ErrorKind::DegenerateEigenpairing, "eigenvalues of |F| are not reciprocal pairs");

  // Polar decomposition F = U |F| and the antiunitary J(ξ) = conj(U ξ).
  const Mat U = F * V * p.cwiseInverse().asDiagonal() * V.adjoint();
  auto J = [&U](const Vec& x) -> Vec { return (U * x).conjugate(); };

  int first_big = n, n_one = 0;
  for (int i = 0; i < n; ++i) {
    if (p(i) > 1.0 + tol.check) {
      first_big = i;
      break;
    }
    if (p(i) >= 1.0 - tol.check) ++n_one;
  }
  const int k_big = n - first_big;
  if (par.sign < 0 && n_one % 2 != 0)
    throw Error(ErrorKind::DegenerateEigenpairing, "odd multiplicity of eigenvalue 1 with sign -1");

  // Eigenvectors with eigenvalue > 1, clustered; largest eigenvalue first so
  // that lambda = 1/p comes out nondecreasing.
  std::vector<Vec> etas;
  std::vector<double> lambdas;
  {
    RVec vals = p.tail(k_big).reverse();
    Mat vecs = V.rightCols(k_big).rowwise().reverse();
    for (const Cluster& cl : clusters(vals, vecs, tol.check)) {
      for (Vec& e : projected_standard_basis(cl.vectors)) {
        const double pe = (e.adjoint() * (V * p.asDiagonal() * V.adjoint()) * e)(0, 0).real();
        etas.push_back(e);
        lambdas.push_back(1.0 / pe);
      }
    }
  }

  const Mat V1 = V.middleCols(first_big - n_one, n_one);
  const double thresh = 0.5 / std::sqrt(static_cast<double>(n));
  std::vector<Vec> mus;
  if (par.sign > 0) {
    for (int k = 0; k < n && static_cast<int>(mus.size()) < n_one; ++k) {
      const Vec x = V1 * V1.row(k).adjoint();
      const Vec jx = J(x);
      gs_append(mus, x + jx, thresh);
      if (static_cast<int>(mus.size()) < n_one) gs_append(mus, cplx(0, 1) * (x - jx), thresh);
    }
    // Gram-Schmidt with real coefficients keeps the vectors J-fixed; clean
    // up the rounding drift.
    for (Vec& m : mus) m = 0.5 * (m + J(m));
  } else {
    std::vector<Vec> span;  // μ's and J μ's together
    for (int k = 0; k < n && static_cast<int>(mus.size()) < n_one / 2; ++k) {
      const Vec x = V1 * V1.row(k).adjoint();
      if (gs_append(span, x, thresh)) {
        mus.push_back(span.back());
        span.push_back(J(span.back()));
      }
    }
  }
  const int expected_mus = par.sign > 0 ? n_one : n_one / 2;
  if (static_cast<int>(mus.size()) != expected_mus)
    throw Error(ErrorKind::DegenerateEigenpairing, "could not extract a basis of the unit eigenspace");

  CanonicalFormAo out;
  out.sign = par.sign;
  out.transition = Mat(n, n);
  if (par.sign > 0) {
    const int k = static_cast<int>(etas.size());
    for (int i = 0; i < k; ++i) {
      out.transition.col(i) = etas[i];
      out.transition.col(k + i) = J(etas[i]);
    }
    for (int i = 0; i < n_one; ++i) out.transition.col(2 * k + i) = mus[i];
    out.lambdas = lambdas;
    out.fixed_block = n_one;
  } else {
    std::vector<Vec> first = etas;
    first.insert(first.end(), mus.begin(), mus.end());
    const int h = n / 2;
    for (int i = 0; i < h; ++i) {
      out.transition.col(i) = first[i];
      out.transition.col(h + i) = -J(first[i]);
    }
    out.lambdas = lambdas;
    out.lambdas.insert(out.lambdas.end(), mus.size(), 1.0);
    out.fixed_block = 0;
  }

  const Mat recon = out.transition.transpose() * F * out.transition;
  if (rel_residual(recon, out.canonical()) > tol.check)
    throw Error(ErrorKind::DegenerateEigenpairing, "canonical form does not reproduce F");
  return out;
}

AoEquivalence equivalent_ao(const FMatrix& f1, const FMatrix& f2, const Tolerances& tol) {
  AoEquivalence out;
  const AoParams p1 = validate_ao(f1, tol);
  const AoParams p2 = validate_ao(f2, tol);
  if (f1.n() != f2.n() || p1.sign != p2.sign) return out;
  const auto s1 = gram_spectrum(f1.matrix() / std::sqrt(std::abs(p1.c)));
  const auto s2 = gram_spectrum(f2.matrix() / std::sqrt(std::abs(p2.c)));
  for (size_t i = 0; i < s1.size(); ++i)
    if (std::abs(s1[i] - s2[i]) > tol.check * std::max(1.0, std::abs(s1[i]))) return out;
  out.equivalent = true;
  out.scale_modulus = std::sqrt(std::abs(p2.c) / std::abs(p1.c));
  return out;
}

bool monoidally_equivalent_ao(const FMatrix& f1, const FMatrix& f2, const Tolerances& tol) {
  const AoParams p1 = validate_ao(f1, tol);
  const AoParams p2 = validate_ao(f2, tol);
  return std::abs(p1.beta - p2.beta) <= tol.check;
}

FMatrix construct_ao_companion(int sign, double trace, int n, const Tolerances& tol) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidInput, "sign must be +1 or -1");
  if (n <= 0) throw Error(ErrorKind::InvalidInput, "n must be positive");
  if (sign < 0 && n % 2 != 0) throw Error(ErrorKind::Infeasible, "sign -1 needs even n");
  if (!(trace >= n - tol.check)) throw Error(ErrorKind::Infeasible, "trace below n");

  if (sign > 0 && std::abs(trace - n) <= tol.check)
    return FMatrix(Mat::Identity(n, n), tol);
  if (sign > 0 && n == 1) throw Error(ErrorKind::Infeasible, "n = 1 forces trace 1");

  const double lambda = std::sqrt(reciprocal_root(trace - (n - 2)));
  std::vector<double> lambdas;
  int fixed = 0;
  if (sign < 0) {
    lambdas.assign(n / 2 - 1, 1.0);
    lambdas.insert(lambdas.begin(), lambda);
  } else {
    lambdas = {lambda};
    fixed = n - 2;
  }
  return FMatrix(canonical_matrix_ao(sign, lambdas, fixed), tol);
}

AuParams validate_au(const FMatrix& f, const Tolerances& tol) {
  Eigen::JacobiSVD<Mat> svd(f.matrix());
  const RVec s = svd.singularValues();
  if (s(s.size() - 1) < tol.rank * std::max(1.0, s(0)))
    throw Error(ErrorKind::SingularMatrix, "smallest singular value below tolerance");
  AuParams p;
  p.trace = s.squaredNorm();
  p.inv_trace = s.cwiseInverse().squaredNorm();
  p.qdim = std::sqrt(p.trace * p.inv_trace);
  p.c = p.qdim;
  return p;
}

FMatrix normalize_au(const FMatrix& f, const Tolerances& tol) {
  const AuParams p = validate_au(f, tol);
  return FMatrix(f.matrix() * std::pow(p.inv_trace / p.trace, 0.25), tol);
}

std::vector<double> canonical_form_au(const FMatrix& f, const Tolerances& tol) {
  const FMatrix g = normalize_au(f, tol);
  Eigen::JacobiSVD<Mat> svd(g.matrix());
  const RVec& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end());
  return out;
}

bool equivalent_au(const FMatrix& f1, const FMatrix& f2, const Tolerances& tol) {
  if (f1.n() != f2.n()) return false;
  const auto s1 = canonical_form_au(f1, tol);
  const auto s2 = canonical_form_au(f2, tol);
  for (size_t i = 0; i < s1.size(); ++i)
    if (std::abs(s1[i] - s2[i]) > tol.check * std::max(1.0, s1[i])) return false;
  return true;
}

bool monoidally_equivalent_au(const FMatrix& f1, const FMatrix& f2, const Tolerances& tol) {
  const double q1 = validate_au(f1, tol).qdim;
  const double q2 = validate_au(f2, tol).qdim;
  return std::abs(q1 - q2) <= tol.check * std::max(1.0, q1);
}

}  // namespace qmon
