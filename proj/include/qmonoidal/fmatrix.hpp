#pragma once

#include "qmonoidal/core.hpp"

#include <optional>
#include <vector>

namespace qmon {

/// An invertible complex n×n matrix defining A_o(F) or A_u(F).
class FMatrix {
 public:
  /// Throws InvalidInput for a non-square or empty matrix and SingularMatrix
  /// when the smallest singular value is below tol.rank (relative to the largest).
  explicit FMatrix(Mat entries, const Tolerances& tol = {});

  int n() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }

  FMatrix scaled(cplx s) const { return FMatrix(s * m_); }

 private:
  Mat m_;
};

struct AoParams {
  double c = 0.0;      // F F̄ = c·1
  int sign = 1;
  double trace = 0.0;  // Tr(F*F)
  double beta = 0.0;   // c / Tr(F*F)
  double qdim = 0.0;   // Tr(F*F) / |c|
  double residual = 0.0;
};

struct AuParams {
  double trace = 0.0;      // Tr(F*F)
  double inv_trace = 0.0;  // Tr((F*F)^{-1})
  double qdim = 0.0;       // sqrt(trace * inv_trace)
  double c = 0.0;          // Tr(F*F) once balanced; equals qdim
};

struct CanonicalFormAo {
  int sign = 1;
  std::vector<double> lambdas;  // nondecreasing
  int fixed_block = 0;          // n - 2k for sign +1, always 0 for sign -1
  Mat transition;               // unitary w with wᵗ F w = canonical()

  Mat canonical() const;
};

/// The fundamental-domain matrix: [[0, D, 0], [D⁻¹, 0, 0], [0, 0, 1]] for
/// sign +1 and [[0, D], [-D⁻¹, 0]] for sign -1.
Mat canonical_matrix_ao(int sign, const std::vector<double>& lambdas, int fixed_block);

AoParams validate_ao(const FMatrix& f, const Tolerances& tol = {});
FMatrix normalize_ao(const FMatrix& f, const Tolerances& tol = {});
CanonicalFormAo canonical_form_ao(const FMatrix& f, const Tolerances& tol = {});

struct AoEquivalence {
  bool equivalent = false;
  std::optional<double> scale_modulus;  // |λ| in F₂ = λ v F₁ vᵗ
};

AoEquivalence equivalent_ao(const FMatrix& f1, const FMatrix& f2, const Tolerances& tol = {});
bool monoidally_equivalent_ao(const FMatrix& f1, const FMatrix& f2, const Tolerances& tol = {});

/// Canonical-form matrix with F F̄ = sign·1 and Tr(F*F) = trace. All non-unit
/// weight goes into a single pair.
FMatrix construct_ao_companion(int sign, double trace, int n, const Tolerances& tol = {});

AuParams validate_au(const FMatrix& f, const Tolerances& tol = {});
FMatrix normalize_au(const FMatrix& f, const Tolerances& tol = {});
/// Sorted (ascending) singular values of the balanced matrix.
std::vector<double> canonical_form_au(const FMatrix& f, const Tolerances& tol = {});
bool equivalent_au(const FMatrix& f1, const FMatrix& f2, const Tolerances& tol = {});
bool monoidally_equivalent_au(const FMatrix& f1, const FMatrix& f2, const Tolerances& tol = {});

/// Sorted eigenvalues of F*F.
std::vector<double> gram_spectrum(const Mat& f);

/// Positive root x of x + 1/x = r with x <= 1 (r >= 2).
double reciprocal_root(double r);

}  // namespace qmon
