#pragma once

#include "qmonoidal/realization.hpp"

#include <map>
#include <optional>

namespace qmon {

/// Which way the blocks are assembled from the pair (S, φ(S)):
///   twist:   Ω_{y,z} = Σ S u_x φ(S)* (u_y ⊗ u_z)*
///   inverse: Ω_{y,z} = Σ (u_y ⊗ u_z) φ(S) u_x* S*   (the adjoint of twist)
/// Only `twist` satisfies the cocycle identity in general; `inverse` is kept
/// for comparison.
enum class CocycleForm { twist, inverse };

/// Truncated dual 2-cocycle: one unitary block per label pair (y, z) with
/// |y| + |z| ≤ level, acting on carrier(y) ⊗ carrier(z) of the source.
struct CocycleBlocks {
  Realization source;
  int level = 0;
  std::map<std::pair<Word, Word>, Mat> blocks;
  std::map<std::pair<Word, Word>, bool> exact_identity;
  bool normalized = false;

  /// Throws MissingBlock.
  const Mat& at(const Word& y, const Word& z) const;

  /// Ω ≡ 1 on the source.
  static CocycleBlocks trivial(const Realization& r, int level);
};

/// Per-label unitaries u_x : H_φ(x) → H_x; labels absent from the map are
/// seeded with the identity in carrier coordinates. u_ε must be 1.
using LabelUnitaries = std::map<Word, Mat>;

/// Throws NotMonoidallyEquivalent, DimensionMismatch when a per-label rank
/// differs, PreconditionFailed for a bad u.
CocycleBlocks build_cocycle(const Realization& r1, const Realization& r2, int level, const LabelUnitaries& u = {},
                            CocycleForm form = CocycleForm::twist);

/// max over triples of ‖(Δ̂⊗ι)(Ω)(Ω⊗1) − (ι⊗Δ̂)(Ω)(1⊗Ω)‖ on
/// carrier(x) ⊗ carrier(y) ⊗ carrier(z), |x|+|y|+|z| ≤ level.
double check_cocycle_identity(const CocycleBlocks& omega, int level = -1);

/// max ‖Ω*Ω − 1‖ over blocks.
double unitarity_residual(const CocycleBlocks& omega);

/// Coboundary criterion for A_o: F₂ = v F₁ vᵗ for a unitary v, decided on
/// sign and spectrum of F*F. Requires admissible, normalized (|c| = 1)
/// matrices of equal size and trace; PreconditionFailed otherwise.
bool coboundary_equivalent(const FMatrix& f1, const FMatrix& f2, const Tolerances& tol = {});

}  // namespace qmon
