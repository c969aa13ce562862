#pragma once

#include "qmonoidal/kernels.hpp"
#include "qmonoidal/realization.hpp"

#include <map>
#include <memory>
#include <vector>

namespace qmon {

/// Basis element e^x_{ab}: a indexes the target carrier (dim H_φ(x)), b the
/// source carrier (dim H_x).
struct BasisIndex {
  Word label;
  int a = 0;
  int b = 0;
};

struct LabelBlock {
  Word label;
  int level = 0;  // word length
  BlockRef ref;   // rows = target rank, cols = source rank
};

/// The truncated linking *-algebra spanned by the coefficients of the
/// unitaries X^x between two monoidally equivalent realizations. With
/// source == target this is the coefficient Hopf *-algebra.
class LinkingAlgebra {
 public:
  /// Throws NotMonoidallyEquivalent or LevelCapExceeded. `jobs` sizes the
  /// OpenMP assembly (0: runtime default, 1: serial kernels).
  static LinkingAlgebra build(const Realization& source, const Realization& target, int level, int jobs = 0);

  Variant variant() const { return r1_.variant(); }
  const Realization& source() const { return r1_; }
  const Realization& target() const { return r2_; }
  int level() const { return level_; }
  int dim() const { return dim_; }
  int jobs() const { return jobs_; }

  const std::vector<LabelBlock>& blocks() const { return blocks_; }
  const LabelBlock& block(const Word& x) const;
  bool has_label(const Word& x) const { return block_of_.count(x) != 0; }
  int index(const Word& x, int a, int b) const;
  BasisIndex basis(int i) const;
  int level_of(int i) const { return level_of_[static_cast<size_t>(i)]; }

  SparseVec unit() const;
  SparseVec element(int i) const;
  /// Product via the structure constants; LevelCapExceeded out of cap.
  SparseVec multiply(const SparseVec& a, const SparseVec& b) const;
  SparseVec star(const SparseVec& a) const;
  cplx omega(const SparseVec& a) const;
  /// ω(a b) for any a, b in the truncation; only the trivial channel enters,
  /// so the cap does not apply.
  cplx omega_product(const SparseVec& a, const SparseVec& b) const;

  const ProductTable& products() const { return *table_; }
  const std::vector<SparseVec>& star_table() const { return star_; }
  /// W(i, j) = ω(e_i e_j).
  const Mat& pairing() const { return pairing_; }

  /// Source-side Q_x and dim_q(x).
  const Mat& q(const Word& x) const;
  double dim_q(const Word& x) const;

  /// Fault injection for negative tests: adds `delta` to the coefficient of
  /// e_k in e_i e_j.
  void perturb_product(int i, int j, int k, cplx delta);

 private:
  LinkingAlgebra(const Realization& s, const Realization& t) : r1_(s), r2_(t) {}

  Realization r1_, r2_;
  int level_ = 0;
  int dim_ = 0;
  int jobs_ = 0;
  std::vector<LabelBlock> blocks_;
  std::map<Word, int> block_of_;
  std::vector<int> level_of_;
  std::vector<int> block_index_;
  std::shared_ptr<ProductTable> table_;
  std::vector<SparseVec> star_;
  Mat pairing_;
  std::map<Word, Mat> q_;
};

/// Gram matrix G(i, j) = ω(e_i e_j*) from the structure data.
Mat gram(const LinkingAlgebra& l, Exec exec = Exec::parallel);
/// Same matrix from δ_xy δ_aa' Q_x(b, b') / dim_q(x).
Mat gram_closed(const LinkingAlgebra& l);

struct RelationReport {
  double unit = 0.0;           // unit on in-cap products
  double omega_vanish = 0.0;   // max |ω(e)| over x ≠ ε
  double assoc = 0.0;
  double star_involutive = 0.0;
  double antimult = 0.0;
  double gram_agreement = 0.0;
  double min_gram_eig = 0.0;
  double unitarity = 0.0;      // fundamental X: X X* − 1 and X* X − 1
  double block_unitarity = 0.0;  // every X^x with 2|x| ≤ N
  double conjugation = 0.0;    // A_o: Y − (F₂⊗1)Ȳ(F₁⁻¹⊗1); A_u: unitarity of that matrix
};

/// Throws LevelCapExceeded when N < 2.
RelationReport check_relations(const LinkingAlgebra& l, Exec exec = Exec::parallel);

/// Matrix of algebra elements, rows × cols.
using AlgebraMatrix = std::vector<std::vector<SparseVec>>;
AlgebraMatrix block_matrix(const LinkingAlgebra& l, const Word& x);
/// max over entries of ‖(M N)_{ij} − δ_ij 1‖.
double unitarity_defect(const LinkingAlgebra& l, const AlgebraMatrix& m, const AlgebraMatrix& n);

struct SpectralQuantities {
  Word label;
  int mult = 0;
  double mult_q = 0.0;
  double dim_q = 0.0;
  Mat L;  // on K_x in the row basis
};

/// Throws LevelCapExceeded when 2|x| > N and NotPositive if L_x is not
/// positive definite.
SpectralQuantities spectral_quantities(const LinkingAlgebra& l, const Word& x);

/// Sign convention of the row slot: σ_t(C) = L^{−i s t} C (Q^{i s t})ᵀ on the
/// coefficient block C of label x.
enum class ModularConvention { plus = 1, minus = -1 };

/// σ_z on the basis for complex z (z = t real for the modular group, z = i
/// for the KMS continuation). Block diagonal, dim × dim.
Mat modular_map(const LinkingAlgebra& l, cplx z, ModularConvention conv = ModularConvention::plus);

/// max over basis pairs at level ≤ min(N, 2) of |ω(σ_i(a) b*) − ω(b* a)|.
double kms_check(const LinkingAlgebra& l, ModularConvention conv = ModularConvention::plus);

/// max |ω(ab) − ω(ba)| over level ≤ 1 basis pairs.
double trace_defect(const LinkingAlgebra& l);

enum class Side { source, target };

/// Element of B ⊗ A as (index in B, index in A) → coefficient.
using Tensor2 = std::map<std::pair<int, int>, cplx>;
using Tensor3 = std::map<std::array<int, 3>, cplx>;

/// Source side: δ(e^x_{ab}) = Σ_k e^x_{ak} ⊗ u^x_{kb}, u in `side_algebra`
/// built on (source, source). Target side: Σ_k u^x_{ak} ⊗ e^x_{kb}, u in the
/// algebra on (target, target), stored with the A leg second. Throws
/// SideNotBuilt when `side_algebra` is null or does not match.
Tensor2 coaction(const LinkingAlgebra& l, Side side, const SparseVec& element, const LinkingAlgebra* side_algebra);

struct CoactionReport {
  double coassociativity = 0.0;
  double invariance = 0.0;
  double homomorphism = 0.0;
  double commutation = 0.0;
};

/// `a1` on (source, source), `a2` on (target, target), both at the same level.
CoactionReport check_coactions(const LinkingAlgebra& l, const LinkingAlgebra* a1, const LinkingAlgebra* a2);

}  // namespace qmon
