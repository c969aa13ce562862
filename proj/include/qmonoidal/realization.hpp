#pragma once

#include "qmonoidal/core.hpp"
#include "qmonoidal/diagram.hpp"
#include "qmonoidal/fmatrix.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace qmon {

enum class Variant { ao, au };

const char* to_string(Variant v);

/// Orthonormal (Frobenius) basis of Mor(U^bottom, U^top) plus the diagrams
/// spanning it.
struct MorphismSpace {
  Word bottom, top;
  std::vector<Diagram> diagrams;
  std::vector<Mat> basis;

  int dim() const { return static_cast<int>(basis.size()); }
};

struct JWProjection {
  Word label;
  Mat projection;  // P_x on K^{⊗|x|}
  Mat carrier;     // orthonormal basis of range(P_x), n^{|x|} × rank
  int rank = 0;
  double residual = 0.0;  // max of ‖P² − P‖, ‖P − P*‖ and ‖P·insertion‖
};

/// One copy of U_z inside U_x ⊗ U_y. `S` acts on carrier coordinates
/// (d_x·d_y × d_z). It is the projection of the diagram combination
/// Σ_l coeffs(l) · diagrams[l] (diagrams indexed into
/// enumerate_diagrams(z, x + y)), so the same recipe can be evaluated in any
/// equivalent realization.
struct FusionChannel {
  Word z;
  int index = 0;  // 0..multiplicity-1
  Mat S;
  std::vector<int> diagrams;
  Vec coeffs;
};

struct FusionIsometries {
  Word x, y;
  std::vector<FusionChannel> channels;
  double orthogonality_residual = 0.0;
  double completeness_residual = 0.0;

  /// Channels with target label z.
  std::vector<const FusionChannel*> to(const Word& z) const;
};

/// Concrete realization of the representation category of A_o(F) or A_u(F)
/// on tensor powers of K = ℂⁿ. Copies share their caches.
class Realization {
 public:
  /// Normalizes F first. Default level cap: 6 for n ≤ 2, 4 otherwise.
  static Realization ao(const FMatrix& f, const Tolerances& tol = {}, int level_cap = 0);
  /// F must be A_u-normalized (Tr F*F = Tr (F*F)⁻¹). Default word-length cap 4.
  static Realization au(const FMatrix& f, const Tolerances& tol = {}, int level_cap = 0);

  Variant variant() const { return variant_; }
  const Mat& F() const { return f_; }
  int n() const { return static_cast<int>(f_.rows()); }
  /// Tr(F*F) of the normalized F (loop parameter of the fundamental).
  double delta() const { return delta_; }
  /// Value of a normalized snake: β for A_o, 1/c for A_u.
  double sigma() const { return sigma_; }
  int sign() const { return sign_; }
  int level_cap() const { return cap_; }
  const Tolerances& tol() const { return tol_; }
  Coloring coloring() const { return Coloring{variant_ == Variant::au}; }

  /// Normalized cup in Mor(ε, x y), component (i, j) at i·n + j.
  const Vec& cup(char x, char y) const;

  Mat evaluate(const Diagram& d) const;
  Mat evaluate(const DiagramCombo& c) const;

  /// Throws OddParity for an empty space when `require_nonzero` is set and
  /// the lengths have different parity.
  MorphismSpace mor_basis(const Word& bottom, const Word& top, bool require_nonzero = false) const;

  const JWProjection& jw(const Word& x) const;
  const Mat& carrier(const Word& x) const { return jw(x).carrier; }
  int rank(const Word& x) const { return jw(x).rank; }

  /// Conjugate label: x itself for A_o, reversed and letter-swapped for A_u.
  Word dual(const Word& x) const { return variant_ == Variant::ao ? x : conjugate_word(x); }

  /// Irreducible labels up to the given level (A_o) or word length (A_u).
  std::vector<Word> labels(int max_len) const;

  /// (V_x ⊗ V_y)* D V_z for a matrix D : K^{⊗|z|} → K^{⊗|x|} ⊗ K^{⊗|y|}.
  Mat to_carriers(const Mat& d, const Word& x, const Word& y, const Word& z) const;

  /// Coefficient matrix T of the nested cup in carrier coordinates,
  /// d_x × d_x̄; S_t ξ = Tᵗ ξ̄.
  Mat conjugation_matrix(const Word& x) const;
  /// Q_x = T T*, scaled so that Tr Q = Tr Q⁻¹.
  Mat q_matrix(const Word& x) const;
  double irrep_qdim(const Word& x) const;

  const FusionIsometries& fusion(const Word& x, const Word& y) const;
  /// Evaluates the recipes of `src` (computed in another realization) here.
  FusionIsometries transport_fusion(const FusionIsometries& src) const;

  /// Unitary change of basis between ((x y) z) and (x (y z)) decompositions
  /// of Mor(a, x ⊗ y ⊗ z); rows indexed by the (w, channel) list of the
  /// first, columns by the (v, channel) list of the second.
  Mat sixj(const Word& a, const Word& x, const Word& y, const Word& z) const;

 private:
  struct Cache {
    std::mutex mu;
    std::map<Word, std::shared_ptr<const JWProjection>> jw;
    std::map<std::pair<Word, Word>, std::shared_ptr<const FusionIsometries>> fusion;
  };

  Realization() = default;
  void check_cap(int len, const char* what) const;
  FusionIsometries compute_fusion(const Word& x, const Word& y) const;
  std::vector<Word> fusion_candidates(const Word& x, const Word& y) const;

  Variant variant_ = Variant::ao;
  Mat f_;
  double delta_ = 0.0;
  double sigma_ = 0.0;
  int sign_ = 1;
  int cap_ = 4;
  Tolerances tol_;
  Vec cup_t_, cup_s_;
  std::shared_ptr<Cache> cache_;
};

/// Evaluates the combination `c` (a morphism of `src`) in `dst`. Throws
/// BetaMismatch when the loop data of the two realizations differ.
Mat transport(const DiagramCombo& c, const Realization& src, const Realization& dst);

/// Same variant and same snake scalar (equal β, resp. equal c).
bool same_loop_data(const Realization& a, const Realization& b);

}  // namespace qmon
