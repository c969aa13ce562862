#include "qmonoidal/linking.hpp"

#include <algorithm>
#include <cmath>

namespace qmon {

namespace {

Exec exec_for(int jobs) { return jobs == 1 ? Exec::serial : Exec::parallel; }

}  // namespace

LinkingAlgebra LinkingAlgebra::build(const Realization& source, const Realization& target, int level, int jobs) {
  if (!same_loop_data(source, target))
    throw Error(ErrorKind::NotMonoidallyEquivalent, "source and target have different loop data");
  if (level < 0) throw Error(ErrorKind::InvalidInput, "negative level");
  if (level > source.level_cap() || level > target.level_cap())
    throw Error(ErrorKind::LevelCapExceeded,
                "level " + std::to_string(level) + " above realization cap " +
                    std::to_string(std::min(source.level_cap(), target.level_cap())));

  LinkingAlgebra l(source, target);
  l.level_ = level;
  l.jobs_ = jobs;

  int off = 0;
  for (const Word& x : source.labels(level)) {
    LabelBlock b;
    b.label = x;
    b.level = static_cast<int>(x.size());
    b.ref = BlockRef{off, target.rank(x), source.rank(x)};
    l.block_of_[x] = static_cast<int>(l.blocks_.size());
    for (int k = 0; k < b.ref.rows * b.ref.cols; ++k) {
      l.level_of_.push_back(b.level);
      l.block_index_.push_back(static_cast<int>(l.blocks_.size()));
    }
    off += b.ref.rows * b.ref.cols;
    l.blocks_.push_back(std::move(b));
  }
  l.dim_ = off;

  // Structure constants, one task per label pair inside the cap.
  std::vector<PairTask> tasks;
  for (const LabelBlock& by : l.blocks_)
    for (const LabelBlock& bz : l.blocks_) {
      if (by.level + bz.level > level) continue;
      const FusionIsometries& fi = source.fusion(by.label, bz.label);
      const FusionIsometries fi2 = target.transport_fusion(fi);
      PairTask task;
      task.y = by.ref;
      task.z = bz.ref;
      for (size_t c = 0; c < fi.channels.size(); ++c)
        task.channels.push_back(ChannelData{l.block(fi.channels[c].z).ref, fi.channels[c].S, fi2.channels[c].S});
      tasks.push_back(std::move(task));
    }
  l.table_ = std::make_shared<ProductTable>(assemble_products(l.dim_, tasks, exec_for(jobs), jobs));

  // Involution and pairing table, label by label.
  const double tol = source.tol().check;
  l.star_.resize(static_cast<size_t>(l.dim_));
  l.pairing_ = Mat::Zero(l.dim_, l.dim_);
  for (const LabelBlock& bx : l.blocks_) {
    const Word& x = bx.label;
    const Word xb = source.dual(x);
    const LabelBlock& bxb = l.block(xb);
    const Mat t1 = source.conjugation_matrix(x);    // d_x × d_x̄
    const Mat t1b = source.conjugation_matrix(xb);  // d_x̄ × d_x
    const Mat t2 = target.conjugation_matrix(x);
    const Mat t2b = target.conjugation_matrix(xb);
    // t̃ = κ · cup(x̄, x) is fixed by the snake (t̃* ⊗ 1)(1 ⊗ t) = 1.
    const Mat snake = t1b.transpose() * t1.adjoint();
    const cplx kappa = static_cast<double>(snake.rows()) / snake.trace();
    if ((kappa * snake - Mat::Identity(snake.rows(), snake.cols())).norm() > tol)
      throw Error(ErrorKind::NumericalDegeneracy, "conjugation snake is not scalar at " + x);
    const Mat tt = kappa * t2b;  // d'_x̄ × d'_x
    for (int a = 0; a < bx.ref.rows; ++a)
      for (int b = 0; b < bx.ref.cols; ++b) {
        SparseVec s;
        for (int k = 0; k < bxb.ref.rows; ++k)
          for (int m = 0; m < bxb.ref.cols; ++m) {
            const cplx v = std::conj(tt(k, a)) * t1(b, m);
            if (v != cplx(0.0)) s.add(bxb.ref.offset + k * bxb.ref.cols + m, v);
          }
        l.star_[static_cast<size_t>(bx.ref.offset + a * bx.ref.cols + b)] = std::move(s);
      }

    // ω(e^x_{ac} e^x̄_{bd}) = φ(s)_{ab} conj(s_{cd}) with s the unit-norm cup.
    const double nn = t1.squaredNorm();
    for (int a = 0; a < bx.ref.rows; ++a)
      for (int c = 0; c < bx.ref.cols; ++c)
        for (int b = 0; b < bxb.ref.rows; ++b)
          for (int d = 0; d < bxb.ref.cols; ++d)
            l.pairing_(bx.ref.offset + a * bx.ref.cols + c, bxb.ref.offset + b * bxb.ref.cols + d) =
                t2(a, b) * std::conj(t1(c, d)) / nn;

    l.q_[x] = source.q_matrix(x);
  }
  return l;
}

const LabelBlock& LinkingAlgebra::block(const Word& x) const {
  auto it = block_of_.find(x);
  if (it == block_of_.end()) throw Error(ErrorKind::LevelCapExceeded, "label '" + x + "' is outside the truncation");
  return blocks_[static_cast<size_t>(it->second)];
}

int LinkingAlgebra::index(const Word& x, int a, int b) const {
  const LabelBlock& bl = block(x);
  if (a < 0 || a >= bl.ref.rows || b < 0 || b >= bl.ref.cols)
    throw Error(ErrorKind::InvalidInput, "basis index out of range");
  return bl.ref.offset + a * bl.ref.cols + b;
}

BasisIndex LinkingAlgebra::basis(int i) const {
  const LabelBlock& bl = blocks_[static_cast<size_t>(block_index_.at(static_cast<size_t>(i)))];
  const int r = i - bl.ref.offset;
  return BasisIndex{bl.label, r / bl.ref.cols, r % bl.ref.cols};
}

SparseVec LinkingAlgebra::unit() const { return element(0); }

SparseVec LinkingAlgebra::element(int i) const {
  SparseVec s;
  s.add(i, 1.0);
  return s;
}

SparseVec LinkingAlgebra::multiply(const SparseVec& a, const SparseVec& b) const {
  return table_multiply(*table_, a, b);
}

SparseVec LinkingAlgebra::star(const SparseVec& a) const {
  Vec out = Vec::Zero(dim_);
  for (size_t k = 0; k < a.idx.size(); ++k) {
    const SparseVec& s = star_[static_cast<size_t>(a.idx[k])];
    const cplx c = std::conj(a.val[k]);
    for (size_t m = 0; m < s.idx.size(); ++m) out(s.idx[m]) += c * s.val[m];
  }
  return compress(out);
}

cplx LinkingAlgebra::omega(const SparseVec& a) const {
  cplx acc = 0.0;
  for (size_t k = 0; k < a.idx.size(); ++k)
    if (a.idx[k] == 0) acc += a.val[k];
  return acc;
}

cplx LinkingAlgebra::omega_product(const SparseVec& a, const SparseVec& b) const {
  cplx acc = 0.0;
  for (size_t p = 0; p < a.idx.size(); ++p)
    for (size_t q = 0; q < b.idx.size(); ++q) acc += a.val[p] * b.val[q] * pairing_(a.idx[p], b.idx[q]);
  return acc;
}

const Mat& LinkingAlgebra::q(const Word& x) const {
  auto it = q_.find(x);
  if (it == q_.end()) throw Error(ErrorKind::LevelCapExceeded, "label '" + x + "' is outside the truncation");
  return it->second;
}

double LinkingAlgebra::dim_q(const Word& x) const { return q(x).trace().real(); }

void LinkingAlgebra::perturb_product(int i, int j, int k, cplx delta) {
  auto fresh = std::make_shared<ProductTable>(*table_);
  if (!fresh->has(i, j)) throw Error(ErrorKind::LevelCapExceeded, "perturbing an undefined product");
  Vec v = expand(fresh->at(i, j), dim_);
  v(k) += delta;
  fresh->at(i, j) = compress(v);
  table_ = std::move(fresh);
}

Mat gram(const LinkingAlgebra& l, Exec exec) { return gram_from_pairing(l.pairing(), l.star_table(), exec, l.jobs()); }

Mat gram_closed(const LinkingAlgebra& l) {
  Mat g = Mat::Zero(l.dim(), l.dim());
  for (const LabelBlock& bl : l.blocks()) {
    const Mat& q = l.q(bl.label);
    const double dq = q.trace().real();
    for (int a = 0; a < bl.ref.rows; ++a)
      for (int b = 0; b < bl.ref.cols; ++b)
        for (int b2 = 0; b2 < bl.ref.cols; ++b2)
          g(bl.ref.offset + a * bl.ref.cols + b, bl.ref.offset + a * bl.ref.cols + b2) = q(b2, b) / dq;
  }
  return g;
}

AlgebraMatrix block_matrix(const LinkingAlgebra& l, const Word& x) {
  const LabelBlock& bl = l.block(x);
  AlgebraMatrix m(static_cast<size_t>(bl.ref.rows), std::vector<SparseVec>(static_cast<size_t>(bl.ref.cols)));
  for (int a = 0; a < bl.ref.rows; ++a)
    for (int b = 0; b < bl.ref.cols; ++b) m[a][b] = l.element(bl.ref.offset + a * bl.ref.cols + b);
  return m;
}

namespace {

AlgebraMatrix adjoint_matrix(const LinkingAlgebra& l, const AlgebraMatrix& m) {
  const size_t rows = m.size(), cols = m.empty() ? 0 : m[0].size();
  AlgebraMatrix out(cols, std::vector<SparseVec>(rows));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) out[j][i] = l.star(m[i][j]);
  return out;
}

}  // namespace

double unitarity_defect(const LinkingAlgebra& l, const AlgebraMatrix& m, const AlgebraMatrix& n) {
  const size_t rows = m.size(), inner = n.size(), cols = n.empty() ? 0 : n[0].size();
  if (!m.empty() && m[0].size() != inner) throw Error(ErrorKind::DimensionMismatch, "algebra matrix shapes");
  double worst = 0.0;
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) {
      Vec acc = Vec::Zero(l.dim());
      for (size_t k = 0; k < inner; ++k) acc += expand(l.multiply(m[i][k], n[k][j]), l.dim());
      if (i == j) acc(0) -= 1.0;
      worst = std::max(worst, acc.norm());
    }
  return worst;
}

RelationReport check_relations(const LinkingAlgebra& l, Exec exec) {
  if (l.level() < 2) throw Error(ErrorKind::LevelCapExceeded, "relations need level ≥ 2");
  RelationReport rep;
  const int dim = l.dim();
  const ProductTable& t = l.products();

  for (int i = 0; i < dim; ++i) {
    const SparseVec e = l.element(i);
    const Vec ev = expand(e, dim);
    rep.unit = std::max(rep.unit, (expand(l.multiply(l.unit(), e), dim) - ev).norm());
    rep.unit = std::max(rep.unit, (expand(l.multiply(e, l.unit()), dim) - ev).norm());
    if (i != 0) rep.omega_vanish = std::max(rep.omega_vanish, std::abs(l.omega(e)));
    rep.star_involutive = std::max(rep.star_involutive, (expand(l.star(l.star(e)), dim) - ev).norm());
  }

  std::vector<std::array<int, 3>> triples;
  std::vector<std::array<int, 2>> pairs;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const int lij = l.level_of(i) + l.level_of(j);
      if (lij > l.level()) continue;
      pairs.push_back({i, j});
      for (int k = 0; k < dim; ++k)
        if (lij + l.level_of(k) <= l.level()) triples.push_back({i, j, k});
    }
  rep.assoc = associativity_residual(t, triples, exec, l.jobs());
  rep.antimult = antimultiplicativity_residual(t, l.star_table(), pairs, exec, l.jobs());

  const Mat g = gram(l, exec);
  rep.gram_agreement = (g - gram_closed(l)).cwiseAbs().maxCoeff();
  const Mat gh = 0.5 * (g + g.adjoint());
  rep.min_gram_eig = Eigen::SelfAdjointEigenSolver<Mat>(gh).eigenvalues().minCoeff();

  const Word fund = "a";
  const AlgebraMatrix x = block_matrix(l, fund);
  const AlgebraMatrix xs = adjoint_matrix(l, x);
  rep.unitarity = std::max(unitarity_defect(l, x, xs), unitarity_defect(l, xs, x));
  for (const LabelBlock& bl : l.blocks()) {
    if (2 * bl.level > l.level()) continue;
    const AlgebraMatrix m = block_matrix(l, bl.label);
    const AlgebraMatrix ms = adjoint_matrix(l, m);
    rep.block_unitarity = std::max({rep.block_unitarity, unitarity_defect(l, m, ms), unitarity_defect(l, ms, m)});
  }

  // Z = (F₂ ⊗ 1) X̄ (F₁⁻¹ ⊗ 1), X̄ the entrywise adjoint.
  const Mat& f1 = l.source().F();
  const Mat& f2 = l.target().F();
  const Mat f1i = f1.inverse();
  const int rows = static_cast<int>(x.size()), cols = static_cast<int>(x[0].size());
  AlgebraMatrix z(static_cast<size_t>(rows), std::vector<SparseVec>(static_cast<size_t>(cols)));
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b) {
      Vec acc = Vec::Zero(dim);
      for (int c = 0; c < rows; ++c)
        for (int d = 0; d < cols; ++d) acc += f2(a, c) * f1i(d, b) * expand(l.star(x[c][d]), dim);
      z[a][b] = compress(acc);
    }
  if (l.variant() == Variant::ao) {
    for (int a = 0; a < rows; ++a)
      for (int b = 0; b < cols; ++b)
        rep.conjugation = std::max(rep.conjugation, (expand(z[a][b], dim) - expand(x[a][b], dim)).norm());
  } else {
    const AlgebraMatrix zs = adjoint_matrix(l, z);
    rep.conjugation = std::max(unitarity_defect(l, z, zs), unitarity_defect(l, zs, z));
  }
  return rep;
}

namespace {

// ⟨L_x Y_a, Y_a'⟩ with Y_a the rows of X^x and t ∈ Mor(ε, x̄ ⊗ x), t*t = dim_q(x).
Mat compute_L(const LinkingAlgebra& l, const Word& x) {
  const LabelBlock& bl = l.block(x);
  Mat t = l.source().conjugation_matrix(l.source().dual(x));  // d_x̄ × d_x
  t *= std::sqrt(l.dim_q(x)) / t.norm();
  const Mat tt = t.adjoint() * t;  // (j', j)
  Mat L = Mat::Zero(bl.ref.rows, bl.ref.rows);
  for (int ap = 0; ap < bl.ref.rows; ++ap)
    for (int a = 0; a < bl.ref.rows; ++a) {
      cplx acc = 0.0;
      for (int jp = 0; jp < bl.ref.cols; ++jp) {
        const SparseVec zs = l.star(l.element(bl.ref.offset + ap * bl.ref.cols + jp));
        for (int j = 0; j < bl.ref.cols; ++j)
          acc += tt(jp, j) * l.omega_product(zs, l.element(bl.ref.offset + a * bl.ref.cols + j));
      }
      L(ap, a) = acc;
    }
  L = 0.5 * (L + L.adjoint());
  const RVec ev = Eigen::SelfAdjointEigenSolver<Mat>(L).eigenvalues();
  if (ev.minCoeff() <= l.source().tol().rank * std::max(1.0, ev.maxCoeff()))
    throw Error(ErrorKind::NotPositive, "L is not positive definite at '" + x + "'");
  return L;
}

void check_positive(const Mat& q, const Word& x, double tol) {
  const RVec ev = Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (q + q.adjoint())).eigenvalues();
  if (ev.minCoeff() <= tol * std::max(1.0, ev.maxCoeff()))
    throw Error(ErrorKind::NotPositive, "Q is not positive definite at '" + x + "'");
}

}  // namespace

SpectralQuantities spectral_quantities(const LinkingAlgebra& l, const Word& x) {
  if (2 * static_cast<int>(x.size()) > l.level())
    throw Error(ErrorKind::LevelCapExceeded, "spectral quantities need 2|x| ≤ N");
  SpectralQuantities s;
  s.label = x;
  s.mult = l.block(x).ref.rows;
  s.L = compute_L(l, x);
  const Mat lb = compute_L(l, l.source().dual(x));
  s.mult_q = std::sqrt(s.L.trace().real() * lb.trace().real());
  s.dim_q = l.dim_q(x);
  return s;
}

Mat modular_map(const LinkingAlgebra& l, cplx z, ModularConvention conv) {
  const double s = static_cast<int>(conv);
  const cplx i(0.0, 1.0);
  Mat out = Mat::Zero(l.dim(), l.dim());
  for (const LabelBlock& bl : l.blocks()) {
    const Mat& q = l.q(bl.label);
    check_positive(q, bl.label, l.source().tol().rank);
    const Mat L = compute_L(l, bl.label);
    const Mat left = positive_power(L, -i * s * z);
    const Mat right = positive_power(q, i * s * z);
    out.block(bl.ref.offset, bl.ref.offset, bl.ref.rows * bl.ref.cols, bl.ref.rows * bl.ref.cols) = kron(left, right);
  }
  return out;
}

double kms_check(const LinkingAlgebra& l, ModularConvention conv) {
  const int dim = l.dim();
  const Mat sigma = modular_map(l, cplx(0.0, 1.0), conv);
  Mat st = Mat::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) st.col(j) = expand(l.star_table()[static_cast<size_t>(j)], dim);
  const Mat& w = l.pairing();
  const Mat lhs = sigma.transpose() * w * st;  // (i, j) ↦ ω(σ_i(e_i) e_j*)
  const Mat rhs = st.transpose() * w;          // (j, i) ↦ ω(e_j* e_i)
  const int cap = std::min(l.level(), 2);
  double worst = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      if (l.level_of(a) <= cap && l.level_of(b) <= cap) worst = std::max(worst, std::abs(lhs(a, b) - rhs(b, a)));
  return worst;
}

double trace_defect(const LinkingAlgebra& l) {
  const Mat& w = l.pairing();
  double worst = 0.0;
  for (int a = 0; a < l.dim(); ++a)
    for (int b = 0; b < l.dim(); ++b)
      if (l.level_of(a) <= 1 && l.level_of(b) <= 1) worst = std::max(worst, std::abs(w(a, b) - w(b, a)));
  return worst;
}

namespace {

bool same_matrix(const Mat& a, const Mat& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).norm() <= tol;
}

void require_side(const LinkingAlgebra& l, Side side, const LinkingAlgebra* s) {
  const char* name = side == Side::source ? "source" : "target";
  if (s == nullptr) throw Error(ErrorKind::SideNotBuilt, std::string(name) + " coefficient algebra missing");
  const Realization& r = side == Side::source ? l.source() : l.target();
  const double tol = r.tol().check;
  if (s->variant() != l.variant() || !same_matrix(s->source().F(), r.F(), tol) ||
      !same_matrix(s->target().F(), r.F(), tol) || s->level() < l.level())
    throw Error(ErrorKind::SideNotBuilt, std::string(name) + " coefficient algebra does not match");
}

template <class K>
double tensor_diff(const std::map<K, cplx>& a, const std::map<K, cplx>& b) {
  std::map<K, cplx> d = a;
  for (const auto& [k, v] : b) d[k] -= v;
  double acc = 0.0;
  for (const auto& [k, v] : d) acc += std::norm(v);
  return std::sqrt(acc);
}

Tensor2 tensor_product(const LinkingAlgebra& b, const LinkingAlgebra& a, const Tensor2& x, const Tensor2& y) {
  Tensor2 out;
  for (const auto& [kx, cx] : x)
    for (const auto& [ky, cy] : y) {
      const SparseVec pb = b.multiply(b.element(kx.first), b.element(ky.first));
      const SparseVec pa = a.multiply(a.element(kx.second), a.element(ky.second));
      for (size_t p = 0; p < pb.idx.size(); ++p)
        for (size_t q = 0; q < pa.idx.size(); ++q) out[{pb.idx[p], pa.idx[q]}] += cx * cy * pb.val[p] * pa.val[q];
    }
  return out;
}

}  // namespace

Tensor2 coaction(const LinkingAlgebra& l, Side side, const SparseVec& element, const LinkingAlgebra* s) {
  require_side(l, side, s);
  Tensor2 out;
  for (size_t p = 0; p < element.idx.size(); ++p) {
    const BasisIndex bi = l.basis(element.idx[p]);
    const LabelBlock& bl = l.block(bi.label);
    const cplx c = element.val[p];
    if (side == Side::source) {
      for (int k = 0; k < bl.ref.cols; ++k)
        out[{l.index(bi.label, bi.a, k), s->index(bi.label, k, bi.b)}] += c;
    } else {
      for (int k = 0; k < bl.ref.rows; ++k)
        out[{l.index(bi.label, k, bi.b), s->index(bi.label, bi.a, k)}] += c;
    }
  }
  return out;
}

CoactionReport check_coactions(const LinkingAlgebra& l, const LinkingAlgebra* a1, const LinkingAlgebra* a2) {
  require_side(l, Side::source, a1);
  require_side(l, Side::target, a2);
  CoactionReport rep;
  const int dim = l.dim();

  for (int i = 0; i < dim; ++i) {
    const SparseVec e = l.element(i);
    for (Side side : {Side::source, Side::target}) {
      const LinkingAlgebra* sa = side == Side::source ? a1 : a2;
      const Tensor2 d = coaction(l, side, e, sa);

      // Key (B, outer A leg, inner A leg); for the source side the outer leg
      // is the first tensor factor of A ⊗ A.
      Tensor3 lhs, rhs;
      for (const auto& [k, c] : d) {
        for (const auto& [k2, c2] : coaction(l, side, l.element(k.first), sa))
          lhs[{k2.first, k2.second, k.second}] += c * c2;
        for (const auto& [k2, c2] : coaction(*sa, Side::source, sa->element(k.second), sa))
          rhs[{k.first, k2.first, k2.second}] += c * c2;
      }
      if (side == Side::target) {
        // Left coaction: (ι⊗δ₂)δ₂ = (Δ⊗ι)δ₂, outer leg carries the first factor.
        Tensor3 flipped;
        for (const auto& [k, c] : lhs) flipped[{k[0], k[2], k[1]}] += c;
        lhs.swap(flipped);
      }
      rep.coassociativity = std::max(rep.coassociativity, tensor_diff(lhs, rhs));

      Vec inv = Vec::Zero(dim);
      for (const auto& [k, c] : d) inv(k.first) += c * sa->omega(sa->element(k.second));
      inv(0) -= l.omega(e);
      rep.invariance = std::max(rep.invariance, inv.norm());
    }

    if (2 * l.level_of(i) <= l.level()) {
      Tensor3 p1, p2;  // (A₂ leg, B, A₁ leg)
      for (const auto& [k, c] : coaction(l, Side::source, e, a1))
        for (const auto& [k2, c2] : coaction(l, Side::target, l.element(k.first), a2))
          p1[{k2.second, k2.first, k.second}] += c * c2;
      for (const auto& [k, c] : coaction(l, Side::target, e, a2))
        for (const auto& [k2, c2] : coaction(l, Side::source, l.element(k.first), a1))
          p2[{k.second, k2.first, k2.second}] += c * c2;
      rep.commutation = std::max(rep.commutation, tensor_diff(p1, p2));
    }
  }

  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (l.level_of(i) + l.level_of(j) > l.level()) continue;
      const SparseVec prod = l.multiply(l.element(i), l.element(j));
      for (Side side : {Side::source, Side::target}) {
        const LinkingAlgebra* sa = side == Side::source ? a1 : a2;
        const Tensor2 whole = coaction(l, side, prod, sa);
        const Tensor2 split =
            tensor_product(l, *sa, coaction(l, side, l.element(i), sa), coaction(l, side, l.element(j), sa));
        rep.homomorphism = std::max(rep.homomorphism, tensor_diff(whole, split));
      }
    }
  return rep;
}

}  // namespace qmon
