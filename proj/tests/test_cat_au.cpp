#include <doctest.h>

#include "qmonoidal/realization.hpp"
#include "test_util.hpp"

using namespace qmon;
using namespace qtest;

namespace {

const Realization& r2() {
  static const Realization r = Realization::au(FMatrix(diag({2.0, 0.5})));
  return r;
}
const Realization& r3() {
  static const Realization r = Realization::au(FMatrix(d3()));
  return r;
}

// Exhaustive insertion enumeration: all vectors of Mor(ε, w) reachable by
// inserting normalized cups into shorter words, reduced to a rank.
Mat saturate(const Realization& R, const Word& w) {
  const int n = R.n();
  if (w.empty()) return Mat::Ones(1, 1);
  Eigen::Index dim = 1;
  for (size_t i = 0; i < w.size(); ++i) dim *= n;
  std::vector<Vec> cols;
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] == w[i + 1]) continue;
    const Word rest = w.substr(0, i) + w.substr(i + 2);
    const Mat inner = saturate(R, rest);
    if (inner.cols() == 0) continue;
    Eigen::Index left = 1, right = 1;
    for (size_t k = 0; k < i; ++k) left *= n;
    for (size_t k = i + 2; k < w.size(); ++k) right *= n;
    const Vec& cup = R.cup(w[i], w[i + 1]);
    for (Eigen::Index c = 0; c < inner.cols(); ++c) {
      Vec v = Vec::Zero(dim);
      for (Eigen::Index l = 0; l < left; ++l)
        for (Eigen::Index r = 0; r < right; ++r)
          for (int a = 0; a < n * n; ++a) v((l * n * n + a) * right + r) += inner(l * right + r, c) * cup(a);
      cols.push_back(v);
    }
  }
  Mat stack(dim, static_cast<Eigen::Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) stack.col(static_cast<Eigen::Index>(k)) = cols[k];
  return column_basis(stack, 1e-10);
}

}  // namespace

TEST_CASE("build_au_realization examples") {
  const Realization i2 = Realization::au(FMatrix(Mat::Identity(2, 2)));
  Vec e = Vec::Zero(4);
  e(0) = e(3) = 1.0 / std::sqrt(2.0);
  CHECK(rel_residual(i2.cup('a', 'b'), e) < 1e-15);
  CHECK(rel_residual(i2.cup('b', 'a'), e) < 1e-15);

  CHECK(r2().delta() == doctest::Approx(4.25));
  Vec t = Vec::Zero(4), s = Vec::Zero(4);
  t(0) = 2.0 / std::sqrt(4.25);
  t(3) = 0.5 / std::sqrt(4.25);
  s(0) = 0.5 / std::sqrt(4.25);
  s(3) = 2.0 / std::sqrt(4.25);
  CHECK(rel_residual(r2().cup('a', 'b'), t) < 1e-15);
  CHECK(rel_residual(r2().cup('b', 'a'), s) < 1e-15);

  // Five-digit entries: the exact root is t = 0.5866270..., so the rounded
  // matrix only balances to about 2e-4.
  const Realization r = Realization::au(FMatrix(diag({0.58665, 1.0, 1.70459}).eval()),
                                        Tolerances{1e-10, 1e-3, 1e-3});
  CHECK(std::abs(r.delta() - 4.25) < 5e-4);
  CHECK(std::abs(r3().delta() - 4.25) < 1e-12);

  try {
    Realization::au(FMatrix(diag({2.0, 1.0})));
    FAIL("expected NotNormalized");
  } catch (const Error& e2) {
    CHECK(e2.kind() == ErrorKind::NotNormalized);
  }
}

TEST_CASE("A_u cup invariants") {
  std::mt19937_64 rng(8);
  std::vector<Realization> rs{r2(), r3(), Realization::au(normalize_au(FMatrix(random_gaussian(3, 3, rng))))};
  for (const Realization& R : rs) {
    const int n = R.n();
    const Vec& t = R.cup('a', 'b');
    const Vec& s = R.cup('b', 'a');
    CHECK(std::abs(t.squaredNorm() - 1.0) < 1e-12);
    CHECK(std::abs(s.squaredNorm() - 1.0) < 1e-12);
    const Mat I = Mat::Identity(n, n);
    // Both mixed snakes give 1/c.
    CHECK(rel_residual(kron(Mat(t.adjoint()), I) * kron(I, Mat(s)), I / R.delta()) < 1e-12);
    CHECK(rel_residual(kron(Mat(s.adjoint()), I) * kron(I, Mat(t)), I / R.delta()) < 1e-12);
  }
}

TEST_CASE("A_u morphism spaces") {
  const MorphismSpace ab = r2().mor_basis("", "ab");
  REQUIRE(ab.dim() == 1);
  CHECK(std::abs(std::abs(ab.basis[0].col(0).dot(r2().cup('a', 'b'))) - 1.0) < 1e-12);
  const MorphismSpace ba = r2().mor_basis("", "ba");
  REQUIRE(ba.dim() == 1);
  CHECK(std::abs(std::abs(ba.basis[0].col(0).dot(r2().cup('b', 'a'))) - 1.0) < 1e-12);
  CHECK(r2().mor_basis("", "aa").dim() == 0);
  CHECK(saturate(r2(), "aa").cols() == 0);

  Word w;
  for (int k = 0; k <= 3; ++k, w += "ab") {
    CHECK(r2().mor_basis("", w).dim() == saturate(r2(), w).cols());
    CHECK(r3().mor_basis("", w).dim() == saturate(r3(), w).cols());
  }
  for (const Word& v : r2().labels(4))
    if (v.size() % 2 == 0) CHECK(r2().mor_basis("", v).dim() == saturate(r2(), v).cols());
}

TEST_CASE("A_u projections") {
  CHECK(r2().rank("a") == 2);
  CHECK(r2().rank("") == 1);
  CHECK(r2().rank("ab") == 3);
  CHECK(r2().rank("aa") == 4);
  for (const Realization* R : {&r2(), &r3()})
    for (const Word& w : R->labels(4)) {
      const JWProjection& p = R->jw(w);
      CHECK(p.residual <= 1e-8);
      CHECK(p.rank > 0);
    }
}

TEST_CASE("A_u quantum dimension of the fundamental") {
  for (const Mat& f : {diag({2.0, 0.5}), Mat(Mat::Identity(3, 3)), d3()}) {
    const Realization R = Realization::au(FMatrix(f));
    const AuParams p = validate_au(FMatrix(f));
    CHECK(std::abs(R.irrep_qdim("a") - p.qdim) < 1e-6);
    CHECK(std::abs(R.irrep_qdim("b") - p.qdim) < 1e-6);
  }
  CHECK(std::abs(r2().irrep_qdim("a") - 4.25) < 1e-10);
  CHECK(std::abs(r3().irrep_qdim("a") - 4.25) < 1e-10);
}

TEST_CASE("equal-c realizations share their combinatorics") {
  for (const Word& p : r2().labels(4))
    for (const Word& q : r2().labels(4)) {
      if (p.size() + q.size() > 4) continue;
      CHECK(r2().mor_basis(p, q).dim() == r3().mor_basis(p, q).dim());
    }
  for (const Word& x : r2().labels(2))
    for (const Word& y : r2().labels(2)) {
      const FusionIsometries& a = r2().fusion(x, y);
      const FusionIsometries& b = r3().fusion(x, y);
      REQUIRE(a.channels.size() == b.channels.size());
      for (size_t i = 0; i < a.channels.size(); ++i) CHECK(a.channels[i].z == b.channels[i].z);
      CHECK(a.completeness_residual < 1e-8);
      const FusionIsometries t = r3().transport_fusion(a);
      for (size_t i = 0; i < t.channels.size(); ++i)
        CHECK(rel_residual(t.channels[i].S, b.channels[i].S) < 1e-8);
    }
}

TEST_CASE("A_u closed diagrams agree across equal-c realizations") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (const Word& w : {Word("abab"), Word("abba"), Word("baab")}) {
    const auto ds = enumerate_diagrams("", w, r2().coloring());
    REQUIRE(!ds.empty());
    for (int trial = 0; trial < 10; ++trial) {
      DiagramCombo s{"", w, {}}, t{"", w, {}};
      for (const auto& d : ds) {
        s.terms.push_back({cplx(g(rng), g(rng)), d});
        t.terms.push_back({cplx(g(rng), g(rng)), d});
      }
      const cplx v2 = (r2().evaluate(s).adjoint() * r2().evaluate(t))(0, 0);
      const cplx v3 = (transport(s, r2(), r3()).adjoint() * transport(t, r2(), r3()))(0, 0);
      CHECK(std::abs(v2 - v3) < 1e-10 * std::max(1.0, std::abs(v2)));
    }
  }
}

TEST_CASE("A_u 6j symbols are unitary and realization independent") {
  for (const auto& [a, x, y, z] : {std::tuple<Word, Word, Word, Word>{"a", "a", "b", "a"},
                                   {"b", "b", "a", "b"}, {"a", "a", "a", "b"}, {"ab", "a", "b", "ab"}}) {
    const Mat m2 = r2().sixj(a, x, y, z);
    const Mat m3 = r3().sixj(a, x, y, z);
    CHECK(rel_residual(m2.adjoint() * m2, Mat::Identity(m2.cols(), m2.cols())) < 1e-8);
    CHECK((m2 - m3).cwiseAbs().maxCoeff() < 1e-8);
  }
}
