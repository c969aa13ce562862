#include <doctest.h>

#include "qmonoidal/cocycle.hpp"
#include "test_util.hpp"

using namespace qmon;
using namespace qtest;

namespace {

// Random admissible normalized n = 2 matrix: a canonical form conjugated by a
// random unitary.
Mat random_ao2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lam(0.2, 0.95);
  const int sign = rng() % 2 == 0 ? 1 : -1;
  const Mat c = canonical_matrix_ao(sign, {lam(rng)}, 0);
  const Mat w = random_unitary(2, rng);
  return w * c * w.transpose();
}

}  // namespace

TEST_CASE("trivial cocycle") {
  const Realization r = Realization::ao(sq02_f());
  const CocycleBlocks t = CocycleBlocks::trivial(r, 3);
  CHECK(check_cocycle_identity(t) == 0.0);
  CHECK(unitarity_residual(t) == 0.0);

  // R1 = R2 with u ≡ 1 gives identity blocks.
  const CocycleBlocks b = build_cocycle(r, r, 3);
  for (const auto& [k, m] : b.blocks) CHECK((m - Mat::Identity(m.rows(), m.cols())).norm() <= 1e-12);
  CHECK(b.at("", "aa") == Mat::Identity(3, 3));
  CHECK(check_cocycle_identity(b) <= 1e-12);
  CHECK_THROWS_AS(b.at("aa", "aa"), Error);
}

TEST_CASE("coboundary family on A_o(I_2)") {
  std::mt19937_64 rng(11);
  const Realization r = Realization::ao(FMatrix(Mat::Identity(2, 2)));
  const Mat u1 = random_unitary(2, rng);
  const CocycleBlocks om = build_cocycle(r, r, 3, {{"a", u1}});
  // With u_ε = u_aa = 1 the (a, a) block is Δ̂(u)(u*⊗u*) = u*⊗u*.
  CHECK((om.at("a", "a") - kron(u1.adjoint(), u1.adjoint())).norm() <= 1e-12);
  CHECK(unitarity_residual(om) <= 1e-10);
  CHECK(check_cocycle_identity(om) <= 1e-9);
  CHECK((om.at("a", "aa") - Mat::Identity(6, 6)).norm() > 1e-2);

  // The adjoint assembly is not a cocycle.
  const CocycleBlocks inv = build_cocycle(r, r, 3, {{"a", u1}}, CocycleForm::inverse);
  CHECK(unitarity_residual(inv) <= 1e-10);
  CHECK(check_cocycle_identity(inv) > 1e-3);

  // fault injection
  CocycleBlocks bad = om;
  bad.blocks[{"a", "a"}](0, 1) += 1e-2;
  CHECK(check_cocycle_identity(bad) > 1e-4);
}

TEST_CASE("cocycles from (F, v F vt) pairs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat f = random_ao2(rng);
    const Mat v = random_unitary(2, rng);
    const Mat f2 = v * f * v.transpose();
    const Realization r1 = Realization::ao(FMatrix(f));
    const Realization r2 = Realization::ao(FMatrix(f2));
    const CocycleBlocks om = build_cocycle(r1, r2, 3);
    CHECK(unitarity_residual(om) <= 1e-9);
    CHECK(check_cocycle_identity(om) <= 1e-9);
    CHECK(coboundary_equivalent(FMatrix(f), FMatrix(f2)));
  }
}

TEST_CASE("cocycle from a genuinely different fiber functor") {
  // SU_0.2(2) against a 2x2 matrix with the same invariants but another gauge.
  std::mt19937_64 rng(5);
  const Mat v = random_unitary(2, rng);
  const Realization r1 = Realization::ao(sq02_f());
  const Realization r2 = Realization::ao(FMatrix(Mat(v * sq02() * v.transpose())));
  const CocycleBlocks om = build_cocycle(r1, r2, 3);
  CHECK(check_cocycle_identity(om) <= 1e-9);
  CHECK(check_cocycle_identity(build_cocycle(r1, r2, 3, {}, CocycleForm::inverse)) > 1e-3);
}

TEST_CASE("build_cocycle preconditions") {
  const Realization r = Realization::ao(sq02_f());
  const Realization c = Realization::ao(FMatrix(comp4()));
  try {
    build_cocycle(r, c, 2);
    FAIL("ranks differ");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
  try {
    build_cocycle(r, Realization::ao(FMatrix(Mat::Identity(2, 2))), 2);
    FAIL("loop data differ");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotMonoidallyEquivalent);
  }
  Mat two = Mat::Identity(1, 1) * 2.0;
  CHECK_THROWS_AS(build_cocycle(r, r, 2, {{"", two}}), Error);
}

TEST_CASE("coboundary criterion") {
  const double l = bisect_pair(3.2);
  // SU_q(2)-type pair with equal invariants
  Mat g(2, 2);
  g << 0, -std::sqrt(0.2), 1.0 / std::sqrt(0.2), 0;
  CHECK(coboundary_equivalent(sq02_f(), FMatrix(g)));
  // sign-mismatched control with equal trace
  const Mat plus = canonical_matrix_ao(1, {bisect_pair(5.2)}, 0);
  CHECK(FMatrix(plus).matrix().norm() > 0);
  CHECK_FALSE(coboundary_equivalent(sq02_f(), FMatrix(plus)));
  // unequal traces
  CHECK_THROWS_AS(coboundary_equivalent(FMatrix(Mat::Identity(4, 4)),
                                        FMatrix(canonical_matrix_ao(1, {0.3437}, 2))),
                  Error);
  CHECK_THROWS_AS(coboundary_equivalent(sq02_f(), FMatrix(comp4())), Error);

  // grid: agrees with equivalence at scale 1
  const double nu = bisect_pair(2.6);
  std::mt19937_64 rng(9);
  std::vector<Mat> base{canonical_matrix_ao(1, {l}, 2), canonical_matrix_ao(1, {nu, nu}, 0), comp4()};
  std::vector<Mat> grid;
  for (const Mat& m : base)
    for (int k = 0; k < 3; ++k) {
      const Mat w = random_unitary(4, rng);
      grid.push_back(w * m * w.transpose());
    }
  for (const Mat& a : grid)
    for (const Mat& b : grid) {
      const AoEquivalence e = equivalent_ao(FMatrix(a), FMatrix(b));
      const bool expected = e.equivalent && std::abs(*e.scale_modulus - 1.0) <= 1e-8;
      CHECK(coboundary_equivalent(FMatrix(a), FMatrix(b)) == expected);
    }
}
