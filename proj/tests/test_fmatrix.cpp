#include <doctest.h>

#include "qmonoidal/fmatrix.hpp"
#include "test_util.hpp"

#include <algorithm>

using namespace qmon;
using namespace qtest;

namespace {

Mat m2(cplx a, cplx b, cplx c, cplx d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

// Random admissible normalized F from a random canonical form.
struct RandomAo {
  int sign;
  std::vector<double> lambdas;
  int fixed;
  Mat f;
};

RandomAo random_ao(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> lam(0.08, 0.97);
  RandomAo r;
  r.sign = (rng() & 1) ? 1 : -1;
  int n = size(rng);
  if (r.sign < 0) n += n % 2;
  int k = r.sign < 0 ? n / 2 : std::uniform_int_distribution<int>(0, n / 2)(rng);
  for (int i = 0; i < k; ++i) r.lambdas.push_back(lam(rng));
  if (r.sign < 0 && k > 1 && (rng() & 1)) r.lambdas.back() = 1.0;
  std::sort(r.lambdas.begin(), r.lambdas.end());
  r.fixed = n - 2 * k;
  const Mat c = canonical_matrix_ao(r.sign, r.lambdas, r.fixed);
  const Mat v = random_unitary(n, rng);
  r.f = v * c * v.transpose();
  return r;
}

}  // namespace

TEST_CASE("validate_ao on the q = 0.2 matrix") {
  const AoParams p = validate_ao(sq02_f());
  CHECK(p.c == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(p.sign == -1);
  CHECK(p.trace == doctest::Approx(5.2).epsilon(1e-12));
  CHECK(p.beta == doctest::Approx(-1.0 / 5.2).epsilon(1e-12));
  CHECK(p.qdim == doctest::Approx(5.2).epsilon(1e-12));
}

TEST_CASE("validate_ao trivial and off-diagonal cases") {
  for (int n = 1; n <= 4; ++n) {
    const AoParams p = validate_ao(FMatrix(Mat::Identity(n, n)));
    CHECK(p.c == doctest::Approx(1.0));
    CHECK(p.trace == doctest::Approx(n));
    CHECK(p.beta == doctest::Approx(1.0 / n));
    CHECK(p.qdim == doctest::Approx(n));
  }
  const AoParams p = validate_ao(FMatrix(m2(0, 0.5, 2, 0)));
  CHECK(p.c == doctest::Approx(1.0));
  CHECK(p.trace == doctest::Approx(4.25));
  CHECK(p.qdim == doctest::Approx(4.25));
}

TEST_CASE("validate_ao rejects non-admissible and singular input") {
  try {
    validate_ao(FMatrix(m2(1, 1, 0, 1)));
    FAIL("expected NotAoAdmissible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAoAdmissible);
  }
  try {
    FMatrix(m2(1, 1, 1, 1));
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularMatrix);
  }
  // 1×1: F F̄ = |F|² regardless of the phase.
  const AoParams p = validate_ao(FMatrix(Mat::Constant(1, 1, cplx(0, 2))));
  CHECK(p.c == doctest::Approx(4.0));
}

TEST_CASE("normalize_ao") {
  const double q = 0.2;
  const Mat raw = m2(0, 1, -1.0 / q, 0);
  const AoParams pr = validate_ao(FMatrix(raw));
  CHECK(pr.c == doctest::Approx(-1.0 / q));
  const FMatrix g = normalize_ao(FMatrix(raw));
  CHECK(rel_residual(g.matrix(), std::sqrt(q) * raw) < 1e-14);
  CHECK(validate_ao(g).c == doctest::Approx(-1.0));
  CHECK(validate_ao(g).trace == doctest::Approx(pr.trace / std::abs(pr.c)));

  const Mat a = m2(0, 0.5, 2, 0);
  CHECK(normalize_ao(FMatrix(a)).matrix().isApprox(a, 1e-14));
  const FMatrix i3 = normalize_ao(FMatrix(2.0 * Mat::Identity(3, 3)));
  CHECK(i3.matrix().isApprox(Mat::Identity(3, 3), 1e-14));
}

TEST_CASE("canonical_form_ao spec examples") {
  const CanonicalFormAo a = canonical_form_ao(FMatrix(m2(0, 0.5, 2, 0)));
  CHECK(a.sign == 1);
  REQUIRE(a.lambdas.size() == 1);
  CHECK(a.lambdas[0] == doctest::Approx(0.5));
  CHECK(a.fixed_block == 0);
  CHECK(a.canonical().isApprox(m2(0, 0.5, 2, 0), 1e-12));

  const CanonicalFormAo b = canonical_form_ao(FMatrix(Mat::Identity(3, 3)));
  CHECK(b.sign == 1);
  CHECK(b.lambdas.empty());
  CHECK(b.fixed_block == 3);

  const CanonicalFormAo c = canonical_form_ao(sq02_f());
  CHECK(c.sign == -1);
  REQUIRE(c.lambdas.size() == 1);
  CHECK(c.lambdas[0] == doctest::Approx(std::sqrt(0.2)).epsilon(1e-12));
  CHECK(rel_residual(c.canonical(), sq02()) < 1e-12);
}

TEST_CASE("canonical_form_ao requires normalization") {
  try {
    canonical_form_ao(FMatrix(2.0 * Mat::Identity(2, 2)));
    FAIL("expected NotNormalized");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNormalized);
  }
}

TEST_CASE("canonical_form_ao is idempotent on canonical matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const RandomAo r = random_ao(rng);
    const Mat c = canonical_matrix_ao(r.sign, r.lambdas, r.fixed);
    const CanonicalFormAo cf = canonical_form_ao(FMatrix(c));
    CHECK(cf.sign == r.sign);
    const int n = static_cast<int>(c.rows());
    CHECK(rel_residual(cf.transition, Mat::Identity(n, n)) < 1e-8);
  }
}

TEST_CASE("canonical_form_ao round trips") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const RandomAo r = random_ao(rng);
    const CanonicalFormAo cf = canonical_form_ao(FMatrix(r.f));
    CHECK(cf.sign == r.sign);
    REQUIRE(cf.lambdas.size() == r.lambdas.size());
    for (size_t i = 0; i < r.lambdas.size(); ++i) CHECK(std::abs(cf.lambdas[i] - r.lambdas[i]) < 1e-7);
    CHECK(cf.fixed_block == r.fixed);
    const Mat& w = cf.transition;
    const int n = static_cast<int>(w.rows());
    CHECK(rel_residual(w.adjoint() * w, Mat::Identity(n, n)) < 1e-10);
    CHECK(rel_residual(w.transpose() * r.f * w, cf.canonical()) < 1e-8);
  }
}

TEST_CASE("equivalent_ao") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mod(0.2, 3.0), ph(0.0, 6.283185307179586);
  for (int trial = 0; trial < 100; ++trial) {
    const RandomAo r = random_ao(rng);
    const int n = static_cast<int>(r.f.rows());
    const cplx lam = std::polar(mod(rng), ph(rng));
    const Mat u = random_unitary(n, rng);
    const FMatrix f1(r.f), f2(lam * u * r.f * u.transpose());
    const AoEquivalence e = equivalent_ao(f1, f2);
    CHECK(e.equivalent);
    REQUIRE(e.scale_modulus.has_value());
    CHECK(*e.scale_modulus == doctest::Approx(std::abs(lam)).epsilon(1e-9));
    CHECK(equivalent_ao(f2, f1).equivalent);
    CHECK(equivalent_ao(f1, f1).equivalent);
  }
  CHECK_FALSE(equivalent_ao(FMatrix(Mat::Identity(2, 2)), FMatrix(m2(0, 0.5, 2, 0))).equivalent);
  CHECK_FALSE(equivalent_ao(sq02_f(), FMatrix(Mat::Identity(2, 2))).equivalent);
}

TEST_CASE("monoidally_equivalent_ao is an equivalence relation") {
  std::vector<FMatrix> fs{sq02_f(), FMatrix(comp4()), FMatrix(Mat::Identity(2, 2)),
                          FMatrix(Mat::Identity(3, 3)), FMatrix(m2(0, 0.5, 2, 0)),
                          construct_ao_companion(1, 4.25, 4), construct_ao_companion(-1, 4.25, 2)};
  CHECK(monoidally_equivalent_ao(fs[0], fs[1]));
  CHECK_FALSE(monoidally_equivalent_ao(fs[2], fs[3]));
  for (size_t i = 0; i < fs.size(); ++i) {
    CHECK(monoidally_equivalent_ao(fs[i], fs[i]));
    for (size_t j = 0; j < fs.size(); ++j) {
      CHECK(monoidally_equivalent_ao(fs[i], fs[j]) == monoidally_equivalent_ao(fs[j], fs[i]));
      for (size_t k = 0; k < fs.size(); ++k)
        if (monoidally_equivalent_ao(fs[i], fs[j]) && monoidally_equivalent_ao(fs[j], fs[k]))
          CHECK(monoidally_equivalent_ao(fs[i], fs[k]));
    }
  }
}

TEST_CASE("construct_ao_companion") {
  const FMatrix f = construct_ao_companion(-1, 5.2, 4);
  const CanonicalFormAo cf = canonical_form_ao(f);
  REQUIRE(cf.lambdas.size() == 2);
  // x + 1/x = 3.2 by bisection, independent of the closed form.
  const double lam = bisect_pair(3.2);
  CHECK(lam * lam == doctest::Approx(0.3510004).epsilon(1e-6));
  CHECK(cf.lambdas[0] == doctest::Approx(lam).epsilon(1e-10));
  CHECK(cf.lambdas[0] == doctest::Approx(0.5924529).epsilon(1e-6));
  CHECK(cf.lambdas[1] == doctest::Approx(1.0));
  CHECK(rel_residual(f.matrix(), comp4()) < 1e-12);

  for (int n = 1; n <= 5; ++n)
    CHECK(construct_ao_companion(1, n, n).matrix().isApprox(Mat::Identity(n, n)));

  try {
    construct_ao_companion(-1, 3.9, 4);
    FAIL("expected Infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
  }
  try {
    construct_ao_companion(-1, 9.0, 3);
    FAIL("expected Infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
  }
}

TEST_CASE("construct_ao_companion sweep") {
  for (int sign : {1, -1})
    for (int n = 1; n <= 6; ++n)
      for (double extra : {0.0, 0.3, 1.0, 2.5, 10.0}) {
        if (sign < 0 && n % 2) continue;
        if (sign > 0 && n == 1 && extra > 0) continue;
        const double trace = n + extra;
        const FMatrix f = construct_ao_companion(sign, trace, n);
        const AoParams p = validate_ao(f);
        CHECK(p.sign == sign);
        CHECK(std::abs(p.c - sign) < 1e-10);
        CHECK(std::abs(p.trace - trace) < 1e-9 * trace);
      }
}

TEST_CASE("qdim bounds and normalized trace identity") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const RandomAo r = random_ao(rng);
    const FMatrix f(3.7 * r.f);
    const AoParams p = validate_ao(f);
    const int n = f.n();
    CHECK(p.qdim >= n - 1e-9);
    const Mat g = normalize_ao(f).matrix();
    const Mat gg = g.adjoint() * g;
    CHECK(std::abs(gg.trace().real() - gg.inverse().trace().real()) < 1e-8 * std::max(1.0, p.qdim));
    CHECK((std::abs(p.qdim - n) < 1e-9) == r.lambdas.empty());

    const Mat a = random_gaussian(n, n, rng);
    const AuParams pa = validate_au(FMatrix(a));
    CHECK(pa.qdim >= n - 1e-9);
  }
}

TEST_CASE("validate_au and normalize_au") {
  Mat d(2, 2);
  d << 2, 0, 0, 0.5;
  AuParams p = validate_au(FMatrix(d));
  CHECK(p.trace == doctest::Approx(4.25));
  CHECK(p.inv_trace == doctest::Approx(4.25));
  CHECK(p.qdim == doctest::Approx(4.25));

  for (int n = 1; n <= 4; ++n) CHECK(validate_au(FMatrix(Mat::Identity(n, n))).qdim == doctest::Approx(n));

  Mat e(2, 2);
  e << 2, 0, 0, 1;
  p = validate_au(FMatrix(e));
  CHECK(p.qdim == doctest::Approx(2.5));
  const FMatrix g = normalize_au(FMatrix(e));
  CHECK(rel_residual(g.matrix(), std::pow(1.25 / 5.0, 0.25) * e) < 1e-14);
  const AuParams pg = validate_au(g);
  CHECK(pg.trace == doctest::Approx(pg.inv_trace));
  CHECK(pg.qdim == doctest::Approx(2.5));
  CHECK(pg.c == doctest::Approx(pg.trace));
}

TEST_CASE("A_u equivalences") {
  Mat d2(2, 2);
  d2 << 2, 0, 0, 0.5;
  const double t2 = (3.25 - std::sqrt(3.25 * 3.25 - 4.0)) / 2.0;
  CHECK(t2 == doctest::Approx(0.34415).epsilon(1e-4));
  const double t = std::sqrt(t2);
  Mat d3 = Mat::Zero(3, 3);
  d3(0, 0) = t;
  d3(1, 1) = 1.0;
  d3(2, 2) = 1.0 / t;
  CHECK(t == doctest::Approx(0.58665).epsilon(1e-4));
  CHECK(1.0 / t == doctest::Approx(1.70459).epsilon(1e-4));
  CHECK(monoidally_equivalent_au(FMatrix(d2), FMatrix(d3)));
  CHECK_FALSE(equivalent_au(FMatrix(d2), FMatrix(d3)));
  CHECK_FALSE(monoidally_equivalent_au(FMatrix(Mat::Identity(2, 2)), FMatrix(Mat::Identity(3, 3))));

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    const Mat f = random_gaussian(n, n, rng);
    const Mat g = random_unitary(n, rng) * f * random_unitary(n, rng);
    CHECK(equivalent_au(FMatrix(f), FMatrix(g)));
    CHECK(monoidally_equivalent_au(FMatrix(f), FMatrix(g)));
  }
}
