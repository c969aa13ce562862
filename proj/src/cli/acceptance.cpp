#include "qmonoidal/acceptance.hpp"

#include "qmonoidal/cocycle.hpp"
#include "qmonoidal/linking.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

namespace qmon {

namespace {

Mat su02() {
  const double q = 0.2;
  Mat f(2, 2);
  f << 0, std::sqrt(q), -1.0 / std::sqrt(q), 0;
  return f;
}

Mat companion4() { return construct_ao_companion(-1, 5.2, 4).matrix(); }

Mat diagonal(std::vector<double> v) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = v[i];
  return m;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Accumulates named residual checks into a verdict.
struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) detail += " FAIL";
  }
  void bound(const std::string& name, double value, double limit) {
    check(value <= limit, name + "=" + fmt("%.3g", value) + " (<= " + fmt("%.0e", limit) + ")");
  }
};

long chebyshev(int n, int x) {
  long a = 1, b = n;  // d_0, d_1
  if (x == 0) return 1;
  for (int i = 1; i < x; ++i) {
    const long c = n * b - a;
    a = b;
    b = c;
  }
  return b;
}

long catalan(int k) {
  long c = 1;
  for (int i = 0; i < k; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

double qint(int m, double delta) {
  double a = 0.0, b = 1.0;
  for (int i = 1; i < m; ++i) {
    const double c = delta * b - a;
    a = b;
    b = c;
  }
  return m == 0 ? 0.0 : b;
}

Verdict c1() {
  Verdict v;
  const AoParams p = validate_ao(FMatrix(su02()));
  v.check(p.sign == -1, "sign=" + std::to_string(p.sign));
  v.bound("|trace-5.2|", std::abs(p.trace - 5.2), 1e-10);
  v.bound("|qdim-5.2|", std::abs(p.qdim - 5.2), 1e-10);
  return v;
}

Verdict c2() {
  Verdict v;
  const FMatrix f = construct_ao_companion(-1, 5.2, 4);
  const Mat& m = f.matrix();
  const Mat ffbar = m * m.conjugate();
  v.bound("|F Fbar + 1|", (ffbar + Mat::Identity(4, 4)).norm(), 1e-10);
  v.bound("|trace-5.2|", std::abs((m.adjoint() * m).trace().real() - 5.2), 1e-10);
  v.check(monoidally_equivalent_ao(f, FMatrix(su02())), "monoidally equivalent to SU_0.2(2)");
  return v;
}

Verdict c3() {
  Verdict v;
  const std::vector<std::pair<Mat, int>> cases{{su02(), 5}, {Mat::Identity(3, 3), 4}, {companion4(), 4}};
  int checked = 0;
  for (const auto& [f, top] : cases) {
    const Realization r = Realization::ao(FMatrix(f));
    for (int x = 0; x <= top; ++x) {
      const long expect = chebyshev(r.n(), x);
      const int got = r.rank(level_word(x));
      if (got != expect)
        v.check(false, "n=" + std::to_string(r.n()) + " x=" + std::to_string(x) + " rank " + std::to_string(got) +
                           " != " + std::to_string(expect));
      ++checked;
    }
    for (int k = 0; k <= 3; ++k) {
      const int got = r.mor_basis("", level_word(2 * k)).dim();
      if (got != catalan(k))
        v.check(false, "n=" + std::to_string(r.n()) + " Mor(e, U^" + std::to_string(2 * k) + ") dim " +
                           std::to_string(got));
      ++checked;
    }
  }
  v.check(true, std::to_string(checked) + " ranks/dimensions matched");
  return v;
}

Verdict c4() {
  Verdict v;
  const Realization r = Realization::ao(FMatrix(su02()));
  double worst = 0.0;
  for (int x = 0; x <= 4; ++x) worst = std::max(worst, std::abs(r.irrep_qdim(level_word(x)) - qint(x + 1, 5.2)));
  v.bound("max |qdim - [x+1]|", worst, 1e-6);
  return v;
}

// Empty matrix when Mor(a, x y z) = 0.
Mat sixj_or_empty(const Realization& r, const Word& a, const Word& x, const Word& y, const Word& z) {
  try {
    return r.sixj(a, x, y, z);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroSpace) throw;
    return Mat();
  }
}

Verdict c5() {
  Verdict v;
  const Realization r2 = Realization::ao(FMatrix(su02()));
  const Realization r4 = Realization::ao(FMatrix(companion4()));
  double closed = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const auto ds = enumerate_diagrams("", level_word(2 * k), r2.coloring());
    for (const Diagram& a : ds)
      for (const Diagram& b : ds) {
        const cplx s2 = (r2.evaluate(a).adjoint() * r2.evaluate(b))(0, 0);
        const cplx s4 = (r4.evaluate(a).adjoint() * r4.evaluate(b))(0, 0);
        closed = std::max(closed, std::abs(s2 - s4));
      }
  }
  double diff = 0.0, unit = 0.0;
  int count = 0;
  for (int x = 0; x <= 4; ++x)
    for (int y = 0; x + y <= 4; ++y)
      for (int z = 0; x + y + z <= 4; ++z)
        for (int a = (x + y + z) % 2; a <= x + y + z; a += 2) {
          const Word wa = level_word(a), wx = level_word(x), wy = level_word(y), wz = level_word(z);
          const Mat m2 = sixj_or_empty(r2, wa, wx, wy, wz);
          const Mat m4 = sixj_or_empty(r4, wa, wx, wy, wz);
          if (m2.size() == 0 && m4.size() == 0) continue;
          if (m2.rows() != m4.rows() || m2.cols() != m4.cols()) {
            v.check(false, "6j shape mismatch");
            continue;
          }
          diff = std::max(diff, (m2 - m4).cwiseAbs().maxCoeff());
          unit = std::max(unit, (m2.adjoint() * m2 - Mat::Identity(m2.cols(), m2.cols())).norm());
          ++count;
        }
  v.bound("closed diagrams n=2 vs n=4", closed, 1e-8);
  v.bound("6j n=2 vs n=4 (" + std::to_string(count) + " matrices)", diff, 1e-8);
  v.bound("6j unitarity", unit, 1e-8);
  return v;
}

LinkingAlgebra pair_algebra(const AcceptanceOptions& o) {
  return LinkingAlgebra::build(Realization::ao(FMatrix(su02())), Realization::ao(FMatrix(companion4())), 2, o.jobs);
}

Verdict c6(const AcceptanceOptions& o) {
  Verdict v;
  const LinkingAlgebra l = pair_algebra(o);
  const RelationReport r = check_relations(l);
  v.bound("assoc", r.assoc, 1e-8);
  v.bound("antimult", r.antimult, 1e-8);
  v.check(r.min_gram_eig > 0.0, "min_gram_eig=" + fmt("%.6g", r.min_gram_eig));
  v.bound("gram closed vs structure", r.gram_agreement, 1e-8);
  v.bound("X unitarity", r.unitarity, 1e-8);
  v.bound("conjugation", r.conjugation, 1e-8);
  return v;
}

Verdict c7(const AcceptanceOptions& o) {
  Verdict v;
  const LinkingAlgebra l = pair_algebra(o);
  const SpectralQuantities s = spectral_quantities(l, "a");
  v.check(s.mult == 4, "mult(1)=" + std::to_string(s.mult));
  v.bound("|mult_q-5.2|", std::abs(s.mult_q - 5.2), 1e-6);
  v.bound("|dim_q-5.2|", std::abs(s.dim_q - 5.2), 1e-6);
  for (const LabelBlock& b : l.blocks()) {
    if (2 * b.level > l.level()) continue;
    const SpectralQuantities q = spectral_quantities(l, b.label);
    const bool chain = q.mult <= q.mult_q + 1e-8 && q.mult_q <= q.dim_q + 1e-8;
    v.check(chain, "chain at level " + std::to_string(b.level));
  }
  return v;
}

Verdict c8(const AcceptanceOptions& o) {
  Verdict v;
  v.bound("kms", kms_check(pair_algebra(o)), 1e-7);
  const Realization i2 = Realization::ao(FMatrix(Mat::Identity(2, 2)));
  const LinkingAlgebra k = LinkingAlgebra::build(i2, i2, 2, o.jobs);
  double sig = 0.0;
  for (double t : {0.37, -1.3, 4.0})
    sig = std::max(sig, (modular_map(k, t) - Mat::Identity(k.dim(), k.dim())).norm());
  v.bound("Kac sigma_t - id", sig, 1e-10);
  v.bound("Kac trace defect", trace_defect(k), 1e-10);
  return v;
}

Verdict c9(const AcceptanceOptions& o) {
  Verdict v;
  const Realization r1 = Realization::ao(FMatrix(su02()));
  const Realization r2 = Realization::ao(FMatrix(companion4()));
  const LinkingAlgebra l = LinkingAlgebra::build(r1, r2, 2, o.jobs);
  const LinkingAlgebra a1 = LinkingAlgebra::build(r1, r1, 2, o.jobs);
  const LinkingAlgebra a2 = LinkingAlgebra::build(r2, r2, 2, o.jobs);
  const CoactionReport c = check_coactions(l, &a1, &a2);
  v.bound("coassociativity", c.coassociativity, 1e-8);
  v.bound("invariance", c.invariance, 1e-8);
  v.bound("commutation", c.commutation, 1e-8);
  return v;
}

Verdict c10(const AcceptanceOptions& o) {
  Verdict v;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> lam(0.2, 0.95);
  double unit = 0.0, ident = 0.0;
  int equivalent = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int sign = rng() % 2 == 0 ? 1 : -1;
    const Mat w = random_unitary(2, rng);
    const Mat f = w * canonical_matrix_ao(sign, {lam(rng)}, 0) * w.transpose();
    const Mat u = random_unitary(2, rng);
    const Mat f2 = u * f * u.transpose();
    const CocycleBlocks om = build_cocycle(Realization::ao(FMatrix(f)), Realization::ao(FMatrix(f2)), 3);
    unit = std::max(unit, unitarity_residual(om));
    ident = std::max(ident, check_cocycle_identity(om));
    equivalent += coboundary_equivalent(FMatrix(f), FMatrix(f2)) ? 1 : 0;
  }
  v.bound("unitarity (20 pairs)", unit, 1e-9);
  v.bound("cocycle identity (20 pairs)", ident, 1e-9);
  v.check(equivalent == 20, "coboundary_equivalent true on " + std::to_string(equivalent) + "/20");

  const Realization r = Realization::ao(FMatrix(su02()));
  const CocycleBlocks t = CocycleBlocks::trivial(r, 3);
  const double tres = check_cocycle_identity(t) + unitarity_residual(t);
  v.check(tres == 0.0, "trivial cocycle residual " + fmt("%.3g", tres));
  double self = 0.0;
  for (const auto& [k, m] : build_cocycle(r, r, 3).blocks)
    self = std::max(self, (m - Mat::Identity(m.rows(), m.cols())).norm());
  v.bound("R1=R2, u=1 blocks - 1", self, 1e-12);

  double lp = 0.0;
  for (double x = 1e-3, hi = 1.0; hi - x > 1e-15;) {  // λ² + λ⁻² = 5.2 by bisection
    const double mid = 0.5 * (x + hi);
    (mid * mid + 1.0 / (mid * mid) > 5.2 ? x : hi) = mid;
    lp = mid;
  }
  const bool control = coboundary_equivalent(FMatrix(su02()), FMatrix(canonical_matrix_ao(1, {lp}, 0)));
  v.check(!control, "sign-mismatched control -> " + std::string(control ? "true" : "false"));
  return v;
}

Verdict c11() {
  Verdict v;
  const Mat d2 = diagonal({2.0, 0.5});
  const double t = std::sqrt((3.25 - std::sqrt(3.25 * 3.25 - 4.0)) / 2.0);
  const Mat d3 = diagonal({t, 1.0, 1.0 / t});
  const Mat g = d2.adjoint() * d2;
  const double formula = std::sqrt(g.trace().real() * g.inverse().trace().real());
  const Realization r2 = Realization::au(FMatrix(d2));
  const Realization r3 = Realization::au(FMatrix(d3));
  v.bound("|qdim formula - categorical|", std::abs(formula - r2.irrep_qdim("a")), 1e-6);
  int words = 0;
  for (int len = 0; len <= 3; ++len)
    for (int bits = 0; bits < (1 << len); ++bits) {
      Word w(static_cast<size_t>(len), 'a');
      for (int i = 0; i < len; ++i)
        if (bits & (1 << i)) w[static_cast<size_t>(i)] = 'b';
      const int a = r2.mor_basis("", w).dim(), b = r3.mor_basis("", w).dim();
      if (a != b) v.check(false, "Mor(e, " + w + ") " + std::to_string(a) + " vs " + std::to_string(b));
      ++words;
    }
  v.check(true, std::to_string(words) + " words compared");
  std::mt19937_64 rng(7);
  const Mat u = random_unitary(3, rng), w = random_unitary(3, rng);
  const bool t1 = monoidally_equivalent_au(FMatrix(d2), FMatrix(d3)) && !equivalent_au(FMatrix(d2), FMatrix(d3));
  const bool t2 = equivalent_au(FMatrix(d3), FMatrix(Mat(u * d3 * w)));
  const bool t3 = !monoidally_equivalent_au(FMatrix(Mat::Identity(2, 2)), FMatrix(Mat::Identity(3, 3)));
  v.check(t1 && t2 && t3, "truth table");
  return v;
}

Verdict c12(const AcceptanceOptions& o) {
  Verdict v;
  std::mt19937_64 rng(o.seed + 12);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> lam(0.08, 0.97);
  int sign_ok = 0;
  double lam_err = 0.0, res = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int sign = (rng() & 1) ? 1 : -1;
    int n = size(rng);
    if (sign < 0) n += n % 2;
    const int k = sign < 0 ? n / 2 : std::uniform_int_distribution<int>(0, n / 2)(rng);
    std::vector<double> lams;
    for (int i = 0; i < k; ++i) lams.push_back(lam(rng));
    std::sort(lams.begin(), lams.end());
    const Mat c = canonical_matrix_ao(sign, lams, n - 2 * k);
    const Mat w = random_unitary(n, rng);
    const Mat f = w * c * w.transpose();
    const CanonicalFormAo cf = canonical_form_ao(FMatrix(f));
    if (cf.sign == sign && cf.lambdas.size() == lams.size()) {
      ++sign_ok;
      for (size_t i = 0; i < lams.size(); ++i) lam_err = std::max(lam_err, std::abs(cf.lambdas[i] - lams[i]));
    } else {
      lam_err = INFINITY;
    }
    res = std::max(res, rel_residual(cf.transition.transpose() * f * cf.transition, cf.canonical()));
  }
  v.check(sign_ok == 100, "sign recovered " + std::to_string(sign_ok) + "/100");
  v.bound("lambda error", lam_err, 1e-7);
  v.bound("w^t F w - canonical", res, 1e-8);
  return v;
}

const char* kNames[kCriteria] = {
    "classification of SU_0.2(2)",
    "companion existence",
    "category dimensions",
    "quantum dimensions",
    "fiber functor faithfulness",
    "linking algebra relations",
    "multiplicities",
    "KMS and Kac case",
    "coactions",
    "cocycles",
    "A_u suite",
    "canonical forms",
};

const double kRuntime[kCriteria] = {0.1, 0.1, 60.0, INFINITY, INFINITY, 120.0,
                                    INFINITY, INFINITY, INFINITY, INFINITY, INFINITY, INFINITY};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& o) {
  if (id < 1 || id > kCriteria) throw Error(ErrorKind::InvalidInput, "no criterion " + std::to_string(id));
  const std::function<Verdict()> fns[kCriteria] = {
      c1, c2, c3, c4, c5, [&] { return c6(o); }, [&] { return c7(o); }, [&] { return c8(o); },
      [&] { return c9(o); }, [&] { return c10(o); }, c11, [&] { return c12(o); }};
  CriterionResult out;
  out.id = id;
  out.name = kNames[id - 1];
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = fns[id - 1]();
  } catch (const std::exception& e) {
    v.check(false, std::string("exception: ") + e.what());
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (std::isfinite(kRuntime[id - 1]))
    v.check(out.seconds < kRuntime[id - 1], "runtime " + fmt("%.3g", out.seconds) + " s (< " +
                                                 fmt("%g", kRuntime[id - 1]) + " s)");
  out.pass = v.pass;
  out.detail = v.detail;
  return out;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run_criterion(id, o));
  return out;
}

}  // namespace qmon
