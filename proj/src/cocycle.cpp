#include "qmonoidal/cocycle.hpp"

#include <algorithm>
#include <cmath>

namespace qmon {

const Mat& CocycleBlocks::at(const Word& y, const Word& z) const {
  auto it = blocks.find({y, z});
  if (it == blocks.end()) throw Error(ErrorKind::MissingBlock, "no block for ('" + y + "', '" + z + "')");
  return it->second;
}

CocycleBlocks CocycleBlocks::trivial(const Realization& r, int level) {
  CocycleBlocks out{r, level, {}, {}, true};
  const std::vector<Word> labels = r.labels(level);
  for (const Word& y : labels)
    for (const Word& z : labels) {
      if (y.size() + z.size() > static_cast<size_t>(level)) continue;
      const int d = r.rank(y) * r.rank(z);
      out.blocks[{y, z}] = Mat::Identity(d, d);
      out.exact_identity[{y, z}] = true;
    }
  return out;
}

CocycleBlocks build_cocycle(const Realization& r1, const Realization& r2, int level, const LabelUnitaries& u,
                            CocycleForm form) {
  if (!same_loop_data(r1, r2))
    throw Error(ErrorKind::NotMonoidallyEquivalent, "cocycle needs monoidally equivalent realizations");
  if (level > r1.level_cap() || level > r2.level_cap())
    throw Error(ErrorKind::LevelCapExceeded, "cocycle level above the realization cap");
  const double tol = r1.tol().check;
  const std::vector<Word> labels = r1.labels(level);

  std::map<Word, Mat> uu;
  for (const Word& x : labels) {
    const int d = r1.rank(x);
    if (r2.rank(x) != d)
      throw Error(ErrorKind::DimensionMismatch, "rank of '" + x + "' differs: " + std::to_string(d) + " vs " +
                                                    std::to_string(r2.rank(x)));
    auto it = u.find(x);
    Mat m = it == u.end() ? Mat::Identity(d, d) : it->second;
    if (m.rows() != d || m.cols() != d) throw Error(ErrorKind::DimensionMismatch, "u at '" + x + "' has wrong shape");
    if ((m.adjoint() * m - Mat::Identity(d, d)).norm() > tol)
      throw Error(ErrorKind::PreconditionFailed, "u at '" + x + "' is not unitary");
    if (x.empty() && (m - Mat::Identity(1, 1)).norm() > tol)
      throw Error(ErrorKind::PreconditionFailed, "u at the trivial label must be 1");
    uu[x] = std::move(m);
  }

  CocycleBlocks out{r1, level, {}, {}, true};
  for (const Word& y : labels)
    for (const Word& z : labels) {
      if (y.size() + z.size() > static_cast<size_t>(level)) continue;
      const FusionIsometries& fi = r1.fusion(y, z);
      const FusionIsometries fi2 = r2.transport_fusion(fi);
      const Mat uyz = kron(uu[y], uu[z]);
      const Eigen::Index d = uyz.rows();
      Mat acc = Mat::Zero(d, d);
      for (size_t c = 0; c < fi.channels.size(); ++c) {
        const Mat& s = fi.channels[c].S;
        const Mat& sp = fi2.channels[c].S;
        const Mat& ux = uu[fi.channels[c].z];
        if (form == CocycleForm::twist)
          acc += s * ux * sp.adjoint() * uyz.adjoint();
        else
          acc += uyz * sp * ux.adjoint() * s.adjoint();
      }
      const bool unit_leg = y.empty() || z.empty();
      if (unit_leg) {
        if ((acc - Mat::Identity(d, d)).norm() > tol)
          throw Error(ErrorKind::NumericalDegeneracy, "block with a trivial leg is not the identity");
        acc = Mat::Identity(d, d);
      }
      out.blocks[{y, z}] = std::move(acc);
      out.exact_identity[{y, z}] = unit_leg;
    }
  return out;
}

namespace {

// (Δ̂⊗ι)(Ω) restricted to x ⊗ y ⊗ z (left = true) or (ι⊗Δ̂)(Ω) (left = false).
Mat coproduct_leg(const CocycleBlocks& om, const Word& x, const Word& y, const Word& z, bool left) {
  const Realization& r = om.source;
  const int dx = r.rank(x), dy = r.rank(y), dz = r.rank(z);
  const FusionIsometries& fi = left ? r.fusion(x, y) : r.fusion(y, z);
  bool all_identity = true;
  for (const FusionChannel& ch : fi.channels) {
    const auto key = left ? std::make_pair(ch.z, z) : std::make_pair(x, ch.z);
    om.at(key.first, key.second);
    auto it = om.exact_identity.find(key);
    all_identity = all_identity && it != om.exact_identity.end() && it->second;
  }
  const int d = dx * dy * dz;
  if (all_identity) return Mat::Identity(d, d);
  Mat acc = Mat::Zero(d, d);
  for (const FusionChannel& ch : fi.channels) {
    if (left) {
      const Mat s = kron(ch.S, Mat::Identity(dz, dz));
      acc += s * om.at(ch.z, z) * s.adjoint();
    } else {
      const Mat s = kron(Mat::Identity(dx, dx), ch.S);
      acc += s * om.at(x, ch.z) * s.adjoint();
    }
  }
  return acc;
}

}  // namespace

double check_cocycle_identity(const CocycleBlocks& om, int level) {
  if (level < 0) level = om.level;
  const Realization& r = om.source;
  const std::vector<Word> labels = r.labels(level);
  double worst = 0.0;
  for (const Word& x : labels)
    for (const Word& y : labels)
      for (const Word& z : labels) {
        if (x.size() + y.size() + z.size() > static_cast<size_t>(level)) continue;
        const int dx = r.rank(x), dz = r.rank(z);
        const Mat lhs = coproduct_leg(om, x, y, z, true) * kron(om.at(x, y), Mat::Identity(dz, dz));
        const Mat rhs = coproduct_leg(om, x, y, z, false) * kron(Mat::Identity(dx, dx), om.at(y, z));
        worst = std::max(worst, (lhs - rhs).norm());
      }
  return worst;
}

double unitarity_residual(const CocycleBlocks& om) {
  double worst = 0.0;
  for (const auto& [k, m] : om.blocks)
    worst = std::max(worst, (m.adjoint() * m - Mat::Identity(m.rows(), m.cols())).norm());
  return worst;
}

bool coboundary_equivalent(const FMatrix& f1, const FMatrix& f2, const Tolerances& tol) {
  const AoParams p1 = validate_ao(f1, tol);
  const AoParams p2 = validate_ao(f2, tol);
  if (std::abs(std::abs(p1.c) - 1.0) > tol.check || std::abs(std::abs(p2.c) - 1.0) > tol.check)
    throw Error(ErrorKind::PreconditionFailed, "coboundary criterion needs normalized matrices (|c| = 1)");
  if (f1.n() != f2.n()) throw Error(ErrorKind::PreconditionFailed, "matrices of different size");
  if (std::abs(p1.trace - p2.trace) > tol.check * std::max(1.0, p1.trace))
    throw Error(ErrorKind::PreconditionFailed, "traces differ");
  if (p1.sign != p2.sign) return false;
  const auto s1 = gram_spectrum(f1.matrix());
  const auto s2 = gram_spectrum(f2.matrix());
  for (size_t i = 0; i < s1.size(); ++i)
    if (std::abs(s1[i] - s2[i]) > tol.check * std::max(1.0, std::abs(s1[i]))) return false;
  return true;
}

}  // namespace qmon
