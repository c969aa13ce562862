#include "qmonoidal/realization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace qmon {

namespace {

using RowMajorMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Index ipow(int n, int k) {
  Eigen::Index r = 1;
  for (int i = 0; i < k; ++i) r *= n;
  return r;
}

}  // namespace

const char* to_string(Variant v) { return v == Variant::ao ? "ao" : "au"; }

std::vector<const FusionChannel*> FusionIsometries::to(const Word& z) const {
  std::vector<const FusionChannel*> out;
  for (const auto& ch : channels)
    if (ch.z == z) out.push_back(&ch);
  return out;
}

Realization Realization::ao(const FMatrix& f, const Tolerances& tol, int level_cap) {
  const FMatrix g = normalize_ao(f, tol);
  const AoParams p = validate_ao(g, tol);
  Realization r;
  r.variant_ = Variant::ao;
  r.f_ = g.matrix();
  r.delta_ = p.trace;
  r.sign_ = p.sign;
  r.sigma_ = p.sign / p.trace;
  r.tol_ = tol;
  r.cap_ = level_cap > 0 ? level_cap : (g.n() <= 2 ? 6 : 4);
  const int n = g.n();
  r.cup_t_ = Vec(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.cup_t_(i * n + j) = r.f_(j, i) / std::sqrt(p.trace);
  r.cup_s_ = r.cup_t_;
  r.cache_ = std::make_shared<Cache>();
  return r;
}

Realization Realization::au(const FMatrix& f, const Tolerances& tol, int level_cap) {
  const AuParams p = validate_au(f, tol);
  if (std::abs(p.trace - p.inv_trace) > tol.check * std::max(1.0, p.trace))
    throw Error(ErrorKind::NotNormalized, "A_u realization needs Tr(F*F) = Tr((F*F)^-1)");
  Realization r;
  r.variant_ = Variant::au;
  r.f_ = f.matrix();
  r.delta_ = p.trace;
  r.sign_ = 1;
  r.sigma_ = 1.0 / p.trace;
  r.tol_ = tol;
  r.cap_ = level_cap > 0 ? level_cap : 4;
  const int n = f.n();
  const Mat finv = r.f_.inverse();
  const double s = std::sqrt(p.trace);
  r.cup_t_ = Vec(n * n);
  r.cup_s_ = Vec(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      r.cup_t_(i * n + j) = r.f_(j, i) / s;
      r.cup_s_(i * n + j) = std::conj(finv(j, i)) / s;
    }
  r.cache_ = std::make_shared<Cache>();
  return r;
}

void Realization::check_cap(int len, const char* what) const {
  if (len > cap_)
    throw Error(ErrorKind::LevelCapExceeded,
                std::string(what) + " at length " + std::to_string(len) + " exceeds cap " + std::to_string(cap_));
}

const Vec& Realization::cup(char x, char y) const {
  if (variant_ == Variant::ao && x == 'a' && y == 'a') return cup_t_;
  if (variant_ == Variant::au && x == 'a' && y == 'b') return cup_t_;
  if (variant_ == Variant::au && x == 'b' && y == 'a') return cup_s_;
  throw Error(ErrorKind::InvalidInput, std::string("no cup for letters ") + x + y);
}

Mat Realization::evaluate(const Diagram& d) const {
  const int n = this->n();
  const int nt = d.n_top(), nb = d.n_bottom();
  Mat out = Mat::Zero(ipow(n, nt), ipow(n, nb));

  struct Arc {
    int kind;  // 0 cup, 1 cap, 2 through
    Eigen::Index s1, s2;
    const Vec* v;
  };
  auto top_stride = [&](int i) { return ipow(n, nt - 1 - i); };
  auto bot_stride = [&](int j) { return ipow(n, nb - 1 - j); };
  std::vector<Arc> arcs;
  for (int p = 0; p < d.n_points(); ++p) {
    const int q = d.partner[p];
    if (q < p) continue;
    if (d.is_top(p) && d.is_top(q)) {
      arcs.push_back({0, top_stride(p), top_stride(q), &cup(d.top[p], d.top[q])});
    } else if (!d.is_top(p) && !d.is_top(q)) {
      const int i = p - nt, j = q - nt;
      arcs.push_back({1, bot_stride(i), bot_stride(j), &cup(d.bottom[i], d.bottom[j])});
    } else {
      arcs.push_back({2, top_stride(p), bot_stride(q - nt), nullptr});
    }
  }

  std::function<void(size_t, Eigen::Index, Eigen::Index, cplx)> rec = [&](size_t k, Eigen::Index row,
                                                                          Eigen::Index col, cplx val) {
    if (k == arcs.size()) {
      out(row, col) += val;
      return;
    }
    const Arc& a = arcs[k];
    if (a.kind == 2) {
      for (int u = 0; u < n; ++u) rec(k + 1, row + u * a.s1, col + u * a.s2, val);
      return;
    }
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        const cplx c = (*a.v)(u * n + v);
        if (c == cplx(0.0)) continue;
        if (a.kind == 0)
          rec(k + 1, row + u * a.s1 + v * a.s2, col, val * c);
        else
          rec(k + 1, row, col + u * a.s1 + v * a.s2, val * std::conj(c));
      }
  };
  rec(0, 0, 0, cplx(1.0));
  return out;
}

Mat Realization::evaluate(const DiagramCombo& c) const {
  Mat out = Mat::Zero(ipow(n(), static_cast<int>(c.top.size())), ipow(n(), static_cast<int>(c.bottom.size())));
  for (const auto& [coef, d] : c.terms) {
    if (d.top != c.top || d.bottom != c.bottom)
      throw Error(ErrorKind::DimensionMismatch, "diagram combination with mixed words");
    out += coef * evaluate(d);
  }
  return out;
}

MorphismSpace Realization::mor_basis(const Word& bottom, const Word& top, bool require_nonzero) const {
  const int pts = static_cast<int>(bottom.size() + top.size());
  if (require_nonzero && pts % 2 != 0)
    throw Error(ErrorKind::OddParity, "Mor(" + bottom + ", " + top + ") = 0 by parity");
  if (pts > 2 * cap_)
    throw Error(ErrorKind::LevelCapExceeded, "morphism space " + bottom + "->" + top + " beyond cap");
  MorphismSpace ms{bottom, top, enumerate_diagrams(bottom, top, coloring()), {}};
  const Eigen::Index rows = ipow(n(), static_cast<int>(top.size()));
  const Eigen::Index cols = ipow(n(), static_cast<int>(bottom.size()));
  if (ms.diagrams.empty()) return ms;
  Mat stack(rows * cols, static_cast<Eigen::Index>(ms.diagrams.size()));
  for (size_t k = 0; k < ms.diagrams.size(); ++k) {
    const Mat m = evaluate(ms.diagrams[k]);
    stack.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vec>(m.data(), m.size());
  }
  const Mat b = column_basis(stack, tol_.rank);
  for (Eigen::Index k = 0; k < b.cols(); ++k) ms.basis.push_back(Eigen::Map<const Mat>(b.col(k).data(), rows, cols));
  return ms;
}

const JWProjection& Realization::jw(const Word& x) const {
  {
    std::lock_guard<std::mutex> lk(cache_->mu);
    auto it = cache_->jw.find(x);
    if (it != cache_->jw.end()) return *it->second;
  }
  const int L = static_cast<int>(x.size());
  check_cap(L, "projection");
  if (!is_word(x) || (variant_ == Variant::ao && x.find('b') != Word::npos))
    throw Error(ErrorKind::InvalidInput, "bad label '" + x + "'");
  auto jp = std::make_shared<JWProjection>();
  jp->label = x;
  const Eigen::Index dim = ipow(n(), L);
  std::vector<Mat> images;
  for (int i = 0; i + 1 < L; ++i)
    if (coloring().can_pair(x[i], x[i + 1]))
      images.push_back(evaluate(insertion_diagram(x.substr(0, i), x[i], x[i + 1], x.substr(i + 2))));
  if (images.empty()) {
    jp->projection = Mat::Identity(dim, dim);
    jp->carrier = Mat::Identity(dim, dim);
    jp->rank = static_cast<int>(dim);
  } else {
    Eigen::Index total = 0;
    for (const auto& m : images) total += m.cols();
    Mat stack(dim, total);
    Eigen::Index off = 0;
    for (const auto& m : images) {
      stack.middleCols(off, m.cols()) = m;
      off += m.cols();
    }
    Eigen::JacobiSVD<Mat> svd(stack, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > tol_.rank * std::max(1.0, s(0))) ++r;
    jp->carrier = svd.matrixU().rightCols(dim - r);
    jp->projection = jp->carrier * jp->carrier.adjoint();
    jp->rank = static_cast<int>(dim - r);
    const Mat& P = jp->projection;
    jp->residual = std::max({(P * P - P).norm(), (P - P.adjoint()).norm(), (P * stack).norm()});
    if (jp->residual > tol_.check)
      throw Error(ErrorKind::NumericalDegeneracy, "projection residual too large at " + x);
  }
  std::lock_guard<std::mutex> lk(cache_->mu);
  auto [it, inserted] = cache_->jw.emplace(x, std::move(jp));
  return *it->second;
}

std::vector<Word> Realization::labels(int max_len) const {
  std::vector<Word> out;
  if (variant_ == Variant::ao) {
    for (int x = 0; x <= max_len; ++x) out.push_back(level_word(x));
    return out;
  }
  out.push_back("");
  for (int len = 1; len <= max_len; ++len)
    for (int bits = 0; bits < (1 << len); ++bits) {
      Word w(len, 'a');
      for (int i = 0; i < len; ++i)
        if (bits & (1 << (len - 1 - i))) w[i] = 'b';
      out.push_back(w);
    }
  return out;
}

Mat Realization::to_carriers(const Mat& d, const Word& x, const Word& y, const Word& z) const {
  const Mat& vx = carrier(x);
  const Mat& vy = carrier(y);
  const Mat& vz = carrier(z);
  const Eigen::Index nx = vx.rows(), ny = vy.rows();
  if (d.rows() != nx * ny || d.cols() != vz.rows())
    throw Error(ErrorKind::DimensionMismatch, "to_carriers: shape mismatch");
  const Mat a = d * vz;
  const Mat vyc = vy.conjugate();
  Mat out(vx.cols() * vy.cols(), vz.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const Vec col = a.col(c);
    Eigen::Map<const RowMajorMat> cm(col.data(), nx, ny);
    const RowMajorMat r = vx.adjoint() * cm * vyc;
    out.col(c) = Eigen::Map<const Vec>(r.data(), r.size());
  }
  return out;
}

Mat Realization::conjugation_matrix(const Word& x) const {
  const Word xb = dual(x);
  const Mat& vx = carrier(x);
  const Mat& vxb = carrier(xb);
  const Mat t = evaluate(nested_cup(x, xb));
  Eigen::Map<const RowMajorMat> tm(t.data(), vx.rows(), vxb.rows());
  return vx.adjoint() * tm * vxb.conjugate();
}

Mat Realization::q_matrix(const Word& x) const {
  const Mat t = conjugation_matrix(x);
  if (t.norm() <= tol_.rank) throw Error(ErrorKind::ZeroSpace, "projected cup vanishes at " + x);
  Mat q = t * t.adjoint();
  q = 0.5 * (q + q.adjoint());
  const double tr = q.trace().real();
  const double tri = q.inverse().trace().real();
  return q * std::sqrt(tri / tr);
}

double Realization::irrep_qdim(const Word& x) const { return q_matrix(x).trace().real(); }

std::vector<Word> Realization::fusion_candidates(const Word& x, const Word& y) const {
  const int total = static_cast<int>(x.size() + y.size());
  std::vector<Word> out;
  for (const Word& z : labels(total))
    if ((total - static_cast<int>(z.size())) % 2 == 0) out.push_back(z);
  return out;
}

namespace {

void fusion_residuals(FusionIsometries& fi, Eigen::Index dim) {
  Mat sum = Mat::Zero(dim, dim);
  double orth = 0.0;
  for (size_t i = 0; i < fi.channels.size(); ++i) {
    const Mat& si = fi.channels[i].S;
    sum += si * si.adjoint();
    for (size_t j = 0; j < fi.channels.size(); ++j) {
      const Mat& sj = fi.channels[j].S;
      if (si.cols() != sj.cols() && i != j) continue;
      Mat g = si.adjoint() * sj;
      if (i == j) g -= Mat::Identity(g.rows(), g.cols());
      orth = std::max(orth, g.norm());
    }
  }
  fi.orthogonality_residual = orth;
  fi.completeness_residual = (sum - Mat::Identity(dim, dim)).norm();
}

}  // namespace

FusionIsometries Realization::compute_fusion(const Word& x, const Word& y) const {
  check_cap(static_cast<int>(x.size() + y.size()), "fusion");
  FusionIsometries fi;
  fi.x = x;
  fi.y = y;
  const Word xy = x + y;
  for (const Word& z : fusion_candidates(x, y)) {
    const auto ds = enumerate_diagrams(z, xy, coloring());
    if (ds.empty()) continue;
    const double dz = static_cast<double>(rank(z));
    std::vector<int> chosen;
    std::vector<Mat> ms;
    Mat stack(static_cast<Eigen::Index>(rank(x)) * rank(y) * rank(z), 0);
    int cur_rank = 0;
    for (size_t k = 0; k < ds.size(); ++k) {
      Mat m = to_carriers(evaluate(ds[k]), x, y, z);
      Mat trial(stack.rows(), stack.cols() + 1);
      trial << stack, Eigen::Map<const Vec>(m.data(), m.size());
      const int r = numerical_rank(trial, tol_.rank);
      if (r > cur_rank) {
        cur_rank = r;
        stack = trial;
        chosen.push_back(static_cast<int>(k));
        ms.push_back(std::move(m));
      }
    }
    const int mult = static_cast<int>(chosen.size());
    if (mult == 0) continue;
    Mat g = stack.adjoint() * stack / dz;
    const Mat c = positive_power(g, -0.5);
    for (int j = 0; j < mult; ++j) {
      FusionChannel ch;
      ch.z = z;
      ch.index = j;
      ch.diagrams = chosen;
      ch.coeffs = c.col(j);
      ch.S = Mat::Zero(ms[0].rows(), ms[0].cols());
      for (int l = 0; l < mult; ++l) ch.S += c(l, j) * ms[l];
      fi.channels.push_back(std::move(ch));
    }
  }
  fusion_residuals(fi, static_cast<Eigen::Index>(rank(x)) * rank(y));

  if (variant_ == Variant::ao) {
    const int a = static_cast<int>(x.size()), b = static_cast<int>(y.size());
    std::map<int, int> mult;
    for (const auto& ch : fi.channels) ++mult[static_cast<int>(ch.z.size())];
    for (int z = 0; z <= a + b; ++z) {
      const int expect = (z >= std::abs(a - b) && (a + b - z) % 2 == 0) ? 1 : 0;
      if (mult[z] != expect)
        throw Error(ErrorKind::MultiplicityMismatch, "level " + std::to_string(z) + " in " + std::to_string(a) +
                                                         " x " + std::to_string(b));
    }
  }
  if (fi.completeness_residual > tol_.check || fi.orthogonality_residual > tol_.check)
    throw Error(ErrorKind::MultiplicityMismatch, "fusion isometries of " + x + " x " + y + " incomplete");
  return fi;
}

const FusionIsometries& Realization::fusion(const Word& x, const Word& y) const {
  const auto key = std::make_pair(x, y);
  {
    std::lock_guard<std::mutex> lk(cache_->mu);
    auto it = cache_->fusion.find(key);
    if (it != cache_->fusion.end()) return *it->second;
  }
  auto fi = std::make_shared<const FusionIsometries>(compute_fusion(x, y));
  std::lock_guard<std::mutex> lk(cache_->mu);
  auto [it, inserted] = cache_->fusion.emplace(key, std::move(fi));
  return *it->second;
}

FusionIsometries Realization::transport_fusion(const FusionIsometries& src) const {
  FusionIsometries fi;
  fi.x = src.x;
  fi.y = src.y;
  const Word xy = src.x + src.y;
  std::map<Word, std::vector<Diagram>> diagrams;
  for (const auto& sch : src.channels) {
    auto it = diagrams.find(sch.z);
    if (it == diagrams.end()) it = diagrams.emplace(sch.z, enumerate_diagrams(sch.z, xy, coloring())).first;
    FusionChannel ch = sch;
    ch.S = Mat::Zero(static_cast<Eigen::Index>(rank(src.x)) * rank(src.y), rank(sch.z));
    for (size_t l = 0; l < sch.diagrams.size(); ++l)
      ch.S += sch.coeffs(static_cast<Eigen::Index>(l)) *
              to_carriers(evaluate(it->second.at(static_cast<size_t>(sch.diagrams[l]))), src.x, src.y, sch.z);
    fi.channels.push_back(std::move(ch));
  }
  fusion_residuals(fi, static_cast<Eigen::Index>(rank(src.x)) * rank(src.y));
  return fi;
}

Mat Realization::sixj(const Word& a, const Word& x, const Word& y, const Word& z) const {
  check_cap(static_cast<int>(x.size() + y.size() + z.size()), "6j");
  const Eigen::Index dx = rank(x), dz = rank(z);
  std::vector<Mat> b1, b2;
  for (const auto& w : fusion(x, y).channels)
    for (const FusionChannel* c : fusion(w.z, z).to(a))
      b1.push_back(kron(w.S, Mat::Identity(dz, dz)) * c->S);
  for (const auto& v : fusion(y, z).channels)
    for (const FusionChannel* c : fusion(x, v.z).to(a))
      b2.push_back(kron(Mat::Identity(dx, dx), v.S) * c->S);
  if (b1.empty() && b2.empty()) throw Error(ErrorKind::ZeroSpace, "Mor(a, x y z) = 0");
  if (b1.size() != b2.size()) throw Error(ErrorKind::MultiplicityMismatch, "6j bases of different size");
  const double da = static_cast<double>(rank(a));
  Mat m(b1.size(), b2.size());
  for (size_t i = 0; i < b1.size(); ++i)
    for (size_t j = 0; j < b2.size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (b1[i].adjoint() * b2[j]).trace() / da;
  return m;
}

bool same_loop_data(const Realization& a, const Realization& b) {
  if (a.variant() != b.variant()) return false;
  const double t = a.tol().check;
  if (a.variant() == Variant::ao) return std::abs(a.sigma() - b.sigma()) <= t;
  return std::abs(a.delta() - b.delta()) <= t * std::max(1.0, a.delta());
}

Mat transport(const DiagramCombo& c, const Realization& src, const Realization& dst) {
  if (!same_loop_data(src, dst))
    throw Error(ErrorKind::BetaMismatch, "realizations have different loop parameters");
  return dst.evaluate(c);
}

}  // namespace qmon
