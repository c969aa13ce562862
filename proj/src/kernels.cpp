#include "qmonoidal/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qmon {

namespace {

int thread_count(int jobs) {
#ifdef _OPENMP
  return jobs > 0 ? jobs : omp_get_max_threads();
#else
  (void)jobs;
  return 1;
#endif
}

// Products of one pair of basis elements for every channel of a task.
void fill_task(ProductTable& t, const PairTask& task) {
  const int dim = t.dim;
  Vec acc(dim);
  for (int a = 0; a < task.y.rows; ++a)
    for (int c = 0; c < task.y.cols; ++c) {
      const int i = task.y.offset + a * task.y.cols + c;
      for (int b = 0; b < task.z.rows; ++b)
        for (int d = 0; d < task.z.cols; ++d) {
          const int j = task.z.offset + b * task.z.cols + d;
          acc.setZero();
          const int row_p = a * task.z.rows + b;
          const int row_s = c * task.z.cols + d;
          for (const ChannelData& ch : task.channels)
            for (int e = 0; e < ch.x.rows; ++e) {
              const cplx left = ch.Sp(row_p, e);
              if (left == cplx(0.0)) continue;
              for (int f = 0; f < ch.x.cols; ++f)
                acc(ch.x.offset + e * ch.x.cols + f) += left * std::conj(ch.S(row_s, f));
            }
          t.at(i, j) = compress(acc);
          t.defined[static_cast<size_t>(i) * dim + j] = 1;
        }
    }
}

double norm(const SparseVec& s) {
  double acc = 0.0;
  for (const cplx& v : s.val) acc += std::norm(v);
  return std::sqrt(acc);
}

SparseVec difference(const SparseVec& a, const SparseVec& b, int dim) {
  return compress(expand(a, dim) - expand(b, dim));
}

SparseVec star_of(const SparseVec& a, const std::vector<SparseVec>& star, int dim) {
  Vec out = Vec::Zero(dim);
  for (size_t k = 0; k < a.idx.size(); ++k) {
    const SparseVec& s = star[a.idx[k]];
    const cplx c = std::conj(a.val[k]);
    for (size_t l = 0; l < s.idx.size(); ++l) out(s.idx[l]) += c * s.val[l];
  }
  return compress(out);
}

SparseVec unit_vector(int i) {
  SparseVec s;
  s.add(i, 1.0);
  return s;
}

}  // namespace

SparseVec compress(const Vec& dense) {
  SparseVec s;
  for (Eigen::Index i = 0; i < dense.size(); ++i)
    if (dense(i) != cplx(0.0)) s.add(static_cast<int>(i), dense(i));
  return s;
}

Vec expand(const SparseVec& s, int dim) {
  Vec v = Vec::Zero(dim);
  for (size_t k = 0; k < s.idx.size(); ++k) v(s.idx[k]) += s.val[k];
  return v;
}

ProductTable assemble_products(int dim, const std::vector<PairTask>& tasks, Exec exec, int jobs) {
  ProductTable t;
  t.dim = dim;
  t.defined.assign(static_cast<size_t>(dim) * dim, 0);
  t.entries.resize(static_cast<size_t>(dim) * dim);
  const int nt = static_cast<int>(tasks.size());
  if (exec == Exec::serial) {
    for (int k = 0; k < nt; ++k) fill_task(t, tasks[k]);
  } else {
    // Tasks write disjoint slots.
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(jobs))
    for (int k = 0; k < nt; ++k) fill_task(t, tasks[k]);
  }
  return t;
}

SparseVec table_multiply(const ProductTable& t, const SparseVec& a, const SparseVec& b) {
  Vec out = Vec::Zero(t.dim);
  for (size_t p = 0; p < a.idx.size(); ++p)
    for (size_t q = 0; q < b.idx.size(); ++q) {
      const int i = a.idx[p], j = b.idx[q];
      if (!t.has(i, j))
        throw Error(ErrorKind::LevelCapExceeded,
                    "product of basis elements " + std::to_string(i) + ", " + std::to_string(j) + " leaves the cap");
      const SparseVec& e = t.at(i, j);
      const cplx c = a.val[p] * b.val[q];
      for (size_t l = 0; l < e.idx.size(); ++l) out(e.idx[l]) += c * e.val[l];
    }
  return compress(out);
}

double associativity_residual(const ProductTable& t, const std::vector<std::array<int, 3>>& triples, Exec exec,
                              int jobs) {
  const int m = static_cast<int>(triples.size());
  auto one = [&](int k) {
    const auto& [i, j, l] = triples[k];
    const SparseVec left = table_multiply(t, t.at(i, j), unit_vector(l));
    const SparseVec right = table_multiply(t, unit_vector(i), t.at(j, l));
    return norm(difference(left, right, t.dim));
  };
  double worst = 0.0;
  if (exec == Exec::serial) {
    for (int k = 0; k < m; ++k) worst = std::max(worst, one(k));
  } else {
#pragma omp parallel for schedule(dynamic) reduction(max : worst) num_threads(thread_count(jobs))
    for (int k = 0; k < m; ++k) worst = std::max(worst, one(k));
  }
  return worst;
}

double antimultiplicativity_residual(const ProductTable& t, const std::vector<SparseVec>& star,
                                     const std::vector<std::array<int, 2>>& pairs, Exec exec, int jobs) {
  const int m = static_cast<int>(pairs.size());
  auto one = [&](int k) {
    const auto& [i, j] = pairs[k];
    const SparseVec left = star_of(t.at(i, j), star, t.dim);
    const SparseVec right = table_multiply(t, star[j], star[i]);
    return norm(difference(left, right, t.dim));
  };
  double worst = 0.0;
  if (exec == Exec::serial) {
    for (int k = 0; k < m; ++k) worst = std::max(worst, one(k));
  } else {
#pragma omp parallel for schedule(dynamic) reduction(max : worst) num_threads(thread_count(jobs))
    for (int k = 0; k < m; ++k) worst = std::max(worst, one(k));
  }
  return worst;
}

Mat gram_from_pairing(const Mat& w, const std::vector<SparseVec>& star, Exec exec, int jobs) {
  const int dim = static_cast<int>(w.rows());
  Mat g(dim, dim);
  auto row = [&](int i) {
    for (int j = 0; j < dim; ++j) {
      const SparseVec& s = star[j];
      cplx acc = 0.0;
      for (size_t l = 0; l < s.idx.size(); ++l) acc += s.val[l] * w(i, s.idx[l]);
      g(i, j) = acc;
    }
  };
  if (exec == Exec::serial) {
    for (int i = 0; i < dim; ++i) row(i);
  } else {
#pragma omp parallel for schedule(static) num_threads(thread_count(jobs))
    for (int i = 0; i < dim; ++i) row(i);
  }
  return g;
}

}  // namespace qmon
