#pragma once

#include "qmonoidal/core.hpp"

#include <array>
#include <vector>

namespace qmon {

/// Serial reference or OpenMP version of a kernel. Both produce identical
/// results: work is split by output slot and reductions are max-reductions.
enum class Exec { serial, parallel };

struct SparseVec {
  std::vector<int> idx;
  std::vector<cplx> val;

  void add(int i, cplx v) {
    idx.push_back(i);
    val.push_back(v);
  }
};

/// Dense accumulation of a sparse combination back into sparse form,
/// dropping exact zeros.
SparseVec compress(const Vec& dense);
Vec expand(const SparseVec& s, int dim);

/// Location of one label block in the global basis: element (a, b) of the
/// block sits at offset + a * cols + b.
struct BlockRef {
  int offset = 0;
  int rows = 0;
  int cols = 0;
};

/// One fusion channel z ⊂ y ⊗ z' feeding the product e^y_{ac} e^{z'}_{bd}:
/// coefficient Sp((a,b), e) · conj(S((c,d), f)) on e^x_{ef}.
struct ChannelData {
  BlockRef x;
  Mat S;   // source isometry, (d_y d_z') × d_x
  Mat Sp;  // transported isometry, (d'_y d'_z') × d'_x
};

struct PairTask {
  BlockRef y, z;
  std::vector<ChannelData> channels;
};

/// Structure constants e_i e_j for the pairs covered by the tasks; other
/// pairs stay undefined.
struct ProductTable {
  int dim = 0;
  std::vector<char> defined;
  std::vector<SparseVec> entries;

  bool has(int i, int j) const { return defined[static_cast<size_t>(i) * dim + j] != 0; }
  const SparseVec& at(int i, int j) const { return entries[static_cast<size_t>(i) * dim + j]; }
  SparseVec& at(int i, int j) { return entries[static_cast<size_t>(i) * dim + j]; }
};

ProductTable assemble_products(int dim, const std::vector<PairTask>& tasks, Exec exec, int jobs = 0);

/// Σ a_i b_j e_i e_j via the table; throws LevelCapExceeded when a needed
/// pair is undefined.
SparseVec table_multiply(const ProductTable& t, const SparseVec& a, const SparseVec& b);

/// max over triples of ‖(e_i e_j) e_k − e_i (e_j e_k)‖.
double associativity_residual(const ProductTable& t, const std::vector<std::array<int, 3>>& triples, Exec exec,
                              int jobs = 0);

/// max over pairs of ‖(e_i e_j)* − e_j* e_i*‖ with the involution given on
/// basis elements and extended antilinearly.
double antimultiplicativity_residual(const ProductTable& t, const std::vector<SparseVec>& star,
                                     const std::vector<std::array<int, 2>>& pairs, Exec exec, int jobs = 0);

/// G(i, j) = ω(e_i e_j*) from the pairing table W(i, j) = ω(e_i e_j).
Mat gram_from_pairing(const Mat& w, const std::vector<SparseVec>& star, Exec exec, int jobs = 0);

}  // namespace qmon
