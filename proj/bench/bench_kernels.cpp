// Serial reference vs OpenMP kernels on a linking algebra between two
// realizations of the same 2x2 matrix up to a unitary change of basis.
#include "qmonoidal/kernels.hpp"
#include "qmonoidal/linking.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace qmon;

namespace {

struct Fixture {
  Realization r1, r2;
  LinkingAlgebra l;
  std::vector<std::array<int, 3>> triples;
  std::vector<std::array<int, 2>> pairs;

  static Realization make(bool rotate) {
    Mat f(2, 2);
    f << 0, std::sqrt(0.2), -1.0 / std::sqrt(0.2), 0;
    if (rotate) {
      std::mt19937_64 rng(7);
      const Mat v = random_unitary(2, rng);
      f = v * f * v.transpose();
    }
    return Realization::ao(FMatrix(f));
  }

  Fixture() : r1(make(false)), r2(make(true)), l(LinkingAlgebra::build(r1, r2, 3)) {
    for (int i = 0; i < l.dim(); ++i)
      for (int j = 0; j < l.dim(); ++j) {
        const int lij = l.level_of(i) + l.level_of(j);
        if (lij > l.level()) continue;
        pairs.push_back({i, j});
        for (int k = 0; k < l.dim(); ++k)
          if (lij + l.level_of(k) <= l.level()) triples.push_back({i, j, k});
      }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

Exec exec_of(const benchmark::State& s) { return s.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_build(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    auto l = LinkingAlgebra::build(f.r1, f.r2, 3, state.range(0) == 0 ? 1 : 0);
    benchmark::DoNotOptimize(l.dim());
  }
}

void BM_associativity(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(associativity_residual(f.l.products(), f.triples, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.triples.size()));
}

void BM_antimult(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        antimultiplicativity_residual(f.l.products(), f.l.star_table(), f.pairs, exec_of(state)));
}

void BM_gram(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(gram_from_pairing(f.l.pairing(), f.l.star_table(), exec_of(state)));
}

}  // namespace

// arg 0: serial reference, arg 1: OpenMP
BENCHMARK(BM_build)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_associativity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_antimult)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gram)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
