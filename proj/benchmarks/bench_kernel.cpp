#include <benchmark/benchmark.h>

#include "mlv/families.hpp"
#include "mlv/groebner.hpp"
#include "mlv/invariants.hpp"
#include "mlv/poly_matrix.hpp"
#include "mlv/strata.hpp"
#include "mlv/tensor.hpp"

using namespace mlv;

namespace {

FieldId field_arg(std::int64_t code) { return code == 0 ? FieldId::rationals() : FieldId::prime(101); }

IdealPresentation ideal_of(const Tensor& t) {
  IdealPresentation ip;
  ip.field = t.field();
  ip.blocks = t.blocks();
  ip.order = MonomialOrder::degrevlex();
  for (auto& p : tensor_to_polys(t))
    if (!p.is_zero()) ip.generators.push_back(std::move(p));
  return ip;
}

}  // namespace

static void BM_BuchbergerMatmul(benchmark::State& state) {
  const auto ip = ideal_of(gen_matmul_map(field_arg(state.range(1)), static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(buchberger(ip).basis.size());
}
BENCHMARK(BM_BuchbergerMatmul)->ArgsProduct({{2}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_BuchbergerRandom(benchmark::State& state) {
  const auto t = gen_random(field_arg(state.range(1)), VarBlocks({3, 3, 3}), static_cast<std::size_t>(state.range(0)), 11);
  const auto ip = ideal_of(t);
  for (auto _ : state) benchmark::DoNotOptimize(ideal_dimension(buchberger(ip)));
}
BENCHMARK(BM_BuchbergerRandom)->ArgsProduct({{1, 2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_Minors(benchmark::State& state) {
  const auto mat = coefficient_matrix(gen_random(FieldId::rationals(), VarBlocks({3, 3, 4}), 4, 5));
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(minors(mat, k).size());
}
BENCHMARK(BM_Minors)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

static void BM_Stratification(benchmark::State& state) {
  const auto t = gen_random(field_arg(state.range(1)), VarBlocks({3, 3, 3}), static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(codim_by_stratification(t).total_codim);
}
BENCHMARK(BM_Stratification)->Args({1, 0})->Args({2, 0})->Args({1, 1})->Args({2, 1})->Args({3, 1})->Unit(benchmark::kMillisecond);

static void BM_GeometricRankDiag(benchmark::State& state) {
  const auto t = gen_diag(FieldId::rationals(), 3, static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(geometric_rank(t).lo);
}
BENCHMARK(BM_GeometricRankDiag)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

static void BM_FamilyQuaternion(benchmark::State& state) {
  const auto t = gen_quaternion(FieldId::rationals(), Scalar::parse(FieldId::rationals(), "-1"),
                                Scalar::parse(FieldId::rationals(), "-1"));
  for (auto _ : state) {
    Rng rng(7);
    const auto v = random_rational_solution(t, rng);
    benchmark::DoNotOptimize(build_family_through(t, v, rng).parameter_dim);
  }
}
BENCHMARK(BM_FamilyQuaternion)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
