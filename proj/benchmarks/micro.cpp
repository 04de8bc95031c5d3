#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "arboreal/measure.hpp"

using namespace arboreal;

namespace {

GroupPtr sym3() {
  static GroupPtr F = std::make_shared<LocalGroup>(LocalGroup::parse(3, "(12),(123)"));
  return F;
}

GroupPtr dih5() {
  static GroupPtr F = std::make_shared<LocalGroup>(LocalGroup::parse(5, "(12345),(25)(34)"));
  return F;
}

std::vector<Portrait> random_pool(GroupPtr F, std::size_t count) {
  std::mt19937_64 rng(17);
  std::vector<Portrait> pool;
  pool.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pool.push_back(Portrait::random(F, rng));
  return pool;
}

}  // namespace

static void BM_apply_composite(benchmark::State& state) {
  GroupPtr F = sym3();
  std::mt19937_64 rng(3);
  Portrait g = compose(Portrait::random(F, rng), inverse(Portrait::random(F, rng)));
  Vertex v = Vertex::parse("12131213", 3);
  for (auto _ : state) benchmark::DoNotOptimize(g.apply(v));
}
BENCHMARK(BM_apply_composite);

static void BM_point_stabilizer_coset(benchmark::State& state) {
  GroupPtr F = dih5();
  for (auto _ : state) {
    benchmark::DoNotOptimize(F->transversal2(2, 5, 1, 1));
    benchmark::DoNotOptimize(F->coset(1, 3));
  }
}
BENCHMARK(BM_point_stabilizer_coset);

static void BM_classify_random(benchmark::State& state) {
  auto pool = random_pool(sym3(), 64);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(pool[i]));
    i = (i + 1) % pool.size();
  }
}
BENCHMARK(BM_classify_random);

static void BM_kak_decompose(benchmark::State& state) {
  auto pool = random_pool(sym3(), 64);
  Edge e{Vertex::base(), 1};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kak_decompose(pool[i], e));
    i = (i + 1) % pool.size();
  }
}
BENCHMARK(BM_kak_decompose);

static void BM_enumerate_cosets_d5(benchmark::State& state) {
  ParabolicSpec H = full_fixator(dih5(), BoundaryPoint::parse("|12", 5));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_cosets(H, 3));
}
BENCHMARK(BM_enumerate_cosets_d5);

static void BM_bound_integral_words(benchmark::State& state) {
  GroupPtr F = sym3();
  RhoFunction rho = make_rho(full_fixator(F, BoundaryPoint::parse("|12", 3)));
  Portrait g = Portrait::left_mult(F, BoundaryPoint::parse("|12", 3).ray_vertex(6));
  Portrait id = Portrait::identity(F);
  for (auto _ : state) benchmark::DoNotOptimize(bound_integral(rho, g, id, id, 6));
}
BENCHMARK(BM_bound_integral_words);

static void BM_bound_integral_walks(benchmark::State& state) {
  GroupPtr F = sym3();
  RhoFunction rho = make_rho(full_fixator(F, BoundaryPoint::parse("|12", 3)));
  Portrait g = compose(Portrait::left_mult(F, Vertex::parse("12", 3)), Portrait::identity(F));
  Portrait id = Portrait::identity(F);
  for (auto _ : state) benchmark::DoNotOptimize(bound_integral(rho, g, id, id, 3));
}
BENCHMARK(BM_bound_integral_walks);

static void BM_rho_eval_mixed(benchmark::State& state) {
  GroupPtr F = sym3();
  RhoFunction rho = make_rho(full_fixator(F, BoundaryPoint::parse("|12", 3)));
  Portrait g = compose(Portrait::rotation(F, Perm::parse("(12)", 3)),
                       Portrait::left_mult(F, Vertex::parse("1212", 3)));
  for (auto _ : state) benchmark::DoNotOptimize(rho_eval(rho, g));
}
BENCHMARK(BM_rho_eval_mixed);

static void BM_sn_sequence_100(benchmark::State& state) {
  Rational t(1, 4);
  for (auto _ : state) benchmark::DoNotOptimize(sn_sequence(3, 1, t, 100));
}
BENCHMARK(BM_sn_sequence_100);

BENCHMARK_MAIN();
