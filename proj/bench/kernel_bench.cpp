// Compares the serial and OpenMP state-vector kernels on random gates.
#include <benchmark/benchmark.h>

#include "qsim/kernels.hpp"
#include "qsim/state.hpp"

#include <complex>
#include <random>

using namespace qsim;

namespace {

Mat2 random_unitary2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = cxd(g(rng), g(rng));
  Eigen::HouseholderQR<Mat2> qr(m);
  Mat2 q = qr.householderQ();
  return q;
}

Mat4 random_unitary4(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = cxd(g(rng), g(rng));
  Eigen::HouseholderQR<Mat4> qr(m);
  Mat4 q = qr.householderQ();
  return q;
}

Vec random_state(int L, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec v(dim_of(L));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cxd(g(rng), g(rng));
  v /= v.norm();
  return v;
}

void bench_1q(benchmark::State& state, Exec ex) {
  const int L = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  const Mat2 g = random_unitary2(rng);
  Vec amps = random_state(L, rng);
  int q = 0;
  for (auto _ : state) {
    apply_1q(amps.data(), L, q, g, ex);
    q = (q + 1) % L;
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << L));
}

void bench_2q(benchmark::State& state, Exec ex) {
  const int L = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  const Mat4 g = random_unitary4(rng);
  Vec amps = random_state(L, rng);
  int q = 0;
  for (auto _ : state) {
    apply_2q(amps.data(), L, q, (q + 1) % L, g, ex);
    q = (q + 1) % L;
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << L));
}

void bench_zz(benchmark::State& state, Exec ex) {
  const int L = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  Vec amps = random_state(L, rng);
  int q = 0;
  for (auto _ : state) {
    apply_zz_phase(amps.data(), L, q, (q + 1) % L, 0.37, ex);
    q = (q + 1) % L;
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << L));
}

void serial_1q(benchmark::State& s) { bench_1q(s, Exec::Serial); }
void parallel_1q(benchmark::State& s) { bench_1q(s, Exec::Parallel); }
void serial_2q(benchmark::State& s) { bench_2q(s, Exec::Serial); }
void parallel_2q(benchmark::State& s) { bench_2q(s, Exec::Parallel); }
void serial_zz(benchmark::State& s) { bench_zz(s, Exec::Serial); }
void parallel_zz(benchmark::State& s) { bench_zz(s, Exec::Parallel); }

} // namespace

BENCHMARK(serial_1q)->DenseRange(12, 18, 2);
BENCHMARK(parallel_1q)->DenseRange(12, 18, 2);
BENCHMARK(serial_2q)->DenseRange(12, 18, 2);
BENCHMARK(parallel_2q)->DenseRange(12, 18, 2);
BENCHMARK(serial_zz)->DenseRange(12, 18, 2);
BENCHMARK(parallel_zz)->DenseRange(12, 18, 2);

BENCHMARK_MAIN();
