// Benchmark comparing the serial reference kernels against the OpenMP
// production kernels on growing instances. Exact arithmetic makes the two
// paths bit-identical; the interesting number is the speedup.

#include <chrono>
#include <cstdio>

#include "warplab/fixtures.hpp"
#include "warplab/random_system.hpp"
#include "warplab/warp.hpp"

using namespace warplab;
namespace chrono = std::chrono;

namespace {

template <class Fn>
double time_ms(Fn&& fn) {
  auto t0 = chrono::high_resolution_clock::now();
  fn();
  auto t1 = chrono::high_resolution_clock::now();
  return chrono::duration<double, std::milli>(t1 - t0).count();
}

void bench_warped(const char* label, const WarpSystem<Rat>& sys) {
  DistanceMatrix<Rat> serial, parallel;
  double t_serial = time_ms([&] { serial = warped_metric_serial(sys); });
  double t_parallel = time_ms([&] { parallel = warped_metric(sys); });
  bool same = serial.values == parallel.values;
  std::printf("%-28s n=%5d  serial %9.1f ms  parallel %9.1f ms  x%.2f  %s\n",
              label, sys.size(), t_serial, t_parallel, t_serial / t_parallel,
              same ? "identical" : "MISMATCH");
}

void bench_delta(const char* label, const WarpSystem<Rat>& sys, int n_max) {
  DeltaTable<Rat> serial, parallel;
  double t_serial = time_ms([&] { serial = delta_table_serial(sys, n_max); });
  double t_parallel = time_ms([&] { parallel = delta_table(sys, n_max); });
  bool same = true;
  for (int k = 0; k <= n_max; ++k)
    if (serial.levels[k] != parallel.levels[k]) same = false;
  std::printf("%-28s n=%5d  serial %9.1f ms  parallel %9.1f ms  x%.2f  %s\n",
              label, sys.size(), t_serial, t_parallel, t_serial / t_parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("warped metric, all-pairs Dijkstra\n");
  for (int n : {32, 64, 128, 256}) {
    auto sys = random_warp_system(1234 + n, n, 2, RandomSystemKind::kGraphMetric);
    bench_warped("random graph metric", sys);
  }
  bench_warped("exp2 window W=8", fix_d_exp2_window(8));
  bench_warped("cyclic truncation s=8", fix_b_truncation(3).warp_system(Rat(8)));

  std::printf("\ndelta tables, n_max=6\n");
  for (int n : {32, 64, 128}) {
    auto sys = random_warp_system(99 + n, n, 2, RandomSystemKind::kGraphMetric);
    bench_delta("random graph metric", sys, 6);
  }
  return 0;
}
