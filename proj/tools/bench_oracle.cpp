// Times the saddle solver's best-response kernel in serial and OpenMP form
// on the same game and checks the two produce identical certificates.
#include <chrono>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "lotto/oracle.hpp"
#include "lotto/types.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace lotto;

namespace {

double run_once(const DiscretizedGame& game, std::int64_t iters, Exec exec,
                SaddleCertificate& cert) {
  const auto t0 = std::chrono::steady_clock::now();
  // epsilon tiny so the solver runs the full iteration budget
  cert = solve_saddle(game, 1e-12, iters, 7, exec);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oracle kernel benchmark: serial vs OpenMP"};
  double delta = 0.02;
  std::int64_t iters = 2000;
  int n = 3;
  app.add_option("--delta", delta)->check(CLI::PositiveNumber);
  app.add_option("--iters", iters)->check(CLI::PositiveNumber);
  app.add_option("--n", n)->check(CLI::Range(1, 3));
  CLI11_PARSE(app, argc, argv);

  std::vector<double> w(n, 1.0 / n);
  const GameInstance inst = make_instance(w, 1.0, 0.5, 1.0, 1.0);
  const PreAllocation p = proportional_preallocation(inst);
  const DiscretizedGame game = build_discretized(inst, p, delta);
  std::printf("game: n=%d delta=%g levels=%dx%d pure strategies A=%lld B=%lld\n",
              n, delta, game.levels_A, game.levels_B,
              static_cast<long long>(game.count_A),
              static_cast<long long>(game.count_B));
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both runs are serial\n");
#endif

  SaddleCertificate serial_cert, parallel_cert;
  const double t_serial = run_once(game, iters, Exec::Serial, serial_cert);
  const double t_parallel = run_once(game, iters, Exec::Parallel, parallel_cert);

  std::printf("serial   : %8.3f s  (%.1f iters/s)  value=%.9g gap=%.3g\n",
              t_serial, iters / t_serial, serial_cert.value, serial_cert.gap);
  std::printf("parallel : %8.3f s  (%.1f iters/s)  value=%.9g gap=%.3g\n",
              t_parallel, iters / t_parallel, parallel_cert.value,
              parallel_cert.gap);
  std::printf("speedup  : %.2fx\n", t_serial / t_parallel);

  const bool identical = serial_cert.value == parallel_cert.value &&
                         serial_cert.gap == parallel_cert.gap &&
                         serial_cert.sigma_A.entries == parallel_cert.sigma_A.entries &&
                         serial_cert.sigma_B.entries == parallel_cert.sigma_B.entries;
  std::printf("certificates identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
