#include "lotto/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lotto/glf_solver.hpp"

namespace lotto {

int DiscretizedGame::digit(std::int64_t index, int b, Player who) const {
  const int L = levels(who);
  for (int k = 0; k < b; ++k) index /= L;
  return static_cast<int>(index % L);
}

double DiscretizedGame::cost(std::int64_t index, Player who) const {
  const int L = levels(who);
  std::int64_t units = 0;
  for (int b = 0; b < instance.n; ++b) {
    units += index % L;
    index /= L;
  }
  return delta * static_cast<double>(units);
}

namespace {

constexpr std::int64_t kMaxPureStrategies = 100000;

double tie_share_A(TieRule ties) {
  switch (ties) {
    case TieRule::CoinFlip: return 0.5;
    case TieRule::BWins: return 0.0;
    case TieRule::AWins: return 1.0;
  }
  return 0.5;
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Normalized per-battlefield marginals of a player's average strategy,
// flat layout m[b * L + level].
struct Marginals {
  std::vector<double> m;
  int L = 0;
};

Marginals marginals_of(const DiscretizedGame& game, const MixedStrategy& s,
                       Player who) {
  Marginals out;
  out.L = game.levels(who);
  out.m.assign(static_cast<std::size_t>(game.instance.n) * out.L, 0.0);
  for (const auto& [idx, prob] : s.entries) {
    std::int64_t rest = idx;
    for (int b = 0; b < game.instance.n; ++b) {
      out.m[static_cast<std::size_t>(b) * out.L + rest % out.L] += prob;
      rest /= out.L;
    }
  }
  return out;
}

// Win-share tables against the opponent's marginals. For A, entry (b, i) is
// P(win b | own level i) = P(q*x_B < i*delta + p_b) + tie_A * P(=). For B it
// is the complementary share at level j: P(x_A + p_b < q*j*delta) +
// (1 - tie_A) * P(=). Exact comparisons on the grid values keep the serial
// and parallel paths bit-identical.
void fill_win_table(const DiscretizedGame& game, const Marginals& opp,
                    Player who, std::vector<double>& table,
                    std::vector<double>& prefix) {
  const int n = game.instance.n;
  const int L = game.levels(who);
  const int Lo = opp.L;
  const double tie_A = tie_share_A(game.ties);
  const double own_tie = who == Player::A ? tie_A : 1.0 - tie_A;
  table.assign(static_cast<std::size_t>(n) * L, 0.0);
  prefix.assign(Lo + 1, 0.0);

  for (int b = 0; b < n; ++b) {
    const double* mo = &opp.m[static_cast<std::size_t>(b) * Lo];
    for (int j = 0; j < Lo; ++j) prefix[j + 1] = prefix[j] + mo[j];
    double* row = &table[static_cast<std::size_t>(b) * L];
    const auto opp_value = [&](int j) {
      return who == Player::A ? game.instance.q * (j * game.delta)
                              : j * game.delta + game.p.p[b];
    };
    int j_lt = 0, j_le = 0;
    for (int i = 0; i < L; ++i) {
      // own effective value at level i; opponent values rise with j so the
      // strict/weak cut indices only move forward
      const double mine = who == Player::A
                              ? i * game.delta + game.p.p[b]
                              : game.instance.q * (i * game.delta);
      while (j_lt < Lo && opp_value(j_lt) < mine) ++j_lt;
      if (j_le < j_lt) j_le = j_lt;
      while (j_le < Lo && opp_value(j_le) <= mine) ++j_le;
      row[i] = prefix[j_lt] + own_tie * (prefix[j_le] - prefix[j_lt]);
    }
  }
}

struct BucketScan {
  std::vector<double> best_u;
  std::vector<std::int64_t> best_idx;
};

// Reduce the pure-strategy cloud to per-cost buckets: every pure strategy
// costs delta * (sum of level digits), so bucket t holds the best utility
// among strategies spending exactly t units. Ties resolve to the smaller
// index so the result is independent of scan order.
void scan_buckets_serial(const std::vector<double>& util, int n, int L,
                         BucketScan& out) {
  const std::int64_t M = ipow(L, n);
  const int T = n * (L - 1);
  out.best_u.assign(T + 1, -1.0);
  out.best_idx.assign(T + 1, -1);
  for (std::int64_t idx = 0; idx < M; ++idx) {
    std::int64_t rest = idx;
    int t = 0;
    double u = 0.0;
    for (int b = 0; b < n; ++b) {
      const int d = static_cast<int>(rest % L);
      rest /= L;
      t += d;
      u += util[static_cast<std::size_t>(b) * L + d];
    }
    if (u > out.best_u[t] || (u == out.best_u[t] && idx < out.best_idx[t])) {
      out.best_u[t] = u;
      out.best_idx[t] = idx;
    }
  }
}

void scan_buckets_parallel(const std::vector<double>& util, int n, int L,
                           BucketScan& out) {
#ifdef _OPENMP
  const std::int64_t M = ipow(L, n);
  const int T = n * (L - 1);
  out.best_u.assign(T + 1, -1.0);
  out.best_idx.assign(T + 1, -1);
#pragma omp parallel
  {
    BucketScan local;
    local.best_u.assign(T + 1, -1.0);
    local.best_idx.assign(T + 1, -1);
#pragma omp for schedule(static)
    for (std::int64_t idx = 0; idx < M; ++idx) {
      std::int64_t rest = idx;
      int t = 0;
      double u = 0.0;
      for (int b = 0; b < n; ++b) {
        const int d = static_cast<int>(rest % L);
        rest /= L;
        t += d;
        u += util[static_cast<std::size_t>(b) * L + d];
      }
      if (u > local.best_u[t] ||
          (u == local.best_u[t] && idx < local.best_idx[t])) {
        local.best_u[t] = u;
        local.best_idx[t] = idx;
      }
    }
#pragma omp critical
    {
      for (int t = 0; t <= T; ++t) {
        if (local.best_idx[t] < 0) continue;
        if (local.best_u[t] > out.best_u[t] ||
            (local.best_u[t] == out.best_u[t] &&
             (out.best_idx[t] < 0 || local.best_idx[t] < out.best_idx[t]))) {
          out.best_u[t] = local.best_u[t];
          out.best_idx[t] = local.best_idx[t];
        }
      }
    }
  }
#else
  scan_buckets_serial(util, n, L, out);
#endif
}

bool resolve_parallel(Exec exec) {
#ifdef _OPENMP
  if (exec == Exec::Serial) return false;
  return true;
#else
  (void)exec;
  return false;
#endif
}

// Upper concave hull of the bucket points evaluated at the budget: the
// optimum of max E[u] s.t. E[cost] <= budget over mixtures, attained by at
// most two pure strategies.
BestResponse evaluate_hull(const DiscretizedGame& game, const BucketScan& scan,
                           double budget) {
  struct Pt {
    double c, u;
    std::int64_t idx;
  };
  std::vector<Pt> hull;
  hull.reserve(scan.best_u.size());
  for (std::size_t t = 0; t < scan.best_u.size(); ++t) {
    if (scan.best_idx[t] < 0) continue;
    Pt pt{game.delta * static_cast<double>(t), scan.best_u[t],
          scan.best_idx[t]};
    while (hull.size() >= 2) {
      const Pt& p1 = hull[hull.size() - 2];
      const Pt& p2 = hull.back();
      // pop p2 when it lies on or below the p1-pt chord
      if ((p2.u - p1.u) * (pt.c - p1.c) <= (pt.u - p1.u) * (p2.c - p1.c))
        hull.pop_back();
      else
        break;
    }
    if (!hull.empty() && hull.back().c == pt.c) {
      if (pt.u <= hull.back().u) continue;
      hull.pop_back();
    }
    hull.push_back(pt);
  }

  std::size_t k = 0;
  while (k + 1 < hull.size() && hull[k + 1].c <= budget) ++k;
  BestResponse br;
  const double theta =
      (k + 1 < hull.size() && hull[k + 1].u > hull[k].u)
          ? (hull[k + 1].c - budget) / (hull[k + 1].c - hull[k].c)
          : 1.0;
  if (theta >= 1.0) {
    br.value = hull[k].u;
    br.strategy.entries = {{static_cast<std::uint32_t>(hull[k].idx), 1.0}};
    br.strategy.expected_cost = hull[k].c;
  } else {
    const Pt& lo = hull[k];
    const Pt& hi = hull[k + 1];
    br.value = theta * lo.u + (1.0 - theta) * hi.u;
    br.strategy.entries = {{static_cast<std::uint32_t>(lo.idx), theta},
                           {static_cast<std::uint32_t>(hi.idx), 1.0 - theta}};
    if (lo.idx > hi.idx)
      std::swap(br.strategy.entries[0], br.strategy.entries[1]);
    br.strategy.expected_cost = theta * lo.c + (1.0 - theta) * hi.c;
  }
  return br;
}

BestResponse best_response_marginals(const DiscretizedGame& game,
                                     const Marginals& opp, Player who,
                                     bool parallel, std::vector<double>& util,
                                     std::vector<double>& prefix,
                                     BucketScan& scan) {
  const int n = game.instance.n;
  const int L = game.levels(who);
  fill_win_table(game, opp, who, util, prefix);
  for (int b = 0; b < n; ++b)
    for (int i = 0; i < L; ++i)
      util[static_cast<std::size_t>(b) * L + i] *= game.instance.w[b];
  if (parallel)
    scan_buckets_parallel(util, n, L, scan);
  else
    scan_buckets_serial(util, n, L, scan);
  return evaluate_hull(game, scan, game.budget(who));
}

double payoff_from_marginals(const DiscretizedGame& game, const Marginals& mA,
                             const Marginals& mB, std::vector<double>& table,
                             std::vector<double>& prefix) {
  fill_win_table(game, mB, Player::A, table, prefix);
  double v = 0.0;
  for (int b = 0; b < game.instance.n; ++b) {
    double acc = 0.0;
    for (int i = 0; i < mA.L; ++i)
      acc += mA.m[static_cast<std::size_t>(b) * mA.L + i] *
             table[static_cast<std::size_t>(b) * mA.L + i];
    v += game.instance.w[b] * acc;
  }
  return v;
}

}  // namespace

DiscretizedGame build_discretized(const GameInstance& inst,
                                  const PreAllocation& p, double delta,
                                  CapPolicy policy, TieRule ties) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(Errc::InvalidStep, "delta = " + std::to_string(delta));
  if (inst.n > 3)
    throw Error(Errc::TooLarge,
                "oracle supports n <= 3, got n = " + std::to_string(inst.n));

  DiscretizedGame game;
  game.instance = inst;
  game.p = p;
  game.delta = delta;
  game.ties = ties;

  bool have_kappa = false;
  if (policy == CapPolicy::Kappa && inst.RA > 0.0) {
    try {
      const GlfEquilibrium eq = solve_glf(inst, p);
      double capA = 0.0, capB = 0.0;
      for (int b = 0; b < inst.n; ++b) {
        capA = std::fmax(capA, inst.q * inst.w[b] * eq.kappa.kappa_B);
        capB = std::fmax(capB,
                         (inst.w[b] * eq.kappa.kappa_A + p.p[b]) / inst.q);
      }
      game.x_max_A = capA + 2.0 * delta;
      game.x_max_B = capB + 2.0 * delta;
      have_kappa = true;
    } catch (const Error&) {
      have_kappa = false;
    }
  }
  if (!have_kappa) {
    const double cap = 2.0 * (inst.P + inst.RA + inst.q * inst.RB);
    game.x_max_A = cap;
    game.x_max_B = cap;
  }
  game.x_max_A = std::fmax(game.x_max_A, delta);
  game.x_max_B = std::fmax(game.x_max_B, delta);

  game.levels_A = static_cast<int>(std::floor(game.x_max_A / delta)) + 1;
  game.levels_B = static_cast<int>(std::floor(game.x_max_B / delta)) + 1;
  game.count_A = ipow(game.levels_A, inst.n);
  game.count_B = ipow(game.levels_B, inst.n);
  if (game.count_A > kMaxPureStrategies || game.count_B > kMaxPureStrategies)
    throw Error(Errc::TooLarge,
                "pure-strategy count " +
                    std::to_string(std::max(game.count_A, game.count_B)) +
                    " exceeds " + std::to_string(kMaxPureStrategies) +
                    "; increase delta");
  return game;
}

BestResponse best_response(const DiscretizedGame& game,
                           const MixedStrategy& opponent, Player who,
                           Exec exec) {
  const Player other = who == Player::A ? Player::B : Player::A;
  const Marginals opp = marginals_of(game, opponent, other);
  std::vector<double> util, prefix;
  BucketScan scan;
  return best_response_marginals(game, opp, who, resolve_parallel(exec), util,
                                 prefix, scan);
}

double expected_payoff_A(const DiscretizedGame& game,
                         const MixedStrategy& sigma_A,
                         const MixedStrategy& sigma_B) {
  const Marginals mA = marginals_of(game, sigma_A, Player::A);
  const Marginals mB = marginals_of(game, sigma_B, Player::B);
  std::vector<double> table, prefix;
  return payoff_from_marginals(game, mA, mB, table, prefix);
}

namespace {

struct Averager {
  std::unordered_map<std::uint32_t, double> weight;
  Marginals marg;
  double total = 0.0;
  const DiscretizedGame* game = nullptr;
  Player who = Player::A;

  void init(const DiscretizedGame& g, Player w) {
    game = &g;
    who = w;
    marg.L = g.levels(w);
    marg.m.assign(static_cast<std::size_t>(g.instance.n) * marg.L, 0.0);
  }

  void add(const MixedStrategy& s, double wt) {
    for (const auto& [idx, prob] : s.entries) {
      weight[idx] += wt * prob;
      std::int64_t rest = idx;
      for (int b = 0; b < game->instance.n; ++b) {
        marg.m[static_cast<std::size_t>(b) * marg.L + rest % marg.L] +=
            wt * prob;
        rest /= marg.L;
      }
    }
    total += wt;
  }

  Marginals normalized() const {
    Marginals out = marg;
    for (double& x : out.m) x /= total;
    return out;
  }

  MixedStrategy extract() const {
    MixedStrategy s;
    s.entries.reserve(weight.size());
    for (const auto& [idx, wt] : weight) s.entries.emplace_back(idx, wt / total);
    std::sort(s.entries.begin(), s.entries.end());
    double cost = 0.0;
    for (const auto& [idx, prob] : s.entries)
      cost += prob * game->cost(idx, who);
    s.expected_cost = cost;
    return s;
  }
};

MixedStrategy random_feasible_pure(const DiscretizedGame& game, Player who,
                                   std::mt19937_64& rng) {
  const int L = game.levels(who);
  std::uniform_int_distribution<int> dist(0, L - 1);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::int64_t idx = 0;
    std::int64_t stride = 1;
    for (int b = 0; b < game.instance.n; ++b) {
      idx += stride * dist(rng);
      stride *= L;
    }
    if (game.cost(idx, who) <= game.budget(who))
      return MixedStrategy{{{static_cast<std::uint32_t>(idx), 1.0}},
                           game.cost(idx, who)};
  }
  return MixedStrategy{{{0u, 1.0}}, 0.0};  // all-zero allocation
}

}  // namespace

SaddleCertificate solve_saddle(const DiscretizedGame& game, double epsilon,
                               std::int64_t max_iters, std::uint64_t seed,
                               Exec exec) {
  if (!(epsilon > 0.0))
    throw Error(Errc::InvalidStep, "epsilon must be positive");
  const bool parallel = resolve_parallel(exec);
  const double W = game.instance.W;

  std::mt19937_64 rng(seed);
  Averager avgA, avgB;
  avgA.init(game, Player::A);
  avgB.init(game, Player::B);
  avgA.add(random_feasible_pure(game, Player::A, rng), 1.0);
  avgB.add(random_feasible_pure(game, Player::B, rng), 1.0);

  std::vector<double> utilA, utilB, prefix, table;
  BucketScan scanA, scanB;

  SaddleCertificate best;
  best.gap = std::numeric_limits<double>::infinity();
  double snapshot_threshold = std::numeric_limits<double>::infinity();

  // best is always a consistent (strategies, value, gap) triple; the
  // geometric threshold bounds how often strategies get copied
  const auto record = [&](double value, double gap, std::int64_t it,
                          bool force) {
    if (!(gap < best.gap)) return;
    if (!force && !(gap < snapshot_threshold)) return;
    best.value = value;
    best.gap = gap;
    best.iterations = it;
    best.sigma_A = avgA.extract();
    best.sigma_B = avgB.extract();
    snapshot_threshold = 0.95 * gap;
  };

  std::int64_t it = 0;
  for (it = 1; it <= max_iters; ++it) {
    const Marginals mA = avgA.normalized();
    const Marginals mB = avgB.normalized();
    const BestResponse brA = best_response_marginals(
        game, mB, Player::A, parallel, utilA, prefix, scanA);
    const BestResponse brB = best_response_marginals(
        game, mA, Player::B, parallel, utilB, prefix, scanB);
    const double gap = brA.value + brB.value - W;
    const double value = payoff_from_marginals(game, mA, mB, table, prefix);
    const bool done = gap <= epsilon;
    record(value, gap, it, done);
    if (done) {
      best.converged = true;
      return best;
    }
    avgA.add(brA.strategy, 1.0);
    avgB.add(brB.strategy, 1.0);
  }

  // out of iterations: also consider the final averages
  {
    const Marginals mA = avgA.normalized();
    const Marginals mB = avgB.normalized();
    const BestResponse brA = best_response_marginals(
        game, mB, Player::A, parallel, utilA, prefix, scanA);
    const BestResponse brB = best_response_marginals(
        game, mA, Player::B, parallel, utilB, prefix, scanB);
    const double gap = brA.value + brB.value - W;
    const double value = payoff_from_marginals(game, mA, mB, table, prefix);
    record(value, gap, max_iters, true);
  }
  best.converged = best.gap <= epsilon;
  return best;
}

}  // namespace lotto
