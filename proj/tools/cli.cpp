#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lotto/analysis.hpp"
#include "lotto/closed_form.hpp"
#include "lotto/glf_solver.hpp"
#include "lotto/json_io.hpp"
#include "lotto/oracle.hpp"
#include "lotto/types.hpp"

namespace lotto::cli {
namespace {

using nlohmann::json;

// All emitted numbers carry 9 significant digits.
double sig9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

struct ScalarArgs {
  double q = 1.0;
  double RB = 0.0;
  double qRB = 0.0;
  CLI::Option* opt_RB = nullptr;
  CLI::Option* opt_qRB = nullptr;

  void add_flags(CLI::App* cmd) {
    auto* oq = cmd->add_option("--q", q, "effectiveness of B's resources")
                   ->check(CLI::PositiveNumber);
    opt_RB = cmd->add_option("--RB", RB, "B real-time budget")
                 ->check(CLI::PositiveNumber);
    opt_qRB =
        cmd->add_option("--qRB", qRB,
                        "effective B budget q*R_B (same as --q 1 --RB x)")
            ->check(CLI::PositiveNumber)
            ->excludes(oq)
            ->excludes(opt_RB);
  }

  // folds --qRB into (q, RB); every payoff depends on them only through
  // the product
  void resolve() {
    if (opt_qRB->count()) {
      q = 1.0;
      RB = qRB;
    } else if (!opt_RB->count()) {
      throw CLI::RequiredError("--RB (or --qRB)");
    }
  }
};

struct InstanceArgs {
  std::vector<double> w;
  double P = 0.0;
  double RA = 0.0;
  ScalarArgs sc;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--w", w, "battlefield values, comma separated")
        ->delimiter(',')
        ->required();
    cmd->add_option("--P", P, "A pre-allocated budget")->required();
    cmd->add_option("--RA", RA, "A real-time budget")->required();
    sc.add_flags(cmd);
  }

  GameInstance build() {
    sc.resolve();
    return make_instance(w, sc.q, P, RA, sc.RB);
  }
};

PreAllocation parse_preallocation(const GameInstance& inst,
                                  const std::string& spec) {
  if (spec == "proportional") return proportional_preallocation(inst);
  std::vector<double> p;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) p.push_back(std::stod(tok));
  return make_preallocation(inst, p);
}

void emit_json(std::ostream& os, json j) {
  j["schema"] = 1;
  os << j.dump(2) << "\n";
}

json payoff_json(const GameInstance& inst) {
  const Payoff pay = payoff_A(inst);
  const Regime regime = classify_regime(inst);
  json j{{"payoff_A", sig9(pay.value_A)},
         {"payoff_B", sig9(pay.value_B)},
         {"regime", regime_name(regime.tag)},
         {"W", sig9(inst.W)}};
  if (regime.tau) j["tau"] = sig9(*regime.tau);
  return j;
}

json equilibrium_json(const GameInstance& inst, const PreAllocation& p,
                      const GlfEquilibrium& eq) {
  json jp = json::array();
  for (double v : p.p) jp.push_back(sig9(v));
  return json{{"p", jp},
              {"kappa_A", sig9(eq.kappa.kappa_A)},
              {"kappa_B", sig9(eq.kappa.kappa_B)},
              {"q_kappa_B", sig9(eq.kappa.q_kappa_B(inst.q))},
              {"B0", eq.partition.b0},
              {"B1", eq.partition.b1},
              {"B2", eq.partition.b2},
              {"payoff_A", sig9(eq.payoff.value_A)},
              {"payoff_B", sig9(eq.payoff.value_B)},
              {"residual_A", sig9(eq.residual_A)},
              {"residual_B", sig9(eq.residual_B)}};
}

int run_impl(const std::vector<std::string>& argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"General Lotto pre-allocation toolkit"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option(
      "--out", out_path,
      "output file; relative paths resolve under $LOTTO_OUTPUT_DIR when set");

  // dispatch is deferred until after parsing so --out can be opened first
  std::function<int(std::ostream&)> action;

  auto* payoff_cmd = app.add_subcommand(
      "payoff", "equilibrium payoff at the optimal pre-allocation");
  auto payoff_args = std::make_shared<InstanceArgs>();
  payoff_args->add_flags(payoff_cmd);
  payoff_cmd->final_callback([&action, payoff_args] {
    action = [payoff_args](std::ostream& os) {
      emit_json(os, payoff_json(payoff_args->build()));
      return 0;
    };
  });

  auto* solve_cmd = app.add_subcommand(
      "solve", "Stage-2 equilibrium for an explicit pre-allocation");
  auto solve_args = std::make_shared<InstanceArgs>();
  auto solve_p = std::make_shared<std::string>("proportional");
  solve_args->add_flags(solve_cmd);
  solve_cmd->add_option("--p", *solve_p,
                        "pre-allocation: comma list or 'proportional'");
  solve_cmd->final_callback([&action, solve_args, solve_p] {
    action = [solve_args, solve_p](std::ostream& os) {
      const GameInstance inst = solve_args->build();
      const PreAllocation p = parse_preallocation(inst, *solve_p);
      emit_json(os, equilibrium_json(inst, p, solve_glf(inst, p)));
      return 0;
    };
  });

  auto* level_cmd = app.add_subcommand(
      "level-curve", "sample the payoff level set R_A(P) of a target level");
  struct LevelOpts {
    ScalarArgs sc;
    double Pi = 0.0, W = 1.0;
    int points = 65;
    std::string format = "csv";
  };
  auto lv = std::make_shared<LevelOpts>();
  lv->sc.add_flags(level_cmd);
  level_cmd->add_option("--Pi", lv->Pi, "target payoff level")->required();
  level_cmd->add_option("--W", lv->W, "total battlefield value")
      ->check(CLI::PositiveNumber);
  level_cmd->add_option("--points", lv->points, "number of uniform samples")
      ->check(CLI::Range(2, 1000000));
  level_cmd->add_option("--format", lv->format)
      ->check(CLI::IsMember({"csv", "json"}));
  level_cmd->final_callback([&action, lv] {
    action = [lv](std::ostream& os) {
      lv->sc.resolve();
      const auto pts = level_curve(lv->Pi, lv->sc.RB, lv->sc.q, lv->W, lv->points);
      if (lv->format == "csv") {
        os << "Pi,P,R_A,branch\n";
        for (const auto& pt : pts)
          os << fmt9(pt.Pi) << "," << fmt9(pt.P) << "," << fmt9(pt.RA) << ","
             << branch_name(pt.branch) << "\n";
      } else {
        json arr = json::array();
        for (const auto& pt : pts)
          arr.push_back(json{{"Pi", sig9(pt.Pi)},
                             {"P", sig9(pt.P)},
                             {"R_A", sig9(pt.RA)},
                             {"branch", branch_name(pt.branch)}});
        emit_json(os, json{{"points", arr}});
      }
      return 0;
    };
  });

  auto* surface_cmd =
      app.add_subcommand("surface", "payoff samples over a (P, R_A) grid");
  struct SurfOpts {
    ScalarArgs sc;
    double W = 1.0, Pmax = -1.0, RAmax = -1.0;
    int Ppoints = 41, RApoints = 41;
  };
  auto sf = std::make_shared<SurfOpts>();
  sf->sc.add_flags(surface_cmd);
  surface_cmd->add_option("--W", sf->W)->check(CLI::PositiveNumber);
  surface_cmd->add_option("--P-max", sf->Pmax, "default 3*q*R_B");
  surface_cmd->add_option("--RA-max", sf->RAmax, "default 3*q*R_B");
  surface_cmd->add_option("--P-points", sf->Ppoints)->check(CLI::Range(2, 10000));
  surface_cmd->add_option("--RA-points", sf->RApoints)
      ->check(CLI::Range(2, 10000));
  surface_cmd->final_callback([&action, sf] {
    action = [sf](std::ostream& os) {
      sf->sc.resolve();
      const double qRB = sf->sc.q * sf->sc.RB;
      const double Pmax = sf->Pmax > 0 ? sf->Pmax : 3.0 * qRB;
      const double RAmax = sf->RAmax > 0 ? sf->RAmax : 3.0 * qRB;
      os << "P,R_A,payoff_A\n";
      for (int i = 0; i < sf->Ppoints; ++i) {
        const double P = Pmax * i / (sf->Ppoints - 1);
        for (int j = 0; j < sf->RApoints; ++j) {
          const double RA = RAmax * j / (sf->RApoints - 1);
          os << fmt9(P) << "," << fmt9(RA) << ","
             << fmt9(payoff_A_value(sf->W, sf->sc.q, P, RA, sf->sc.RB)) << "\n";
        }
      }
      return 0;
    };
  });

  auto* eff_cmd = app.add_subcommand(
      "effectiveness",
      "pre-allocated budget matching a lone real-time budget");
  struct EffOpts {
    ScalarArgs sc;
    double RA = -1.0, RAmin = -1.0, RAmax = -1.0;
    int points = 33;
  };
  auto ef = std::make_shared<EffOpts>();
  ef->sc.add_flags(eff_cmd);
  eff_cmd->add_option("--RA", ef->RA, "single real-time budget");
  eff_cmd->add_option("--RA-min", ef->RAmin);
  eff_cmd->add_option("--RA-max", ef->RAmax);
  eff_cmd->add_option("--points", ef->points)->check(CLI::Range(2, 100000));
  eff_cmd->final_callback([&action, ef] {
    action = [ef](std::ostream& os) {
      ef->sc.resolve();
      std::vector<double> ras;
      if (ef->RA > 0.0) {
        ras.push_back(ef->RA);
      } else if (ef->RAmin > 0.0 && ef->RAmax >= ef->RAmin) {
        for (int i = 0; i < ef->points; ++i)
          ras.push_back(ef->RAmin +
                        (ef->RAmax - ef->RAmin) * i / (ef->points - 1));
      } else {
        throw Error(Errc::NegativeBudget,
                    "effectiveness needs --RA or --RA-min/--RA-max");
      }
      os << "R_A,P_bar,ratio\n";
      for (double ra : ras) {
        const double pbar = effectiveness_equivalent_P(ra, ef->sc.RB, ef->sc.q);
        os << fmt9(ra) << "," << fmt9(pbar) << "," << fmt9(pbar / ra) << "\n";
      }
      return 0;
    };
  });

  auto* invest_cmd = app.add_subcommand(
      "invest", "optimal split of a monetary budget under linear cost");
  struct InvOpts {
    ScalarArgs sc;
    double XA = 0.0, c = 0.0, W = 1.0;
    int points = 101;
    std::string format = "json";
  };
  auto iv = std::make_shared<InvOpts>();
  iv->sc.add_flags(invest_cmd);
  invest_cmd->add_option("--XA", iv->XA, "monetary budget")->required();
  invest_cmd
      ->add_option("--c", iv->c, "per-unit cost of pre-allocated resources")
      ->required();
  invest_cmd->add_option("--W", iv->W)->check(CLI::PositiveNumber);
  invest_cmd->add_option("--format", iv->format)
      ->check(CLI::IsMember({"json", "csv"}));
  invest_cmd->add_option("--points", iv->points, "csv samples per curve")
      ->check(CLI::Range(2, 1000000));
  invest_cmd->final_callback([&action, iv] {
    action = [iv](std::ostream& os) {
      iv->sc.resolve();
      const Investment inv =
          optimal_investment(iv->XA, iv->c, iv->sc.RB, iv->sc.q, iv->W);
      if (iv->format == "json") {
        json j{{"P_star", sig9(inv.P_star)},
               {"RA_star", sig9(inv.RA_star)},
               {"payoff", sig9(inv.payoff)},
               {"t", sig9(inv.t)}};
        if (inv.interval_upper)
          j["interval"] = json::array({0.0, sig9(*inv.interval_upper)});
        emit_json(os, j);
      } else {
        // plot data: the budget segment plus the level curve through the
        // optimum (tangent to the segment when c < t)
        os << "kind,P,R_A\n";
        const double Pmax = iv->XA / iv->c;
        for (int i = 0; i < iv->points; ++i) {
          const double P = Pmax * i / (iv->points - 1);
          os << "segment," << fmt9(P) << "," << fmt9(iv->XA - iv->c * P)
             << "\n";
        }
        for (const auto& pt :
             level_curve(inv.payoff, iv->sc.RB, iv->sc.q, iv->W, iv->points))
          os << "level," << fmt9(pt.P) << "," << fmt9(pt.RA) << "\n";
      }
      return 0;
    };
  });

  auto* verify_cmd = app.add_subcommand(
      "verify", "certify the closed form against the discretized game");
  struct VerOpts {
    InstanceArgs inst;
    std::string p = "proportional";
    double delta = 0.05, epsilon = -1.0, tol = -1.0;
    std::int64_t iters = 400000;
    std::uint64_t seed = 1;
    std::string tie = "coinflip", cap = "kappa";
    bool serial = false;
  };
  auto vo = std::make_shared<VerOpts>();
  vo->inst.add_flags(verify_cmd);
  verify_cmd->add_option("--p", vo->p);
  verify_cmd->add_option("--delta", vo->delta, "grid step")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--epsilon", vo->epsilon,
                         "certificate gap target, default 0.005*W");
  verify_cmd->add_option("--max-iters", vo->iters)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", vo->seed);
  verify_cmd->add_option("--tol", vo->tol,
                         "deviation tolerance, default 0.02*W");
  verify_cmd->add_option("--tie", vo->tie)
      ->check(CLI::IsMember({"coinflip", "bwins", "awins"}));
  verify_cmd->add_option("--cap", vo->cap)
      ->check(CLI::IsMember({"kappa", "budget"}));
  verify_cmd->add_flag("--serial", vo->serial, "disable the parallel kernel");
  verify_cmd->final_callback([&action, vo] {
    action = [vo](std::ostream& os) {
      const GameInstance inst = vo->inst.build();
      const PreAllocation p = parse_preallocation(inst, vo->p);
      double reference;
      if (inst.RA > 0.0) {
        reference = solve_glf(inst, p).payoff.value_A;
      } else {
        if (vo->p != "proportional")
          throw Error(Errc::ZeroBudget,
                      "verify with R_A = 0 requires --p proportional");
        reference = payoff_A(inst).value_A;
      }
      const double epsilon = vo->epsilon > 0 ? vo->epsilon : 0.005 * inst.W;
      const double tol = vo->tol > 0 ? vo->tol : 0.02 * inst.W;
      const TieRule tie = vo->tie == "coinflip" ? TieRule::CoinFlip
                          : vo->tie == "bwins"  ? TieRule::BWins
                                                : TieRule::AWins;
      const CapPolicy cap =
          vo->cap == "kappa" ? CapPolicy::Kappa : CapPolicy::Budget;
      const DiscretizedGame game =
          build_discretized(inst, p, vo->delta, cap, tie);
      const SaddleCertificate cert =
          solve_saddle(game, epsilon, vo->iters, vo->seed,
                       vo->serial ? Exec::Serial : Exec::Auto);
      const double deviation = std::abs(cert.value - reference);
      emit_json(os, json{{"closed_form", sig9(reference)},
                         {"oracle_value", sig9(cert.value)},
                         {"deviation", sig9(deviation)},
                         {"gap", sig9(cert.gap)},
                         {"converged", cert.converged},
                         {"iterations", cert.iterations},
                         {"delta", sig9(vo->delta)},
                         {"epsilon", sig9(epsilon)},
                         {"tolerance", sig9(tol)},
                         {"seed", vo->seed},
                         {"tie", vo->tie},
                         {"levels_A", game.levels_A},
                         {"levels_B", game.levels_B},
                         {"x_max_A", sig9(game.x_max_A)},
                         {"x_max_B", sig9(game.x_max_B)}});
      return deviation > tol ? 2 : 0;
    };
  });

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);  // help text, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;  // all usage errors exit 1
  }

  if (!action) return 1;
  if (!out_path.empty()) {
    std::filesystem::path target(out_path);
    if (target.is_relative()) {
      if (const char* dir = std::getenv("LOTTO_OUTPUT_DIR"))
        target = std::filesystem::path(dir) / target;
    }
    std::ofstream file(target);
    if (!file) {
      err << "error: cannot open output file: " << target.string() << "\n";
      return 1;
    }
    return action(file);
  }
  return action(out);
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err) {
  try {
    return run_impl(argv, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lotto::cli
