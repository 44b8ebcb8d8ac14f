// Command-line driver for the convergence, robustness, cost and Darcy studies.

#include "hdgbiot/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace hdgbiot;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string out = "results";
  std::string precond = "p2";
  std::string ublock = "ubar";
  double tol = 1e-10;
  int maxit = 2000;
  int threads = 1;
  bool verbose = false;
};

struct Run {
  json manifest;
  fs::path dir;

  std::ofstream open(const std::string& name) {
    fs::create_directories(dir);
    manifest["outputs"].push_back(name);
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  }
};

SolveOptions solve_options(const Common& c) {
  SolveOptions o;
  o.precond = parse_precond(c.precond);
  if (c.ublock == "ubar")
    o.ublock = DisplacementBlock::Ubar;
  else if (c.ublock == "condensed")
    o.ublock = DisplacementBlock::Condensed;
  else
    throw InvalidArgument("--ublock must be ubar or condensed");
  o.tol = c.tol;
  o.maxit = c.maxit;
  return o;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("-o,--out", c.out, "output directory")->capture_default_str();
  app->add_option("--precond", c.precond, "p1, p1-schur, p2 or none")
      ->check(CLI::IsMember({"p1", "p1-schur", "p2", "none"}))
      ->capture_default_str();
  app->add_option("--ublock", c.ublock, "displacement block of the preconditioner: ubar or condensed")
      ->check(CLI::IsMember({"ubar", "condensed"}))
      ->capture_default_str();
  app->add_option("--tol", c.tol, "relative MinRes tolerance")->capture_default_str();
  app->add_option("--maxit", c.maxit, "MinRes iteration limit")->capture_default_str();
  app->add_option("--threads", c.threads, "worker threads for independent cases")->capture_default_str();
  app->add_flag("-v,--verbose", c.verbose, "write residual histories");
}

json params_json(const ScaledParams& p) {
  return {{"lambda", p.lambda}, {"R", p.R}, {"S", p.S}, {"eta", p.eta}, {"eta_p", p.eta_p}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HDG / hybrid mixed three-field Biot experiments"};
  app.require_subcommand(1);
  Common common;

  // convergence
  auto* conv = app.add_subcommand("convergence", "manufactured solution error table");
  std::vector<int> conv_l{1, 2, 3};
  int levels = 5, base_n = 2;
  ScaledParams conv_p;
  conv_p.S = 2;
  bool conv_direct = false;
  conv->add_option("-l,--order", conv_l, "orders l")->capture_default_str();
  conv->add_option("--levels", levels, "uniform refinements of the base mesh")->capture_default_str();
  conv->add_option("--base-n", base_n, "base mesh: n x n squares, 2n^2 cells")->capture_default_str();
  conv->add_option("--lambda", conv_p.lambda)->capture_default_str();
  conv->add_option("--R", conv_p.R)->capture_default_str();
  conv->add_option("--S", conv_p.S)->capture_default_str();
  conv->add_flag("--direct", conv_direct, "sparse direct solve instead of MinRes");
  add_common(conv, common);

  // robustness
  auto* rob = app.add_subcommand("robustness", "MinRes iteration counts over parameter sweeps");
  std::vector<int> rob_l{1, 2, 3};
  std::vector<std::string> sweeps{"Rinv", "lambda", "S"};
  std::vector<double> rinv_values, lambda_values, s_values;
  int rob_n = 16;
  rob->add_option("-l,--order", rob_l, "orders l")->capture_default_str();
  rob->add_option("--sweeps", sweeps, "Rinv, lambda, S")->capture_default_str();
  rob->add_option("--rinv-values", rinv_values, "override the R^-1 sweep");
  rob->add_option("--lambda-values", lambda_values, "override the lambda sweep");
  rob->add_option("--s-values", s_values, "override the S sweep");
  rob->add_option("-n,--mesh-n", rob_n, "mesh: n x n squares (16 gives 512 cells)")->capture_default_str();
  add_common(rob, common);

  // cost
  auto* cel = app.add_subcommand("cost-elasticity", "dof / cdof / nze of DG and HDG elasticity");
  auto* cda = app.add_subcommand("cost-darcy", "dof / cdof / nze of mixed and hybrid mixed Darcy");
  std::vector<int> cost_l{1, 2, 3, 4}, cost_k{0, 1, 2, 3};
  int cost_n = 16;
  cel->add_option("-l,--order", cost_l, "orders l")->capture_default_str();
  cel->add_option("-n,--mesh-n", cost_n)->capture_default_str();
  cda->add_option("-k,--order", cost_k, "RT orders k")->capture_default_str();
  cda->add_option("-n,--mesh-n", cost_n)->capture_default_str();
  add_common(cel, common);
  add_common(cda, common);

  // darcy
  auto* dar = app.add_subcommand("darcy", "mixed vs hybrid mixed Darcy agreement");
  std::vector<int> dar_k{0, 1, 2, 3};
  std::vector<int> dar_n{2, 4, 8};
  dar->add_option("-k,--order", dar_k)->capture_default_str();
  dar->add_option("-n,--mesh-n", dar_n)->capture_default_str();
  add_common(dar, common);

  // time stepping
  auto* ts = app.add_subcommand("timestep-demo", "implicit Euler consolidation from rest");
  PhysicalParams phys;
  phys.S0 = 1;
  phys.tau = 0.1;
  int ts_l = 2, ts_n = 8, steps = 10;
  ts->add_option("-l,--order", ts_l)->capture_default_str();
  ts->add_option("-n,--mesh-n", ts_n)->capture_default_str();
  ts->add_option("--steps", steps)->capture_default_str();
  ts->add_option("--mu", phys.mu)->capture_default_str();
  ts->add_option("--lambda", phys.lambda)->capture_default_str();
  ts->add_option("--alpha", phys.alpha)->capture_default_str();
  ts->add_option("--S0", phys.S0)->capture_default_str();
  ts->add_option("--K", phys.K)->capture_default_str();
  ts->add_option("--tau", phys.tau)->capture_default_str();
  add_common(ts, common);

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  Run run;
  run.dir = common.out;
  auto* sub = app.get_subcommands().front();
  run.manifest["experiment"] = sub->get_name();
  run.manifest["config"] = json::object();
  run.manifest["versions"] = {{"hdgbiot", "0.1.0"},
                              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                            std::to_string(EIGEN_MINOR_VERSION)},
                              {"compiler", __VERSION__}};
  json& cfg = run.manifest["config"];
  cfg["precond"] = common.precond;
  cfg["ublock"] = common.ublock;
  cfg["tol"] = common.tol;
  cfg["maxit"] = common.maxit;
  cfg["threads"] = common.threads;

  try {
    const SolveOptions opt = solve_options(common);
    if (*conv) {
      cfg["orders"] = conv_l;
      cfg["levels"] = levels;
      cfg["base_n"] = base_n;
      cfg["params"] = params_json(conv_p);
      cfg["direct"] = conv_direct;
      SolveOptions o = opt;
      o.direct = conv_direct;
      const auto meshes = mesh_sequence(base_n, levels);
      std::vector<ConvergenceRow> all;
      for (int l : conv_l) {
        const auto rows = run_convergence(l, meshes, conv_p, o);
        all.insert(all.end(), rows.begin(), rows.end());
        if (!rows.empty())
          std::cout << "l=" << l << " finest eoc: grad_u " << rows.back().eoc_grad_u << ", u " << rows.back().eoc_u
                    << ", p " << rows.back().eoc_p << ", flux " << rows.back().eoc_flux << '\n';
      }
      auto f = run.open("convergence.csv");
      write_convergence_csv(f, all);
    } else if (*rob) {
      cfg["orders"] = rob_l;
      cfg["sweeps"] = sweeps;
      cfg["mesh_n"] = rob_n;
      const auto mesh = std::make_shared<const Mesh>(unit_square_mesh(rob_n));
      std::vector<RobustnessRow> all;
      for (const auto& name : sweeps) {
        const Sweep sw = parse_sweep(name);
        std::vector<double> values = default_sweep(sw);
        if (sw == Sweep::Rinv && !rinv_values.empty()) values = rinv_values;
        if (sw == Sweep::Lambda && !lambda_values.empty()) values = lambda_values;
        if (sw == Sweep::S && !s_values.empty()) values = s_values;
        cfg["values"][name] = values;
        for (int l : rob_l) {
          const auto rows = run_robustness(mesh, l, sw, values, opt, ScaledParams{}, common.threads);
          std::cout << name << " l=" << l << ':';
          for (const auto& r : rows) std::cout << ' ' << r.iterations << (r.converged ? "" : "*");
          std::cout << '\n';
          all.insert(all.end(), rows.begin(), rows.end());
        }
      }
      auto f = run.open("robustness.csv");
      write_robustness_csv(f, all);
      if (common.verbose) {
        for (const auto& r : all) {
          std::ostringstream name;
          name << "history_" << to_string(r.sweep) << "_l" << r.l << "_" << r.value << ".csv";
          auto h = run.open(name.str());
          write_history(h, r.report);
        }
      }
    } else if (*cel || *cda) {
      const auto mesh = std::make_shared<const Mesh>(unit_square_mesh(cost_n));
      cfg["mesh_n"] = cost_n;
      std::vector<CostRow> all;
      if (*cel) {
        cfg["orders"] = cost_l;
        for (int l : cost_l) {
          const auto rows = cost_elasticity(mesh, l);
          all.insert(all.end(), rows.begin(), rows.end());
        }
        const auto lx = nze_crossover(all);
        run.manifest["nze_crossover_l"] = lx ? json(*lx) : json(nullptr);
        std::cout << "HDG nze below DG nze from l = " << (lx ? std::to_string(*lx) : "none (in range)") << '\n';
      } else {
        cfg["orders"] = cost_k;
        for (int k : cost_k) {
          const auto rows = cost_darcy(mesh, k);
          all.insert(all.end(), rows.begin(), rows.end());
        }
      }
      auto f = run.open(*cel ? "cost_elasticity.csv" : "cost_darcy.csv");
      write_cost_csv(f, all);
      write_cost_csv(std::cout, all);
    } else if (*dar) {
      cfg["orders"] = dar_k;
      cfg["mesh_n"] = dar_n;
      std::vector<DarcyRow> all;
      for (int n : dar_n)
        for (int k : dar_k) all.push_back(run_darcy(std::make_shared<const Mesh>(unit_square_mesh(n)), k));
      auto f = run.open("darcy.csv");
      write_darcy_csv(f, all);
      write_darcy_csv(std::cout, all);
    } else if (*ts) {
      cfg["order"] = ts_l;
      cfg["mesh_n"] = ts_n;
      cfg["steps"] = steps;
      cfg["physical"] = {{"mu", phys.mu},   {"lambda", phys.lambda}, {"alpha", phys.alpha},
                         {"S0", phys.S0},   {"K", phys.K},           {"tau", phys.tau}};
      cfg["params"] = params_json(scale_params(phys));
      const auto rows =
          run_timestep_demo(std::make_shared<const Mesh>(unit_square_mesh(ts_n)), ts_l, phys, steps, opt);
      auto f = run.open("timestep.csv");
      write_timestep_csv(f, rows);
      write_timestep_csv(std::cout, rows);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  run.manifest["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(run.dir);
  std::ofstream(run.dir / "manifest.json") << run.manifest.dump(2) << '\n';
  return 0;
}
