// fracrenew command-line front end: reproducible experiments on fractional
// (Mittag-Leffler) renewal processes, emitted as plot-ready CSV/JSON tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "table_io.hpp"

#include "fracrenew/ctrw.hpp"
#include "fracrenew/fracalc.hpp"
#include "fracrenew/mlnum.hpp"
#include "fracrenew/montecarlo.hpp"
#include "fracrenew/quadrature.hpp"
#include "fracrenew/renewal.hpp"
#include "fracrenew/stats.hpp"
#include "fracrenew/thinning.hpp"

using namespace fracrenew;
using cli_io::Table;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunContext {
  std::string subcommand;
  json params = json::object();
  std::uint64_t master_seed = 0;
  std::string format = "csv";
  std::string out_path;  // execution detail: not part of the embedded config
};

json run_config(const RunContext& ctx) {
  return {{"subcommand", ctx.subcommand},
          {"params", ctx.params},
          {"master_seed", ctx.master_seed},
          {"format", ctx.format}};
}

json meta_for(const RunContext& ctx) {
  return {{"config", run_config(ctx)},
          {"version", kVersion},
          {"master_seed", ctx.master_seed}};
}

// read with write-back so the embedded config always carries effective values
double getd(json& p, const char* key, double dflt) {
  if (!p.contains(key)) p[key] = dflt;
  return p[key].get<double>();
}
std::int64_t geti(json& p, const char* key, std::int64_t dflt) {
  if (!p.contains(key)) p[key] = dflt;
  return p[key].get<std::int64_t>();
}
std::string gets(json& p, const char* key, const std::string& dflt) {
  if (!p.contains(key)) p[key] = dflt;
  return p[key].get<std::string>();
}
bool getb(json& p, const char* key, bool dflt) {
  if (!p.contains(key)) p[key] = dflt;
  return p[key].get<bool>();
}

renewal::WaitingTimeModel model_from_params(json& p, bool allow_pareto = true) {
  const std::string model = gets(p, "model", "ml");
  if (model == "exp") {
    return renewal::exponential(getd(p, "lambda", 1.0));
  }
  if (model == "ml") {
    return renewal::mittag_leffler(getd(p, "beta", 0.5), getd(p, "tau", 1.0));
  }
  if (model == "pareto" && allow_pareto) {
    return renewal::pareto_tail(getd(p, "beta", 0.5), getd(p, "c", 1.0));
  }
  throw DomainError("unknown waiting-time model: " + model);
}

ctrw::JumpModel jump_from_params(json& p) {
  const std::string jump = gets(p, "jump", "twopoint");
  if (jump == "twopoint") return ctrw::two_point_jump();
  if (jump == "gauss") return ctrw::gaussian_jump(getd(p, "sigma", 1.0));
  throw DomainError("unknown jump model: " + jump);
}

const char* method_name(ml::Method m) {
  switch (m) {
    case ml::Method::series: return "series";
    case ml::Method::asymptotic: return "asymptotic";
    default: return "laplace_inversion";
  }
}

// ---------------------------------------------------------------- ml-eval --

int cmd_ml_eval(RunContext& ctx) {
  json& p = ctx.params;
  const ml::Order order(getd(p, "beta", 0.5));
  const std::string mode = gets(p, "mode", "E");
  const int k = static_cast<int>(geti(p, "k", 0));
  const double tol = getd(p, "tol", 1e-14);

  std::vector<double> inputs;
  if (p.contains("z")) inputs = p["z"].get<std::vector<double>>();
  if (p.contains("t")) {
    if (!inputs.empty()) throw DomainError("give either --z or --t, not both");
    inputs = p["t"].get<std::vector<double>>();
  }
  if (inputs.empty()) throw DomainError("no evaluation points: use --z or --t");
  const bool time_input = p.contains("t");
  if ((mode == "psi" || mode == "phi") && !time_input) {
    throw DomainError("modes psi/phi take --t values");
  }

  Table t;
  t.columns = {"input", "value", "method_used", "est_abs_error"};
  for (double in : inputs) {
    if (mode == "E") {
      const auto r = ml::ml_eval(order, in);
      t.add_row({in, r.value, method_name(r.method_used), r.est_abs_error});
    } else if (mode == "series") {
      const auto r = ml::ml_series(order, in, tol);
      t.add_row({in, r.value, method_name(r.method_used), r.est_abs_error});
    } else if (mode == "psi") {
      const auto r = ml::ml_eval(order, -std::pow(in, order.beta()));
      t.add_row({in, r.value, method_name(r.method_used), r.est_abs_error});
    } else if (mode == "phi") {
      t.add_row({in, ml::ml_pdf(order, in), "dispatch", json()});
    } else if (mode == "deriv") {
      t.add_row({in, ml::ml_deriv(order, k, in), "dispatch", json()});
    } else {
      throw DomainError("unknown mode: " + mode);
    }
  }
  return cli_io::write_table(ctx.out_path, ctx.format, meta_for(ctx), t);
}

// -------------------------------------------------------------------- pmf --

int cmd_pmf(RunContext& ctx) {
  json& p = ctx.params;
  const auto model = model_from_params(p);
  const double t = getd(p, "t", 1.0);
  const int k_max = static_cast<int>(geti(p, "kmax", 60));
  const auto pmf = renewal::counting_pmf(model, t, k_max);

  Table tab;
  tab.columns = {"k", "prob", "tail_bound"};
  // zero elapsed time means one certain row: k = 0 with probability 1
  const std::size_t rows = t == 0.0 ? 1 : pmf.probs.size();
  for (std::size_t k = 0; k < rows; ++k) {
    tab.add_row({k, pmf.probs[k], pmf.tail_bound});
  }
  return cli_io::write_table(ctx.out_path, ctx.format, meta_for(ctx), tab);
}

// --------------------------------------------------------------- simulate --

int cmd_simulate(RunContext& ctx) {
  json& p = ctx.params;
  const auto model = model_from_params(p);
  const double t = getd(p, "t", 1.0);
  const std::int64_t n_paths = geti(p, "npaths", 100000);
  if (n_paths < 1) throw DomainError("simulate: npaths must be >= 1");
  const double horizon = getd(p, "horizon", t);
  if (horizon < t) throw DomainError("simulate: horizon must be >= t");

  const mc::SeedStream seed{ctx.master_seed, 0};
  const auto emp = mc::empirical_counting_pmf(
      model, t, static_cast<std::size_t>(n_paths), seed);
  const int k_top = static_cast<int>(emp.probs.size()) - 1;
  const auto analytic = renewal::counting_pmf(model, t, k_top);

  Table tab;
  tab.columns = {"k", "empirical", "analytic", "abs_diff", "four_sigma"};
  double max_ratio = 0.0;
  for (int k = 0; k <= k_top; ++k) {
    const double a = analytic.probs[k];
    const double e = emp.probs[k];
    const double sigma =
        std::sqrt(std::max(a * (1.0 - a), 1e-300) / double(n_paths));
    tab.add_row({k, e, a, std::fabs(e - a), 4.0 * sigma});
    max_ratio = std::max(max_ratio, std::fabs(e - a) / (4.0 * sigma));
  }

  // KS of raw waiting-time draws against the survival law
  auto draws = mc::sample_waiting_times(
      model, static_cast<std::size_t>(n_paths),
      seed.shifted(UINT64_C(1) << 40));
  std::sort(draws.begin(), draws.end());
  const double ks = stats::ks_statistic_sorted(
      draws, [&](double x) { return 1.0 - renewal::survival(model, x); },
      mc::Exec::openmp);

  json meta = meta_for(ctx);
  meta["ks_waiting_times"] = ks;
  meta["ks_critical_1pct"] = stats::ks_critical_1pct(draws.size());
  meta["max_diff_over_four_sigma"] = max_ratio;
  return cli_io::write_table(ctx.out_path, ctx.format, meta, tab);
}

// ------------------------------------------------------------------- thin --

int cmd_thin(RunContext& ctx) {
  json& p = ctx.params;
  const std::string base_name = gets(p, "base", "pareto");
  const double beta = getd(p, "beta", 0.5);
  renewal::WaitingTimeModel base = renewal::exponential(1.0);
  double a_default = 1.0;
  if (base_name == "pareto") {
    const double c = getd(p, "c", 1.0);
    base = renewal::pareto_tail(beta, c);
    a_default = std::pow(c, beta) * std::tgamma(1.0 - beta);
  } else if (base_name == "exp") {
    const double lambda = getd(p, "lambda", 1.0);
    base = renewal::exponential(lambda);
    a_default = 1.0 / lambda;
  } else if (base_name == "ml") {
    base = renewal::mittag_leffler(beta, getd(p, "tau", 1.0));
    a_default = 1.0;
  } else {
    throw DomainError("unknown base model: " + base_name);
  }
  const double a_const = getd(p, "a", a_default);

  std::vector<double> deltas;
  if (p.contains("deltas")) {
    deltas = p["deltas"].get<std::vector<double>>();
  } else {
    const std::int64_t n_levels = geti(p, "levels", 4);
    if (n_levels < 1) throw DomainError("thin: empty schedule");
    for (std::int64_t i = 0; i < n_levels; ++i) {
      deltas.push_back(std::pow(10.0, -static_cast<double>(i + 1)));
    }
  }
  const thinning::ThinningSchedule sched(ml::Order(beta), a_const, deltas);
  const std::int64_t n_gaps = geti(p, "ngaps", 100000);
  if (n_gaps < 10) throw DomainError("thin: ngaps too small");

  const auto levels = thinning::thin_cascade_ks(
      base, sched, static_cast<std::size_t>(n_gaps),
      {ctx.master_seed, 0});

  Table tab;
  tab.columns = {"level", "delta", "eps", "ks_to_ml", "n_gaps"};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    tab.add_row({i + 1, levels[i].delta, levels[i].eps, levels[i].ks_to_ml,
                 levels[i].n_gaps});
  }
  json meta = meta_for(ctx);
  meta["a_const"] = a_const;
  return cli_io::write_table(ctx.out_path, ctx.format, meta, tab);
}

// ------------------------------------------------------------------- ctrw --

int cmd_ctrw(RunContext& ctx) {
  json& p = ctx.params;
  const std::string wait_name = gets(p, "wait", "ml");
  renewal::WaitingTimeModel wait =
      wait_name == "exp"
          ? renewal::exponential(getd(p, "lambda", 1.0))
          : renewal::mittag_leffler(getd(p, "beta", 0.5), getd(p, "tau", 1.0));
  if (wait_name != "exp" && wait_name != "ml") {
    throw DomainError("unknown wait model: " + wait_name);
  }
  const auto jump = jump_from_params(p);
  const bool lattice = std::holds_alternative<ctrw::TwoPointJump>(jump);
  const double t = getd(p, "t", 1.0);
  const int k_max = static_cast<int>(geti(p, "kmax", lattice ? 40 : 60));

  const double xmin = getd(p, "xmin", lattice ? -40.0 : -12.0);
  const double dx = getd(p, "dx", lattice ? 1.0 : 0.05);
  const double xmax = getd(p, "xmax", lattice ? 40.0 : 12.0);
  const int n = static_cast<int>(std::llround((xmax - xmin) / dx)) + 1;
  const ctrw::GridSpec grid{xmin, dx, n};

  const auto soj = ctrw::sojourn_series(wait, jump, t, grid, k_max);
  const double mass = soj.atom_at_origin + soj.grid_mass();

  json meta = meta_for(ctx);
  meta["atom_at_origin"] = soj.atom_at_origin;
  meta["truncation_bound"] = soj.truncation_bound;
  meta["total_mass"] = mass;

  // optional Monte Carlo comparison column
  std::vector<double> empirical(static_cast<std::size_t>(n), 0.0);
  const std::int64_t n_walkers = geti(p, "simulate", 0);
  if (n_walkers > 0) {
    auto pos = ctrw::simulate_ctrw_positions(
        wait, jump, t, static_cast<std::size_t>(n_walkers),
        {ctx.master_seed, 0});
    double at_origin = 0.0;
    for (double x : pos) {
      if (x == 0.0) at_origin += 1.0;
      const int idx = static_cast<int>(std::llround((x - xmin) / dx));
      if (idx >= 0 && idx < n && std::fabs(xmin + idx * dx - x) < 0.5 * dx + 1e-12) {
        empirical[idx] += 1.0;
      }
    }
    // histogram density on the grid; at the origin the atom is excluded so the
    // column stays comparable with the continuous/lattice part
    const int origin = static_cast<int>(std::llround((0.0 - xmin) / dx));
    if (origin >= 0 && origin < n) empirical[origin] -= at_origin;
    for (auto& v : empirical) v /= (double(n_walkers) * dx);
    meta["empirical_atom"] = at_origin / double(n_walkers);

    std::sort(pos.begin(), pos.end());
    const ctrw::SojournCdf cdf(wait, jump, t, k_max);
    meta["sup_cdf_distance"] =
        stats::cdf_sup_distance(pos, [&](double x) { return cdf(x); });
  }

  if (p.contains("x")) {
    const double x_query = p["x"].get<double>();
    const int idx = static_cast<int>(std::llround((x_query - xmin) / dx));
    double v = (idx >= 0 && idx < n) ? soj.density[idx] : 0.0;
    if (x_query == 0.0) v += soj.atom_at_origin;  // point mass included
    meta["value_at_x"] = v;
  }

  int exit_code = 0;
  const auto run_check = [&](const char* name, double residual, double tol) {
    meta[std::string("residual_") + name] = residual;
    meta[std::string("threshold_") + name] = tol;
    meta[std::string("status_") + name] = residual < tol ? "PASS" : "FAIL";
    if (!(residual < tol)) exit_code = 1;
  };

  if (getb(p, "check-mw", false)) {
    const double kappa = getd(p, "kappa", 1.0);
    const double s = getd(p, "s", 1.0);
    run_check("mw", ctrw::montroll_weiss_check(wait, jump, kappa, s),
              getd(p, "check-tol-mw", 1e-4));
  }
  if (getb(p, "check-kf", false)) {
    const double dt = getd(p, "dt", 1e-3);
    run_check("kf",
              ctrw::kolmogorov_feller_residual(wait, jump, grid,
                                               getd(p, "t-lo", 0.5), t, dt,
                                               k_max),
              getd(p, "check-tol-kf", 1e-4));
  }
  if (getb(p, "check-fractional", false)) {
    const double dt = getd(p, "dt", 1e-3);
    const auto rep = ctrw::fractional_master_residual(
        wait, jump, grid, t, dt, getd(p, "t-lo", 0.5), k_max);
    meta["expected_order"] = rep.expected_order;
    run_check("fractional", rep.max_residual,
              getd(p, "check-tol-fractional", 5e-3));
  }

  Table tab;
  if (n_walkers > 0) {
    tab.columns = {"x", "density", "empirical", "mass"};
    for (int i = 0; i < n; ++i) {
      tab.add_row({xmin + i * dx, soj.density[i], empirical[i], mass});
    }
  } else {
    tab.columns = {"x", "density", "mass"};
    for (int i = 0; i < n; ++i) {
      tab.add_row({xmin + i * dx, soj.density[i], mass});
    }
  }
  const int rc = cli_io::write_table(ctx.out_path, ctx.format, meta, tab);
  return rc != 0 ? rc : exit_code;
}

// ----------------------------------------------------------------- verify --

int cmd_verify(RunContext& ctx) {
  json& p = ctx.params;
  const std::string suite = gets(p, "suite", "");
  Table tab;
  bool all_pass = true;
  const auto row = [&](const std::string& name, double value,
                       double threshold, bool less_than = true) {
    const bool pass = less_than ? value < threshold : value >= threshold;
    all_pass = all_pass && pass;
    tab.add_row({name, value, threshold, pass ? "PASS" : "FAIL"});
  };
  tab.columns = {"check", "value", "threshold", "status"};

  if (suite == "relaxation") {
    const double beta = getd(p, "beta", 0.5);
    const ml::Order order(beta);
    const double h = getd(p, "h", 1e-3);
    const double T = getd(p, "T", 5.0);
    const double window = getd(p, "window", 0.1);
    const double tol = beta == 1.0 ? 1e-5 : 5e-3;
    const double fine = fracalc::relaxation_residual(order, h, T, window);
    row("relaxation_residual", fine, tol);
    if (beta < 1.0) {
      const double coarse =
          fracalc::relaxation_residual(order, 2.0 * h, T, window);
      const double expected = std::pow(2.0, 2.0 - beta);
      tab.add_row({"order_ratio", coarse / fine, expected,
                   std::fabs(coarse / fine - expected) < 0.35 * expected
                       ? "PASS"
                       : "FAIL"});
      if (std::fabs(coarse / fine - expected) >= 0.35 * expected) {
        all_pass = false;
      }
    }
  } else if (suite == "monotone") {
    const double beta = getd(p, "beta", 0.75);
    const ml::Order order(beta);
    for (int fn = 0; fn < 2; ++fn) {
      std::vector<double> t(50), v(50);
      t[0] = 0.05;
      const double ratio = std::pow(1000.0, 1.0 / 49.0);
      for (int i = 1; i < 50; ++i) t[i] = t[i - 1] * ratio;
      for (int i = 0; i < 50; ++i) {
        v[i] = fn == 0 ? ml::ml_eval(order, -std::pow(t[i], beta)).value
                       : ml::ml_pdf(order, t[i]);
      }
      std::vector<double> dd = v;
      for (int n = 1; n <= 3; ++n) {
        int violations = 0;
        for (std::size_t i = 0; i + n < t.size(); ++i) {
          dd[i] = (dd[i + 1] - dd[i]) / (t[i + n] - t[i]);
        }
        dd.resize(t.size() - n);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        for (double d : dd) {
          if (sign * d < 0.0) ++violations;
        }
        row(std::string(fn == 0 ? "psi" : "phi") + "_sign_violations_n" +
                std::to_string(n),
            violations, 0.5);
      }
    }
  } else if (suite == "laplace") {
    const double beta = getd(p, "beta", 0.5);
    const auto em = renewal::exponential(1.0);
    const auto mm = renewal::mittag_leffler(beta, 1.0);
    for (double s : {0.5, 1.0, 2.0}) {
      for (int k : {1, 2}) {
        const double fwd_exp = num::integrate(
            [&](double t) {
              return t == 0.0 ? 0.0
                              : std::exp(-s * t) * renewal::erlang_pdf(em, k, t);
            },
            0.0, 60.0, 1e-9);
        row("exp_pair_s" + std::to_string(s).substr(0, 3) + "_k" +
                std::to_string(k),
            std::fabs(fwd_exp - std::pow(1.0 / (1.0 + s), k)), 1e-5);

        const double fwd_ml =
            num::integrate(
                [&](double v) {
                  const double tt = v * v;
                  return tt == 0.0 ? 0.0
                                   : 2.0 * v * std::exp(-s * tt) *
                                         renewal::erlang_pdf(mm, k, tt);
                },
                1e-9, 10.0, 1e-9) +
            num::integrate(
                [&](double tt) {
                  return std::exp(-s * tt) * renewal::erlang_pdf(mm, k, tt);
                },
                100.0, 400.0, 1e-9);
        row("ml_pair_s" + std::to_string(s).substr(0, 3) + "_k" +
                std::to_string(k),
            std::fabs(fwd_ml - std::pow(1.0 / (1.0 + std::pow(s, beta)), k)),
            1e-5);
      }
    }
    for (double s : {0.5, 1.0, 4.0}) {
      row("caputo_laplace_s" + std::to_string(s).substr(0, 3),
          fracalc::caputo_laplace_check(ml::Order(beta), s), 1e-9);
    }
  } else {
    throw DomainError("unknown verify suite: " + suite);
  }

  json meta = meta_for(ctx);
  meta["all_pass"] = all_pass;
  const int rc = cli_io::write_table(ctx.out_path, ctx.format, meta, tab);
  return rc != 0 ? rc : (all_pass ? 0 : 1);
}

// ------------------------------------------------------------------- main --

void apply_config_file(RunContext& ctx, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read config file: " + path);
  json cfg = json::parse(f);
  if (cfg.at("subcommand").get<std::string>() != ctx.subcommand) {
    throw DomainError("config subcommand does not match the invoked one");
  }
  ctx.params = cfg.at("params");
  ctx.master_seed = cfg.at("master_seed").get<std::uint64_t>();
  ctx.format = cfg.at("format").get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Poisson / Mittag-Leffler renewal toolkit"};
  app.require_subcommand(1);

  RunContext ctx;
  std::string config_path;
  int threads = 0;

  // shared flags registered on every subcommand
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", ctx.master_seed, "master seed")
        ->envname("FRACRENEW_SEED");
    sub->add_option("--format", ctx.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", ctx.out_path, "output path (default stdout)");
    sub->add_option("--config", config_path,
                    "JSON RunConfig; overrides the other flags");
    sub->add_option("--threads", threads, "worker threads (0 = default)");
  };

  // ml-eval
  auto* ml_cmd = app.add_subcommand("ml-eval", "Mittag-Leffler evaluations");
  double beta = 0.5, tol = 1e-14;
  std::vector<double> zs, ts;
  std::string mode = "E";
  std::int64_t k_deriv = 0;
  ml_cmd->add_option("--beta", beta, "order in (0,1]");
  ml_cmd->add_option("--z", zs, "arguments z <= 0");
  ml_cmd->add_option("--t", ts, "time arguments t > 0 (psi/phi modes)");
  ml_cmd->add_option("--mode", mode, "E|series|psi|phi|deriv");
  ml_cmd->add_option("--k", k_deriv, "derivative order (deriv mode)");
  ml_cmd->add_option("--tol", tol, "series tolerance");
  ml_cmd->add_flag_callback("--psi", [&] { mode = "psi"; });
  ml_cmd->add_flag_callback("--phi", [&] { mode = "phi"; });
  add_common(ml_cmd);
  ml_cmd->callback([&] {
    ctx.subcommand = "ml-eval";
    ctx.params = {{"beta", beta}, {"mode", mode}, {"k", k_deriv}, {"tol", tol}};
    if (!zs.empty()) ctx.params["z"] = zs;
    if (!ts.empty()) ctx.params["t"] = ts;
  });

  // pmf
  auto* pmf_cmd = app.add_subcommand("pmf", "counting-number distribution");
  std::string model = "ml";
  double lambda = 1.0, tau = 1.0, c_scale = 1.0, t_at = 1.0;
  std::int64_t kmax = 60;
  pmf_cmd->add_option("--model", model, "exp|ml|pareto");
  pmf_cmd->add_option("--lambda", lambda, "exponential rate");
  pmf_cmd->add_option("--beta", beta, "fractional order / tail index");
  pmf_cmd->add_option("--tau", tau, "ML time scale");
  pmf_cmd->add_option("--c", c_scale, "Lomax scale");
  pmf_cmd->add_option("--t", t_at, "evaluation time");
  pmf_cmd->add_option("--kmax", kmax, "truncation index");
  add_common(pmf_cmd);
  pmf_cmd->callback([&] {
    ctx.subcommand = "pmf";
    ctx.params = {{"model", model}, {"lambda", lambda}, {"beta", beta},
                  {"tau", tau},     {"c", c_scale},     {"t", t_at},
                  {"kmax", kmax}};
  });

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo counting pmf");
  std::int64_t npaths = 100000;
  double horizon = -1.0;
  sim_cmd->add_option("--model", model, "exp|ml|pareto");
  sim_cmd->add_option("--lambda", lambda, "exponential rate");
  sim_cmd->add_option("--beta", beta, "fractional order / tail index");
  sim_cmd->add_option("--tau", tau, "ML time scale");
  sim_cmd->add_option("--c", c_scale, "Lomax scale");
  sim_cmd->add_option("--t", t_at, "evaluation time");
  sim_cmd->add_option("--npaths", npaths, "number of sample paths");
  sim_cmd->add_option("--horizon", horizon, "path horizon (default: t)");
  add_common(sim_cmd);
  sim_cmd->callback([&] {
    ctx.subcommand = "simulate";
    ctx.params = {{"model", model}, {"lambda", lambda}, {"beta", beta},
                  {"tau", tau},     {"c", c_scale},     {"t", t_at},
                  {"npaths", npaths}};
    if (horizon >= 0.0) ctx.params["horizon"] = horizon;
  });

  // thin
  auto* thin_cmd = app.add_subcommand("thin", "thinning-limit cascade");
  std::string base = "pareto";
  double a_const = -1.0;
  std::int64_t levels = 4, ngaps = 100000;
  std::vector<double> deltas;
  thin_cmd->add_option("--base", base, "exp|ml|pareto");
  thin_cmd->add_option("--beta", beta, "schedule order / tail index");
  thin_cmd->add_option("--lambda", lambda, "exponential rate");
  thin_cmd->add_option("--tau", tau, "ML time scale");
  thin_cmd->add_option("--c", c_scale, "Lomax scale");
  thin_cmd->add_option("--a", a_const, "tail constant (default from base)");
  thin_cmd->add_option("--levels", levels, "number of decade levels");
  thin_cmd->add_option("--deltas", deltas, "explicit delta levels");
  thin_cmd->add_option("--ngaps", ngaps, "gaps per level");
  add_common(thin_cmd);
  thin_cmd->callback([&] {
    ctx.subcommand = "thin";
    ctx.params = {{"base", base},     {"beta", beta}, {"lambda", lambda},
                  {"tau", tau},       {"c", c_scale}, {"levels", levels},
                  {"ngaps", ngaps}};
    if (a_const > 0.0) ctx.params["a"] = a_const;
    if (!deltas.empty()) ctx.params["deltas"] = deltas;
  });

  // ctrw
  auto* ctrw_cmd = app.add_subcommand("ctrw", "compound renewal sojourn density");
  std::string wait = "ml", jump = "twopoint";
  double sigma = 1.0, xmin = 0.0, xmax = 0.0, dx = 0.0, kappa = 1.0,
         s_lap = 1.0, dt = 1e-3, t_lo = 0.5, x_query = 0.0;
  bool has_grid = false;
  std::int64_t sim_walkers = 0;
  bool check_kf = false, check_fractional = false, check_mw = false;
  ctrw_cmd->add_option("--wait", wait, "exp|ml");
  ctrw_cmd->add_option("--lambda", lambda, "exponential rate");
  ctrw_cmd->add_option("--beta", beta, "ML order");
  ctrw_cmd->add_option("--tau", tau, "ML time scale");
  ctrw_cmd->add_option("--jump", jump, "twopoint|gauss");
  ctrw_cmd->add_option("--sigma", sigma, "Gaussian jump width");
  ctrw_cmd->add_option("--t", t_at, "evaluation time");
  ctrw_cmd->add_option("--kmax", kmax, "series truncation");
  auto* xo = ctrw_cmd->add_option("--xmin", xmin, "grid start");
  ctrw_cmd->add_option("--xmax", xmax, "grid end")->needs(xo);
  ctrw_cmd->add_option("--dx", dx, "grid step")->needs(xo);
  auto* xq = ctrw_cmd->add_option("--x", x_query, "report value at this x");
  ctrw_cmd->add_option("--simulate", sim_walkers, "Monte Carlo walkers");
  ctrw_cmd->add_flag("--check-kf", check_kf, "Kolmogorov-Feller residual");
  ctrw_cmd->add_flag("--check-fractional", check_fractional,
                     "fractional master-equation residual");
  ctrw_cmd->add_flag("--check-mw", check_mw, "Montroll-Weiss residual");
  ctrw_cmd->add_option("--kappa", kappa, "Fourier variable");
  ctrw_cmd->add_option("--s", s_lap, "Laplace variable");
  ctrw_cmd->add_option("--dt", dt, "time step for residual checks");
  ctrw_cmd->add_option("--t-lo", t_lo, "residual window start");
  double tol_mw = 1e-4, tol_kf = 1e-4, tol_frac = 5e-3;
  auto* omw = ctrw_cmd->add_option("--check-tol-mw", tol_mw, "MW threshold");
  auto* okf = ctrw_cmd->add_option("--check-tol-kf", tol_kf, "KF threshold");
  auto* ofr = ctrw_cmd->add_option("--check-tol-fractional", tol_frac,
                                   "fractional threshold");
  add_common(ctrw_cmd);
  ctrw_cmd->callback([&] {
    ctx.subcommand = "ctrw";
    ctx.params = {{"wait", wait},   {"lambda", lambda},
                  {"beta", beta},   {"tau", tau},
                  {"jump", jump},   {"sigma", sigma},
                  {"t", t_at},      {"kmax", kmax},
                  {"kappa", kappa}, {"s", s_lap},
                  {"dt", dt},       {"t-lo", t_lo},
                  {"simulate", sim_walkers}};
    has_grid = xo->count() > 0;
    if (has_grid) {
      ctx.params["xmin"] = xmin;
      ctx.params["xmax"] = xmax;
      ctx.params["dx"] = dx;
    }
    if (xq->count() > 0) ctx.params["x"] = x_query;
    if (check_kf) ctx.params["check-kf"] = true;
    if (check_fractional) ctx.params["check-fractional"] = true;
    if (check_mw) ctx.params["check-mw"] = true;
    if (omw->count() > 0) ctx.params["check-tol-mw"] = tol_mw;
    if (okf->count() > 0) ctx.params["check-tol-kf"] = tol_kf;
    if (ofr->count() > 0) ctx.params["check-tol-fractional"] = tol_frac;
  });

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "invariant batteries");
  std::string suite;
  verify_cmd->add_option("suite", suite, "relaxation|monotone|laplace")
      ->required();
  verify_cmd->add_option("--beta", beta, "order");
  auto* step_opt = verify_cmd->add_option("--step", dt, "grid step (relaxation)");
  add_common(verify_cmd);
  verify_cmd->callback([&] {
    ctx.subcommand = "verify";
    ctx.params = {{"suite", suite}, {"beta", beta}};
    if (step_opt->count() > 0) ctx.params["h"] = dt;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (!config_path.empty()) apply_config_file(ctx, config_path);
    if (ctx.subcommand == "ml-eval") return cmd_ml_eval(ctx);
    if (ctx.subcommand == "pmf") return cmd_pmf(ctx);
    if (ctx.subcommand == "simulate") return cmd_simulate(ctx);
    if (ctx.subcommand == "thin") return cmd_thin(ctx);
    if (ctx.subcommand == "ctrw") return cmd_ctrw(ctx);
    if (ctx.subcommand == "verify") return cmd_verify(ctx);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
