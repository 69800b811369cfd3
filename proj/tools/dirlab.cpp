// dirlab — numerical laboratory for Dirichlet series.
//
// Subcommands: estimate, weak, unconditional, strip, eco, weissler, moin,
// report. Exit codes: 0 success, 2 input error, 3 estimator error,
// 4 acceptance-threshold failure (report --check).

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "dirlab/jobs.hpp"
#include "dirlab/series_io.hpp"

namespace {

void add_common(CLI::App* cmd, dirlab::JobConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "random seed (echoed in the record)");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--schedule", cfg.schedule, "dyadic:<kmax> (0 = up to n_max)");
  cmd->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo samples for sampled norms");
  cmd->add_option("--dual-samples", cfg.dual_samples, "dual unit-ball samples");
  cmd->add_option("--grid-points", cfg.grid_points, "D_inf line-grid points");
  cmd->add_option("--t-span", cfg.t_span, "D_inf vertical-line window length");
  cmd->add_option("--refine-steps", cfg.refine_steps, "D_inf ascent sweeps");
  cmd->add_option("--torus-samples", cfg.torus_samples, "D_inf random torus starts");
  cmd->add_option("--recenter", cfg.recenter, "re-centering shift sigma0");
  cmd->add_option("--target", [&cfg](const std::vector<std::string>& v) {
        cfg.target = std::stod(v.at(0));
        return true;
      }, "declared paper target for report --check")
      ->expected(1);
}

void add_norm(CLI::App* cmd, dirlab::JobConfig& cfg) {
  cmd->add_option("--norm", cfg.norm, "ell1|ellinf|csup|dinf|hp");
  cmd->add_option("--p", cfg.p, "Hardy exponent for --norm hp");
}

int dispatch(const dirlab::JobConfig& cfg, bool quiet) {
  const dirlab::RunResult res = dirlab::run_job(cfg);
  if (!quiet) {
    std::cout << (res.cache_hit ? "cache hit: " : "wrote: ") << res.record_path << "\n";
    if (res.record.contains("headline"))
      std::cout << res.record["headline"].value("name", "") << " = "
                << res.record["headline"]["value"].dump() << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"dirlab — abscissas, norms and extremal series for Dirichlet series"};
  app.require_subcommand(1);

  dirlab::JobConfig cfg;
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress the summary line");

  auto* estimate = app.add_subcommand("estimate", "Bohr-Cahen abscissa estimate");
  estimate->add_option("input", cfg.input_path, "JSON-lines coefficient file")->required();
  add_norm(estimate, cfg);
  estimate->add_flag("--weak", cfg.weak, "use the weak-norm wrapper");
  add_common(estimate, cfg);

  auto* weak = app.add_subcommand("weak", "weak abscissa (sup over dual samples)");
  weak->add_option("input", cfg.input_path)->required();
  add_norm(weak, cfg);
  add_common(weak, cfg);

  auto* unc = app.add_subcommand("unconditional", "abscissa of unconditional convergence");
  unc->add_option("input", cfg.input_path)->required();
  unc->add_option("--strategy", cfg.strategy, "random|exhaustive");
  unc->add_option("--trials", cfg.trials, "random sign trials");
  add_common(unc, cfg);

  auto* strip = app.add_subcommand("strip", "strip width or polynomial-comparison exponent");
  strip->add_option("input", cfg.input_path, "coefficient file (report mode)");
  add_norm(strip, cfg);
  strip->add_option("--norm2", cfg.norm2, "second norm tag");
  strip->add_option("--p2", cfg.p2, "Hardy exponent for --norm2 hp");
  strip->add_flag("--exponent", cfg.exponent_mode, "fit the N^sigma comparison exponent");
  strip->add_option("--trials", cfg.trials, "coefficient draws per N (exponent mode)");
  add_common(strip, cfg);

  auto* eco = app.add_subcommand("eco", "extremal prime-block series and gap report");
  eco->add_option("--space", cfg.space, "coefficient model, l<q>[:dim] (dim auto)");
  eco->add_option("--blocks", cfg.blocks, "number of prime blocks");
  eco->add_option("--mass-target", cfg.mass_target, "relaxed mass clause target in (0,1]");
  eco->add_option("--prime-budget", cfg.prime_budget, "largest prime allowed");
  eco->add_option("--trials", cfg.trials, "sign trials for the unconditional estimate");
  add_common(eco, cfg);

  auto* weissler = app.add_subcommand("weissler", "T_r contraction check on H_p -> H_q");
  weissler->add_option("--wp", cfg.wp, "source exponent p");
  weissler->add_option("--wq", cfg.wq, "target exponent q");
  weissler->add_option("--r", cfg.radius, "radius in [0,1)");
  weissler->add_option("--trials", cfg.trials, "random polynomials");
  add_common(weissler, cfg);

  auto* moin = app.add_subcommand("moin", "lower bound for the H_q/H_p constant");
  moin->add_option("--wp", cfg.wp, "source exponent p");
  moin->add_option("--wq", cfg.wq, "target exponent q");
  moin->add_option("--N", cfg.moin_n, "polynomial length");
  moin->add_option("--iters", cfg.search_iters, "random search starts");
  add_common(moin, cfg);

  dirlab::ReportOptions ropts;
  auto* report = app.add_subcommand("report", "merge records into a summary table");
  report->add_option("records", ropts.record_paths, "ResultRecord JSON files")->required();
  report->add_flag("--check", ropts.check, "fail (exit 4) when estimates miss targets");
  report->add_option("--tol", ropts.tol, "check tolerance");
  report->add_option("--out", ropts.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      const dirlab::ReportResult res = dirlab::run_report(ropts);
      std::cout << res.table;
      std::cout << "merged csv: " << res.csv_path << "\n";
      return res.check_failed ? 4 : 0;
    }
    for (auto* cmd : {estimate, weak, unc, strip, eco, weissler, moin})
      if (cmd->parsed()) {
        cfg.command = cmd->get_name();
        return dispatch(cfg, quiet);
      }
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const dirlab::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    const std::string what = e.what();
    if (what.find("cannot open") != std::string::npos ||
        what.find("needs an input file") != std::string::npos) {
      std::cerr << "input error: " << what << "\n";
      return 2;
    }
    std::cerr << "estimator error: " << what << "\n";
    return 3;
  }
}
