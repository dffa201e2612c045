#include <functional>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "config.hpp"
#include "rblab/linalg.hpp"

int main(int argc, char** argv) {
  using namespace rbcli;
  spdlog::set_default_logger(spdlog::stderr_color_mt("rbcli"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Randomized benchmarking laboratory: simulation, decay certification, pole extraction, filtering"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only print warnings and errors");

  Options opts;
  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* cfg = sub->add_option("-c,--config", opts.config, "Experiment configuration (JSON)");
    if (needs_config) cfg->required()->check(CLI::ExistingFile);
    sub->add_flag("--strict", opts.strict, "Exit 3 when a theorem hypothesis or bound is violated");
    sub->add_option("--seed", opts.seed, "Override the root seed");
    sub->add_option("--shots", opts.shots, "Override shots per sequence");
    sub->add_option("--sequences", opts.sequences, "Override sequences per length");
    sub->add_option("--threads", opts.threads, "Worker threads (default: RBLAB_THREADS or 1)");
    sub->add_option("--output", opts.output, "Root directory for run directories");
    sub->add_option("--run-dir", opts.run_dir, "Exact run directory (must not exist)");
  };

  std::map<CLI::App*, std::function<int(const Options&)>> handlers;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo RB data collection");
  common(simulate, true);
  handlers[simulate] = run_simulate;

  auto* verify = app.add_subcommand("verify-decay", "Exact decay model against the residual bound");
  common(verify, true);
  handlers[verify] = run_verify_decay;

  auto* poles = app.add_subcommand("extract-poles", "ESPRIT pole extraction from a family or a dataset");
  common(poles, false);
  poles->add_option("--family", opts.family, "Pole family: lin<alpha> or F<a>");
  poles->add_option("--n", opts.n, "Number of poles")->required();
  poles->add_option("--M", opts.samples_m, "Signal runs over m = 0..M");
  poles->add_option("--L", opts.pencil, "Pencil parameter (default M/2)");
  poles->add_flag("--exact", opts.exact, "Extended-precision path on exact data");
  poles->add_option("--noise-shots", opts.noise_shots, "Binomial shots per point (0: noiseless)");
  poles->add_option("--input", opts.input, "Dataset CSV written by simulate")->check(CLI::ExistingFile);
  handlers[poles] = run_extract_poles;

  auto* filter = app.add_subcommand("filter", "Filtered RB per irrep");
  common(filter, true);
  handlers[filter] = run_filter;

  auto* gauge = app.add_subcommand("gauge-report", "Depolarizing gauge and fidelity decomposition");
  common(gauge, true);
  gauge->add_flag("--cp-scan", opts.cp_scan, "Also scan the gauge counterexample over alpha and gamma");
  handlers[gauge] = run_gauge_report;

  auto* cond = app.add_subcommand("conditioning-study", "Vandermonde conditioning against its limit");
  common(cond, false);
  cond->add_option("--poles", opts.poles, "Real poles")->delimiter(',');
  cond->add_option("--family", opts.family, "Pole family instead of --poles");
  cond->add_option("--n", opts.n, "Number of poles for --family");
  cond->add_option("--sizes", opts.sizes, "Signal lengths M")->delimiter(',');
  cond->add_option("--var-bound", opts.var_bound, "Per-point variance bound");
  cond->add_option("--eps", opts.eps, "Hankel deviation tolerance");
  cond->add_option("--delta", opts.delta, "Failure probability");
  handlers[cond] = run_conditioning_study;

  auto* xeb = app.add_subcommand("xeb", "Linear cross-entropy benchmarking");
  common(xeb, true);
  handlers[xeb] = run_xeb;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSchema;
  }
  spdlog::set_level(quiet ? spdlog::level::warn : spdlog::level::info);

  for (auto& [sub, handler] : handlers) {
    if (!sub->parsed()) continue;
    try {
      return handler(opts);
    } catch (const ConfigError& e) {
      spdlog::error("configuration: {}", e.what());
      return kExitSchema;
    } catch (const rblab::DomainError& e) {
      spdlog::error("invalid input: {}", e.what());
      return kExitSchema;
    } catch (const rblab::NumericError& e) {
      spdlog::error("numerical failure: {}", e.what());
      return kExitNumeric;
    } catch (const std::exception& e) {
      spdlog::error("{}", e.what());
      return kExitNumeric;
    }
  }
  return kExitSchema;
}
