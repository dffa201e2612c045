#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rbcli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitHypothesis = 3;
inline constexpr int kExitNumeric = 4;

// Flags shared by every subcommand plus the per-command extras. Scalar
// overrides are applied on top of the configuration file.
struct Options {
  std::string config;
  bool strict = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> shots;
  std::optional<int> sequences;
  std::optional<int> threads;
  std::optional<std::string> output;
  std::optional<std::string> run_dir;  // exact run directory; must not exist

  // extract-poles
  std::string family;
  int n = 0;
  int samples_m = 100;      // M: signal runs over m = 0..M
  int pencil = 0;           // L; 0 picks M / 2
  bool exact = false;
  long long noise_shots = 0;  // binomial shots per point, 0 for noiseless double-precision data
  std::string input;        // dataset CSV produced by simulate

  // conditioning-study
  std::vector<double> poles;
  std::vector<int> sizes;
  double var_bound = 0.25;
  double eps = 0.05;
  double delta = 0.1;

  // gauge-report
  bool cp_scan = false;
};

int run_simulate(const Options& opts);
int run_verify_decay(const Options& opts);
int run_extract_poles(const Options& opts);
int run_filter(const Options& opts);
int run_gauge_report(const Options& opts);
int run_conditioning_study(const Options& opts);
int run_xeb(const Options& opts);

}  // namespace rbcli
