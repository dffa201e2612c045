#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rblab/irreps.hpp"
#include "rblab/rbsim.hpp"

namespace rbcli {

// Schema violation; the message names the offending key path or file position.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroupSpec {
  std::string name = "clifford1";  // "pauli", "clifford1" or "clifford2"
  int qubits = 1;                  // pauli only
};

struct NoiseSpec {
  std::string model = "ideal";
  double p = 0.0;                  // depolarizing
  double theta = 0.0;              // overrotation
  std::vector<double> axis;        // overrotation_fixed
  std::vector<double> angles;      // overrotation_fixed, one per group element
  std::vector<double> diag;        // pauli: transfer-matrix diagonal without the leading 1
  double alpha = 0.0;              // counterexample
  double gamma = 1.0;              // counterexample, damping
  int levels = 0;                  // leak
  double mu = 0.0;                 // leak
  std::optional<double> spam_prep; // depolarizing strength before the first gate
  std::optional<double> spam_meas; // depolarizing strength before measurement
};

struct ProtocolSpec {
  std::string kind = "uniform";  // uniform | approximate | subset | interleaved | filtered | xeb
  double epsilon = 0.0;          // approximate: (1 - eps) uniform + eps delta_identity
  std::vector<std::string> generators;  // subset
  std::vector<double> weights;          // subset
  double delta_prime = 0.01;            // subset
  std::string gate;                     // interleaved
  std::vector<std::string> irreps;      // filtered
  long long samples = 1000;             // filtered, xeb
  bool explicit_inversion = false;      // filtered
  bool randomize_end = false;           // uniform family: no-inversion RB
  int qubits = 1;                       // xeb
};

struct ExperimentConfig {
  std::optional<GroupSpec> group;  // absent only for xeb
  NoiseSpec noise;
  ProtocolSpec protocol;
  std::vector<int> lengths;
  int shots = 100;
  int sequences = 10;
  std::string povm = "survival";   // survival | computational | threedesign
  std::string state = "zero";      // zero | magic
  std::uint64_t seed = 1;
  std::string output = "runs";
  int threads = 0;                 // runtime only: 0 reads RBLAB_THREADS

  // Every field with defaults resolved; threads is omitted so that outputs do
  // not depend on it.
  nlohmann::json echo() const;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

// Objects assembled from a configuration.
struct Experiment {
  rblab::GroupBundle bundle;
  std::optional<rblab::IrrepCatalog> catalog;  // present when irrep matrices are available
  rblab::RBConfig rb;
};

Experiment build_experiment(const ExperimentConfig& config);
int find_element(const rblab::FiniteGroup& group, const std::string& name);

}  // namespace rbcli
