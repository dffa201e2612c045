#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "rblab/filter.hpp"

namespace rbcli {

namespace {

using nlohmann::json;

// Walks one JSON object, records which keys were consumed and rejects the rest.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError(fmt::format("{}: {}", path.empty() ? "/" : path, what));
  }

  std::string key_path(const std::string& key) const { return path_ + "/" + key; }
  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return as<T>(raw(key), key_path(key));
  }

  template <class T>
  T require(const std::string& key) {
    if (!has(key)) fail(key_path(key), "required key missing");
    return as<T>(raw(key), key_path(key));
  }

  // Rejects keys that were never read.
  void finish() const {
    for (const auto& item : obj_.items())
      if (!seen_.count(item.key())) fail(key_path(item.key()), "unknown key");
  }

  template <class T>
  static T as(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(path, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(path, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.get<long long>() < 0) fail(path, "expected a nonnegative integer");
      }
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(path, "expected a number");
      const auto x = v.get<T>();
      if (!std::isfinite(x)) fail(path, "expected a finite number");
      return x;
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(path, "expected a string");
      return v.get<std::string>();
    } else {
      if (!v.is_array()) fail(path, "expected an array");
      T out;
      for (size_t i = 0; i < v.size(); ++i)
        out.push_back(as<typename T::value_type>(v[i], fmt::format("{}/{}", path, i)));
      return out;
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void check_one_of(const std::string& value, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const char* a : allowed)
    if (value == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  Reader::fail(path, fmt::format("'{}' is not one of {}", value, list));
}

void check_probability(double x, const std::string& path) {
  if (x < 0.0 || x > 1.0) Reader::fail(path, "expected a value in [0, 1]");
}

GroupSpec parse_group(const json& j) {
  Reader r(j, "/group");
  GroupSpec g;
  g.name = r.require<std::string>("name");
  check_one_of(g.name, {"pauli", "clifford1", "clifford2"}, "/group/name");
  if (g.name == "pauli") {
    g.qubits = r.get<int>("qubits", 1);
    if (g.qubits < 1 || g.qubits > 3) Reader::fail("/group/qubits", "expected 1, 2 or 3");
  } else {
    g.qubits = g.name == "clifford1" ? 1 : 2;
  }
  r.finish();
  return g;
}

NoiseSpec parse_noise(const json& j) {
  Reader r(j, "/noise");
  NoiseSpec n;
  n.model = r.require<std::string>("model");
  check_one_of(n.model, {"ideal", "depolarizing", "overrotation", "overrotation_fixed", "pauli", "damping",
                         "counterexample", "leak"},
               "/noise/model");
  if (n.model == "depolarizing") {
    n.p = r.require<double>("p");
    check_probability(n.p, "/noise/p");
  } else if (n.model == "overrotation") {
    n.theta = r.require<double>("theta");
  } else if (n.model == "overrotation_fixed") {
    n.axis = r.require<std::vector<double>>("axis");
    n.angles = r.require<std::vector<double>>("angles");
    if (n.axis.size() != 3) Reader::fail("/noise/axis", "expected three components");
  } else if (n.model == "pauli") {
    n.diag = r.require<std::vector<double>>("diag");
  } else if (n.model == "damping") {
    n.gamma = r.require<double>("gamma");
    check_probability(n.gamma, "/noise/gamma");
  } else if (n.model == "counterexample") {
    n.alpha = r.require<double>("alpha");
    n.gamma = r.require<double>("gamma");
    check_probability(n.gamma, "/noise/gamma");
  } else if (n.model == "leak") {
    n.levels = r.require<int>("levels");
    n.mu = r.require<double>("mu");
    check_probability(n.mu, "/noise/mu");
  }
  if (r.has("spam")) {
    Reader s(r.raw("spam"), "/noise/spam");
    if (s.has("prep")) n.spam_prep = s.require<double>("prep");
    if (s.has("meas")) n.spam_meas = s.require<double>("meas");
    if (n.spam_prep) check_probability(*n.spam_prep, "/noise/spam/prep");
    if (n.spam_meas) check_probability(*n.spam_meas, "/noise/spam/meas");
    s.finish();
  }
  r.finish();
  return n;
}

ProtocolSpec parse_protocol(const json& j) {
  Reader r(j, "/protocol");
  ProtocolSpec p;
  p.kind = r.require<std::string>("kind");
  check_one_of(p.kind, {"uniform", "approximate", "subset", "interleaved", "filtered", "xeb"}, "/protocol/kind");
  if (p.kind == "uniform") {
    p.randomize_end = r.get<bool>("randomize_end", false);
  } else if (p.kind == "approximate") {
    p.epsilon = r.require<double>("epsilon");
    check_probability(p.epsilon, "/protocol/epsilon");
  } else if (p.kind == "subset") {
    p.generators = r.require<std::vector<std::string>>("generators");
    p.weights = r.get<std::vector<double>>("weights", std::vector<double>(p.generators.size(), 1.0));
    p.delta_prime = r.get<double>("delta_prime", 0.01);
    if (p.generators.empty()) Reader::fail("/protocol/generators", "expected at least one generator");
    if (p.weights.size() != p.generators.size()) Reader::fail("/protocol/weights", "one weight per generator");
    if (!(p.delta_prime > 0.0)) Reader::fail("/protocol/delta_prime", "expected a positive value");
  } else if (p.kind == "interleaved") {
    p.gate = r.require<std::string>("gate");
  } else if (p.kind == "filtered") {
    p.irreps = r.require<std::vector<std::string>>("irreps");
    p.samples = r.get<long long>("samples", 1000);
    p.explicit_inversion = r.get<bool>("explicit_inversion", false);
    if (p.irreps.empty()) Reader::fail("/protocol/irreps", "expected at least one irrep label");
    if (p.samples < 2) Reader::fail("/protocol/samples", "expected at least 2");
  } else if (p.kind == "xeb") {
    p.qubits = r.get<int>("qubits", 1);
    p.samples = r.get<long long>("samples", 1000);
    if (p.qubits < 1 || p.qubits > 3) Reader::fail("/protocol/qubits", "expected 1, 2 or 3");
    if (p.samples < 2) Reader::fail("/protocol/samples", "expected at least 2");
  }
  r.finish();
  return p;
}

std::vector<int> parse_lengths(Reader& top) {
  const json& v = top.raw("lengths");
  std::vector<int> out;
  if (v.is_array()) {
    out = Reader::as<std::vector<int>>(v, "/lengths");
  } else {
    Reader r(v, "/lengths");
    const int start = r.require<int>("start");
    const int stop = r.require<int>("stop");
    const int step = r.get<int>("step", 1);
    r.finish();
    if (step < 1) Reader::fail("/lengths/step", "expected a positive step");
    for (int m = start; m <= stop; m += step) out.push_back(m);
  }
  if (out.empty()) Reader::fail("/lengths", "expected at least one length");
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0) Reader::fail(fmt::format("/lengths/{}", i), "lengths must be nonnegative");
    if (i > 0 && out[i] <= out[i - 1]) Reader::fail(fmt::format("/lengths/{}", i), "lengths must increase");
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  Reader top(doc, "");
  ExperimentConfig c;
  c.protocol = top.has("protocol") ? parse_protocol(top.raw("protocol")) : ProtocolSpec{};
  if (top.has("group")) c.group = parse_group(top.raw("group"));
  else if (c.protocol.kind != "xeb") Reader::fail("/group", "required key missing");
  if (!top.has("noise")) Reader::fail("/noise", "required key missing");
  c.noise = parse_noise(top.raw("noise"));
  if (!top.has("lengths")) Reader::fail("/lengths", "required key missing");
  c.lengths = parse_lengths(top);
  c.shots = top.get<int>("shots", 100);
  c.sequences = top.get<int>("sequences", 10);
  c.povm = top.get<std::string>("povm", "survival");
  c.state = top.get<std::string>("state", "zero");
  c.seed = top.get<std::uint64_t>("seed", 1);
  c.output = top.get<std::string>("output", "runs");
  c.threads = top.get<int>("threads", 0);
  top.finish();
  check_one_of(c.povm, {"survival", "computational", "threedesign"}, "/povm");
  check_one_of(c.state, {"zero", "magic"}, "/state");
  if (c.shots < 1) Reader::fail("/shots", "expected a positive count");
  if (c.sequences < 1) Reader::fail("/sequences", "expected a positive count");
  if (c.threads < 0) Reader::fail("/threads", "expected a nonnegative count");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" in the message.
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  try {
    return parse_config(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

nlohmann::json ExperimentConfig::echo() const {
  json j;
  if (group) {
    j["group"] = {{"name", group->name}};
    if (group->name == "pauli") j["group"]["qubits"] = group->qubits;
  }
  json n = {{"model", noise.model}};
  if (noise.model == "depolarizing") n["p"] = noise.p;
  if (noise.model == "overrotation") n["theta"] = noise.theta;
  if (noise.model == "overrotation_fixed") {
    n["axis"] = noise.axis;
    n["angles"] = noise.angles;
  }
  if (noise.model == "pauli") n["diag"] = noise.diag;
  if (noise.model == "damping") n["gamma"] = noise.gamma;
  if (noise.model == "counterexample") {
    n["alpha"] = noise.alpha;
    n["gamma"] = noise.gamma;
  }
  if (noise.model == "leak") {
    n["levels"] = noise.levels;
    n["mu"] = noise.mu;
  }
  if (noise.spam_prep || noise.spam_meas) {
    n["spam"] = json::object();
    if (noise.spam_prep) n["spam"]["prep"] = *noise.spam_prep;
    if (noise.spam_meas) n["spam"]["meas"] = *noise.spam_meas;
  }
  j["noise"] = n;
  json p = {{"kind", protocol.kind}};
  if (protocol.kind == "uniform") p["randomize_end"] = protocol.randomize_end;
  if (protocol.kind == "approximate") p["epsilon"] = protocol.epsilon;
  if (protocol.kind == "subset") {
    p["generators"] = protocol.generators;
    p["weights"] = protocol.weights;
    p["delta_prime"] = protocol.delta_prime;
  }
  if (protocol.kind == "interleaved") p["gate"] = protocol.gate;
  if (protocol.kind == "filtered") {
    p["irreps"] = protocol.irreps;
    p["samples"] = protocol.samples;
    p["explicit_inversion"] = protocol.explicit_inversion;
  }
  if (protocol.kind == "xeb") {
    p["qubits"] = protocol.qubits;
    p["samples"] = protocol.samples;
  }
  j["protocol"] = p;
  j["lengths"] = lengths;
  j["shots"] = shots;
  j["sequences"] = sequences;
  j["povm"] = povm;
  j["state"] = state;
  j["seed"] = seed;
  j["output"] = output;
  return j;
}

int find_element(const rblab::FiniteGroup& group, const std::string& name) {
  for (int g = 0; g < group.order(); ++g)
    if (group.element_name(g) == name) return g;
  throw ConfigError(fmt::format("no group element named '{}' in {}", name, group.name()));
}

namespace {

using rblab::CMat;

rblab::GroupBundle make_group(const GroupSpec& g) {
  if (g.name == "pauli") return rblab::build_pauli_group(g.qubits);
  if (g.name == "clifford1") return rblab::build_clifford_1q();
  return rblab::build_clifford_2q();
}

rblab::ImplementationMap make_noise(const NoiseSpec& n, const rblab::GroupBundle& b) {
  using namespace rblab;
  const int d = b.group->hilbert_dim();
  auto single_qubit = [&] {
    if (d != 2) throw ConfigError(fmt::format("/noise/model: '{}' requires a single-qubit group", n.model));
  };
  if (n.model == "ideal") return ImplementationMap::from_representation(b.omega);
  if (n.model == "depolarizing") return gate_independent(b, depolarizing(d, n.p));
  if (n.model == "overrotation") {
    single_qubit();
    return overrotation_own_axis(b, n.theta);
  }
  if (n.model == "overrotation_fixed") {
    single_qubit();
    if (static_cast<int>(n.angles.size()) != b.group->order())
      throw ConfigError(fmt::format("/noise/angles: expected {} entries, one per group element", b.group->order()));
    return overrotation_fixed_axis(b, Eigen::Vector3d(n.axis[0], n.axis[1], n.axis[2]), n.angles);
  }
  if (n.model == "pauli") {
    if (static_cast<int>(n.diag.size()) != d * d - 1)
      throw ConfigError(fmt::format("/noise/diag: expected {} entries", d * d - 1));
    CMat m = CMat::Zero(d * d, d * d);
    m(0, 0) = 1.0;
    for (int k = 1; k < d * d; ++k) m(k, k) = n.diag[static_cast<size_t>(k - 1)];
    return gate_independent(b, SuperOp(d, m));
  }
  if (n.model == "damping") {
    single_qubit();
    return gate_independent(b, damping_t(n.gamma));
  }
  if (n.model == "counterexample") {
    if (d != 2 || b.group->order() != 24)
      throw ConfigError("/noise/model: 'counterexample' requires group clifford1");
    return counterexample_ix_a(b, n.alpha, n.gamma);
  }
  return stochastic_leak(b, n.levels, n.mu);
}

CMat make_state(const std::string& kind, int d) {
  if (kind == "zero") return rblab::basis_state(d, 0);
  if (d != 2) throw ConfigError("/state: 'magic' is defined for a single qubit only");
  const double s = 1.0 / std::sqrt(3.0);
  return 0.5 * (CMat::Identity(2, 2) +
                s * (rblab::pauli_matrix(1) + rblab::pauli_matrix(2) + rblab::pauli_matrix(3)));
}

std::vector<CMat> make_povm(const std::string& kind, int d) {
  if (kind == "survival") return rblab::survival_povm(d);
  if (kind == "computational") return rblab::computational_povm(d);
  int q = 0;
  while ((1 << q) < d) ++q;
  if (q > 2) throw ConfigError("/povm: 'threedesign' is available for one or two qubits");
  return rblab::threedesign_povm(q).effects;
}

rblab::SamplingSchedule make_schedule(const ProtocolSpec& p, const rblab::FiniteGroup& group) {
  using namespace rblab;
  const int order = group.order();
  if (p.kind == "approximate") return SamplingSchedule::single(mixture(peaked(order, group.identity()), p.epsilon));
  if (p.kind == "subset") {
    std::vector<int> support;
    for (const auto& name : p.generators) support.push_back(find_element(group, name));
    return SamplingSchedule::single(generator_supported(order, support, p.weights));
  }
  if (p.kind == "interleaved") return interleaved_schedule(order, find_element(group, p.gate));
  return SamplingSchedule::single(uniform_distribution(order));
}

}  // namespace

Experiment build_experiment(const ExperimentConfig& c) {
  if (!c.group) throw ConfigError("/group: required key missing");
  auto bundle = make_group(*c.group);
  const int d = bundle.group->hilbert_dim();
  std::optional<rblab::IrrepCatalog> catalog;
  if (c.group->name == "pauli") catalog = rblab::pauli_catalog(bundle);
  if (c.group->name == "clifford1") catalog = rblab::clifford_1q_catalog(bundle);
  std::optional<rblab::SuperOp> prep;
  std::optional<rblab::SuperOp> meas;
  if (c.noise.spam_prep) prep = rblab::depolarizing(d, *c.noise.spam_prep);
  if (c.noise.spam_meas) meas = rblab::depolarizing(d, *c.noise.spam_meas);
  rblab::RBConfig rb{make_noise(c.noise, bundle),
                     bundle.group->identity(),
                     c.protocol.kind == "uniform" && c.protocol.randomize_end,
                     c.lengths,
                     make_state(c.state, d),
                     make_povm(c.povm, d),
                     make_schedule(c.protocol, *bundle.group),
                     prep,
                     meas,
                     c.shots,
                     c.sequences,
                     c.seed};
  rblab::validate(rb);
  return Experiment{std::move(bundle), std::move(catalog), std::move(rb)};
}

}  // namespace rbcli
