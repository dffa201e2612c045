#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "config.hpp"
#include "rblab/csv.hpp"
#include "rblab/decay.hpp"
#include "rblab/filter.hpp"
#include "rblab/gauge.hpp"
#include "rblab/poles.hpp"

#ifndef RBLAB_VERSION
#define RBLAB_VERSION "0.0.0"
#endif

namespace rbcli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using rblab::CsvTable;
using rblab::format_double;

// FNV-1a over the canonical dump; stable across platforms and runs.
std::string config_hash(const json& canonical) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

// One directory per invocation; never reuses an existing path.
class Run {
 public:
  Run(const std::string& command, json echo, const Options& opts, const std::string& output_root)
      : command_(command), echo_(std::move(echo)), hash_(config_hash(json{{"command", command}, {"config", echo_}})) {
    if (opts.run_dir) {
      dir_ = *opts.run_dir;
      if (fs::exists(dir_)) throw ConfigError(fmt::format("--run-dir {}: already exists", dir_.string()));
    } else {
      const fs::path base = fs::path(output_root) / fmt::format("{}-{}-{}", command, hash_, utc_timestamp());
      dir_ = base;
      for (int k = 2; fs::exists(dir_); ++k) dir_ = fs::path(base.string() + fmt::format("-{}", k));
    }
    fs::create_directories(dir_);
    std::ofstream(dir_ / "config.json") << json{{"command", command_}, {"config", echo_}}.dump(2) << "\n";
    std::ofstream(dir_ / "run.json") << json{{"command", command_},
                                             {"config_hash", hash_},
                                             {"version", RBLAB_VERSION},
                                             {"threads", rblab::thread_count_from_env()},
                                             {"started", utc_timestamp()}}
                                            .dump(2)
                                     << "\n";
    spdlog::info("{}: run directory {}", command_, dir_.string());
  }

  // Sidecars carry no timestamp or thread count so that reruns compare byte for byte.
  void write(const std::string& name, const CsvTable& table, json extra = json::object()) const {
    json meta = {{"command", command_}, {"config_hash", hash_}, {"version", RBLAB_VERSION}, {"config", echo_}};
    for (auto& [k, v] : extra.items()) meta[k] = v;
    rblab::write_csv(dir_ / name, table, meta);
  }

  void write_report(const json& report) const { std::ofstream(dir_ / "report.json") << report.dump(2) << "\n"; }

  const fs::path& dir() const { return dir_; }

 private:
  std::string command_;
  json echo_;
  std::string hash_;
  fs::path dir_;
};

ExperimentConfig load_with_overrides(const Options& opts) {
  if (opts.config.empty()) throw ConfigError("--config is required for this command");
  ExperimentConfig c = load_config(opts.config);
  if (opts.seed) c.seed = *opts.seed;
  if (opts.shots) c.shots = *opts.shots;
  if (opts.sequences) c.sequences = *opts.sequences;
  if (opts.threads) c.threads = *opts.threads;
  if (opts.output) c.output = *opts.output;
  if (c.shots < 1 || c.sequences < 1) throw ConfigError("--shots and --sequences must be positive");
  // Module-level parallelism reads the environment; the CLI stays single-threaded.
  if (c.threads > 0) setenv("RBLAB_THREADS", std::to_string(c.threads).c_str(), 1);
  return c;
}

const rblab::IrrepCatalog& require_catalog(const Experiment& ex, const std::string& command) {
  if (!ex.catalog)
    throw ConfigError(fmt::format("/group/name: {} needs irrep matrices, available for pauli and clifford1", command));
  return *ex.catalog;
}

std::string cplx_re(rblab::cplx z) { return format_double(z.real()); }
std::string cplx_im(rblab::cplx z) { return format_double(z.imag()); }

// Shot-weighted mean of p_hat for one outcome at every length.
std::map<int, double> mean_by_length(const rblab::RBDataset& data, int povm_index) {
  std::map<int, std::pair<double, long long>> acc;
  for (const auto& row : data.rows) {
    if (row.povm_index != povm_index) continue;
    auto& [sum, shots] = acc[row.m];
    sum += row.p_hat * static_cast<double>(row.shots);
    shots += row.shots;
  }
  std::map<int, double> out;
  for (const auto& [m, a] : acc) out[m] = a.first / static_cast<double>(a.second);
  return out;
}

json fit_json(const rblab::DecayFit& f) {
  return {{"rate", f.rate}, {"constant", f.constant}, {"amplitude", f.amplitude}, {"residual", f.residual}};
}

CsvTable poles_table(const rblab::PoleSet& est, const rblab::PoleSet* truth) {
  CsvTable t;
  t.header = {"index", "pole_re", "pole_im", "coefficient_re", "coefficient_im"};
  if (truth) {
    t.header.push_back("true_re");
    t.header.push_back("true_im");
  }
  for (size_t k = 0; k < est.poles.size(); ++k) {
    std::vector<std::string> row{std::to_string(k), cplx_re(est.poles[k]), cplx_im(est.poles[k]),
                                 cplx_re(est.coefficients[k]), cplx_im(est.coefficients[k])};
    if (truth) {
      const rblab::cplx z = k < truth->poles.size() ? truth->poles[k] : rblab::cplx(NAN, NAN);
      row.push_back(cplx_re(z));
      row.push_back(cplx_im(z));
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace

int run_simulate(const Options& opts) {
  const ExperimentConfig c = load_with_overrides(opts);
  if (c.protocol.kind == "filtered" || c.protocol.kind == "xeb")
    throw ConfigError(fmt::format("/protocol/kind: '{}' runs through the '{}' command", c.protocol.kind,
                                  c.protocol.kind == "xeb" ? "xeb" : "filter"));
  const Experiment ex = build_experiment(c);
  Run run("simulate", c.echo(), opts, c.output);
  const rblab::RBDataset data = rblab::run_rb(ex.rb, c.threads);
  run.write("dataset.csv", rblab::dataset_table(data));

  const auto means = mean_by_length(data, 0);
  std::optional<rblab::ExactEngine> engine;
  if (ex.catalog) engine.emplace(ex.rb, *ex.catalog);
  CsvTable summary;
  summary.header = {"m", "p_mean"};
  if (engine) summary.header.push_back("p_exact");
  std::vector<int> lengths;
  std::vector<double> y;
  for (const auto& [m, p] : means) {
    std::vector<std::string> row{std::to_string(m), format_double(p)};
    if (engine) {
      double exact = 0.0;
      if (ex.rb.randomize_end) {
        for (int g = 0; g < ex.bundle.group->order(); ++g) exact += engine->probability(0, m, g);
        exact /= ex.bundle.group->order();
      } else {
        exact = engine->probability(0, m);
      }
      row.push_back(format_double(exact));
    }
    summary.add_row(std::move(row));
    lengths.push_back(m);
    y.push_back(p);
  }
  run.write("summary.csv", summary);

  json report = {{"command", "simulate"}, {"rows", data.rows.size()}};
  if (lengths.size() >= 3) {
    const auto fit = rblab::fit_rb_decay(lengths, y);
    report["fit"] = fit_json(fit);
    CsvTable ft;
    ft.header = {"rate", "constant", "amplitude", "residual"};
    ft.add_row({format_double(fit.rate), format_double(fit.constant), format_double(fit.amplitude),
                format_double(fit.residual)});
    run.write("fit.csv", ft);
    fmt::print("fit: p(m) = {:.6f} + {:.6f} * {:.6f}^m\n", fit.constant, fit.amplitude, fit.rate);
  }
  run.write_report(report);
  fmt::print("run directory: {}\n", run.dir().string());
  return kExitOk;
}

int run_verify_decay(const Options& opts) {
  const ExperimentConfig c = load_with_overrides(opts);
  const auto& kind = c.protocol.kind;
  if (kind != "uniform" && kind != "approximate" && kind != "subset")
    throw ConfigError("/protocol/kind: verify-decay supports uniform, approximate and subset");
  if (kind == "uniform" && c.protocol.randomize_end)
    throw ConfigError("/protocol/randomize_end: verify-decay needs a fixed ending gate");
  const Experiment ex = build_experiment(c);
  const auto& catalog = require_catalog(ex, "verify-decay");
  Run run("verify-decay", c.echo(), opts, c.output);
  const rblab::ExactEngine engine(ex.rb, catalog);
  const auto omega = rblab::ImplementationMap::from_representation(ex.bundle.omega);
  spdlog::info("verify-decay: {} diamond-norm programs", ex.bundle.group->order());
  const auto dist = rblab::mean_diamond_distance(ex.rb.phi, omega);

  rblab::BoundReport rep;
  if (kind == "uniform") {
    rep = rblab::verify_uniform_bound(engine, ex.bundle.omega, dist);
  } else if (kind == "approximate") {
    rep = rblab::verify_nonuniform_bound(engine, ex.bundle.omega, dist);
  } else {
    const int mix = rblab::m_mix(ex.rb.schedule.cycle.front(), c.protocol.delta_prime, *ex.bundle.group);
    rep = rblab::verify_subset_bound(engine, ex.bundle.omega, dist, std::max(mix, 1));
  }
  CsvTable t;
  t.header = {"m", "p_exact", "p_model", "residual", "bound", "pass"};
  for (const auto& r : rep.rows)
    t.add_row({std::to_string(r.m), format_double(r.p_exact), format_double(r.p_model), format_double(r.residual),
               format_double(r.bound), r.pass ? "1" : "0"});
  json summary = {{"kind", rep.kind},           {"delta", rep.delta},
                  {"delta_prime", rep.delta_prime}, {"m_mix", rep.m_mix},
                  {"hypothesis_ok", rep.hypothesis_ok}, {"pass", rep.pass},
                  {"consistency", rep.consistency}};
  run.write("bound.csv", t, {{"summary", summary}});
  CsvTable dt;
  dt.header = {"g", "name", "diamond_distance"};
  for (int g = 0; g < ex.bundle.group->order(); ++g)
    dt.add_row({std::to_string(g), ex.bundle.group->element_name(g),
                format_double(dist.per_element[static_cast<size_t>(g)])});
  run.write("diamond.csv", dt);
  run.write_report(summary);
  fmt::print("{} bound: delta = {:.6g}, delta' = {:.6g}, hypotheses {}, residual <= bound at all {} lengths: {}\n",
             rep.kind, rep.delta, rep.delta_prime, rep.hypothesis_ok ? "hold" : "violated", rep.rows.size(),
             rep.pass ? "yes" : "no");
  fmt::print("run directory: {}\n", run.dir().string());
  if (opts.strict && !(rep.hypothesis_ok && rep.pass)) return kExitHypothesis;
  return kExitOk;
}

int run_extract_poles(const Options& opts) {
  json args = {{"family", opts.family}, {"n", opts.n},         {"M", opts.samples_m},
               {"L", opts.pencil},      {"exact", opts.exact}, {"shots", opts.noise_shots},
               {"seed", opts.seed.value_or(1)}, {"input", opts.input}};
  if (opts.n < 1) throw ConfigError("--n: expected a positive pole count");
  const std::string root = opts.output.value_or("runs");
  if (!opts.input.empty()) {
    const rblab::RBDataset data = rblab::dataset_from_table(rblab::read_csv(opts.input));
    const auto means = mean_by_length(data, 0);
    std::vector<double> y;
    int prev = -1;
    for (const auto& [m, p] : means) {
      if (prev >= 0 && m != prev + 1) throw ConfigError("--input: pole extraction needs consecutive lengths");
      prev = m;
      y.push_back(p);
    }
    const int L = opts.pencil > 0 ? opts.pencil : static_cast<int>(y.size()) / 2;
    Run run("extract-poles", args, opts, root);
    const rblab::RVec signal = Eigen::Map<const rblab::RVec>(y.data(), static_cast<Eigen::Index>(y.size()));
    auto est = rblab::esprit(signal, L, opts.n);
    est.coefficients = rblab::fit_coefficients(signal, est.poles);
    run.write("poles.csv", poles_table(est, nullptr), {{"first_length", means.begin()->first}});
    fmt::print("extracted {} poles from {} lengths\n", est.poles.size(), y.size());
    fmt::print("run directory: {}\n", run.dir().string());
    return kExitOk;
  }
  if (opts.family.empty()) throw ConfigError("--family or --input is required");
  const auto truth = rblab::pole_family(opts.family, opts.n);
  const int L = opts.pencil > 0 ? opts.pencil : opts.samples_m / 2;
  Run run("extract-poles", args, opts, root);
  rblab::PoleSet est;
  rblab::RVec y = rblab::synthesize_signal(truth, opts.samples_m);
  if (opts.exact) {
    est = rblab::esprit_exact(truth, opts.samples_m, L, opts.n);
  } else {
    if (opts.noise_shots > 0) y = rblab::binomial_sample(y, opts.noise_shots, opts.seed.value_or(1));
    est = rblab::esprit(y, L, opts.n);
  }
  est.coefficients = rblab::fit_coefficients(y, est.poles);
  const double h = rblab::hausdorff(est.poles, truth.poles);
  run.write("poles.csv", poles_table(est, &truth), {{"hausdorff", h}});
  run.write_report({{"hausdorff", h}, {"family", opts.family}, {"n", opts.n}});
  fmt::print("{}({}): Hausdorff distance {:.3e}\n", opts.family, opts.n, h);
  fmt::print("run directory: {}\n", run.dir().string());
  return kExitOk;
}

int run_filter(const Options& opts) {
  const ExperimentConfig c = load_with_overrides(opts);
  if (c.protocol.kind != "filtered") throw ConfigError("/protocol/kind: filter needs kind 'filtered'");
  const Experiment ex = build_experiment(c);
  const auto& catalog = require_catalog(ex, "filter");
  Run run("filter", c.echo(), opts, c.output);
  const rblab::ExactEngine engine(ex.rb, catalog);
  CsvTable t;
  t.header = {"irrep", "m", "k_exact", "k_hat", "std_error"};
  CsvTable ft;
  ft.header = {"irrep", "normalization", "rate_exact", "rate_estimate"};
  json fits = json::object();
  for (const auto& label : c.protocol.irreps) {
    const rblab::FilterSpec spec(ex.bundle.omega, catalog, label, ex.rb.rho0, ex.rb.povm);
    std::vector<double> exact;
    std::vector<double> est;
    for (size_t li = 0; li < c.lengths.size(); ++li) {
      const int m = c.lengths[li];
      const rblab::FilterSampling fs{c.protocol.samples, rblab::stream_seed(c.seed, li, 0),
                                     c.protocol.explicit_inversion, c.threads};
      const auto e = rblab::estimate_filtered(ex.rb, spec, m, fs);
      const double k = rblab::filtered_data(engine, spec, m).real();
      exact.push_back(k);
      est.push_back(e.k_hat);
      t.add_row({label, std::to_string(m), format_double(k), format_double(e.k_hat), format_double(e.std_error)});
    }
    auto rate = [&](const std::vector<double>& y) {
      try {
        return rblab::fit_rb_decay(c.lengths, y).rate;
      } catch (const rblab::Error&) {
        return std::nan("");
      }
    };
    const double re = c.lengths.size() >= 3 ? rate(exact) : std::nan("");
    const double rh = c.lengths.size() >= 3 ? rate(est) : std::nan("");
    ft.add_row({label, format_double(spec.normalization().real()), format_double(re), format_double(rh)});
    fits[label] = {{"rate_exact", re}, {"rate_estimate", rh}};
    fmt::print("{}: N = {:.6g}, exact decay rate {:.9f}, estimated {:.6f}\n", label, spec.normalization().real(), re,
               rh);
  }
  run.write("filter.csv", t);
  run.write("filter_fit.csv", ft);
  run.write_report(fits);
  fmt::print("run directory: {}\n", run.dir().string());
  return kExitOk;
}

int run_gauge_report(const Options& opts) {
  const ExperimentConfig c = load_with_overrides(opts);
  const Experiment ex = build_experiment(c);
  const auto& catalog = require_catalog(ex, "gauge-report");
  Run run("gauge-report", c.echo(), opts, c.output);
  const auto gauge = rblab::depolarizing_gauge(ex.rb.phi, ex.bundle.omega, catalog);
  const auto fid = rblab::gauge_fidelity(ex.rb.phi, gauge);
  const auto dec = rblab::fidelity_decomposition(ex.rb.phi, ex.bundle.omega, catalog, gauge.r);
  CsvTable t;
  t.header = {"irrep",       "irrep_dim",   "f_max_re",       "f_max_im", "overlap_re", "overlap_im",
              "dominant_re", "residuum_re", "residuum_scale", "regime"};
  for (const auto& term : dec.terms)
    t.add_row({term.label, std::to_string(term.irrep_dim), cplx_re(term.f_max), cplx_im(term.f_max),
               cplx_re(term.overlap), cplx_im(term.overlap), cplx_re(term.dominant_term), cplx_re(term.residuum),
               format_double(term.residuum_scale), term.regime});
  json summary = {{"alpha_res", dec.alpha_res},
                  {"total", dec.total},
                  {"parseval", dec.parseval},
                  {"direct_average", dec.direct_average},
                  {"perturbed", dec.perturbed},
                  {"gauge_average_fidelity", fid.gauge_average},
                  {"depolarizing_fidelity", fid.depolarizing},
                  {"relation_residual", gauge.relation_residual},
                  {"biorthogonality", gauge.biorthogonality}};
  double min_choi = std::numeric_limits<double>::infinity();
  for (int g = 0; g < ex.bundle.group->order(); ++g) {
    const Eigen::SelfAdjointEigenSolver<rblab::CMat> es(rblab::to_choi(rblab::gauge_noise(ex.rb.phi, gauge, g)),
                                                        Eigen::EigenvaluesOnly);
    min_choi = std::min(min_choi, es.eigenvalues().minCoeff());
  }
  const bool noise_cp = min_choi >= -1e-9;
  summary["gauge_noise_min_choi"] = min_choi;
  summary["gauge_noise_cp"] = noise_cp;
  run.write("gauge.csv", t, {{"summary", summary}});
  if (opts.cp_scan) {
    std::vector<double> alphas;
    for (int k = 1; k <= 9; ++k) alphas.push_back(k / 10.0);
    const auto rows = rblab::cp_violation_scan(alphas, {0.0, 0.25, 0.5, 0.75, 1.0});
    CsvTable st;
    st.header = {"alpha", "gamma", "min_choi_phi", "min_choi_noise", "phi_cp", "noise_non_cp"};
    for (const auto& r : rows)
      st.add_row({format_double(r.alpha), format_double(r.gamma), format_double(r.min_choi_phi),
                  format_double(r.min_choi_noise), r.phi_cp ? "1" : "0", r.noise_non_cp ? "1" : "0"});
    run.write("cp_scan.csv", st);
  }
  run.write_report(summary);
  fmt::print("entanglement fidelity: decomposition {:.12f}, Parseval {:.12f}, direct {:.12f}; min Choi eigenvalue of the gauge noise {:.3e}\n",
             dec.total, dec.parseval, dec.direct_average, min_choi);
  fmt::print("run directory: {}\n", run.dir().string());
  return kExitOk;
}

int run_conditioning_study(const Options& opts) {
  std::vector<rblab::cplx> z;
  if (!opts.family.empty()) {
    if (opts.n < 1) throw ConfigError("--n: expected a positive pole count");
    z = rblab::pole_family(opts.family, opts.n).poles;
  } else {
    for (double p : opts.poles) z.emplace_back(p, 0.0);
  }
  if (z.empty()) throw ConfigError("--poles or --family is required");
  std::vector<int> sizes = opts.sizes;
  if (sizes.empty()) sizes = {10, 20, 50, 100, 200, 400, 800, 1600};
  json args = {{"family", opts.family}, {"n", opts.n}, {"poles", opts.poles}, {"sizes", sizes},
               {"var_bound", opts.var_bound}, {"eps", opts.eps}, {"delta", opts.delta}};
  Run run("conditioning-study", args, opts, opts.output.value_or("runs"));
  const double limit = rblab::asymptotic_cond(z);
  CsvTable t;
  t.header = {"M", "cond2", "asymptotic", "relative_gap", "bernstein_samples", "sampling_complexity"};
  for (int M : sizes) {
    const double c2 = rblab::cond2(z, M);
    t.add_row({std::to_string(M), format_double(c2), format_double(limit), format_double(std::abs(c2 / limit - 1.0)),
               std::to_string(rblab::bernstein_samples(M, opts.var_bound, opts.eps, opts.delta)),
               std::to_string(rblab::sampling_complexity(z, M, opts.var_bound, opts.eps, opts.delta))});
    fmt::print("M = {:5d}: cond2 = {:.6f} (limit {:.6f})\n", M, c2, limit);
  }
  run.write("conditioning.csv", t, {{"asymptotic", limit}});
  fmt::print("run directory: {}\n", run.dir().string());
  return kExitOk;
}

int run_xeb(const Options& opts) {
  const ExperimentConfig c = load_with_overrides(opts);
  if (c.protocol.kind != "xeb") throw ConfigError("/protocol/kind: xeb needs kind 'xeb'");
  if (c.noise.model != "depolarizing" && c.noise.model != "ideal")
    throw ConfigError("/noise/model: xeb supports depolarizing and ideal noise");
  const int q = c.protocol.qubits;
  const int d = 1 << q;
  rblab::XebNoise noise{rblab::depolarizing(d, c.noise.model == "ideal" ? 0.0 : c.noise.p), {}, {}};
  if (c.noise.spam_prep) noise.spam_prep = rblab::depolarizing(d, *c.noise.spam_prep);
  if (c.noise.spam_meas) noise.spam_meas = rblab::depolarizing(d, *c.noise.spam_meas);
  Run run("xeb", c.echo(), opts, c.output);
  CsvTable t;
  t.header = {"m", "f_exact", "f_hat", "std_error"};
  std::vector<double> exact;
  for (size_t li = 0; li < c.lengths.size(); ++li) {
    const int m = c.lengths[li];
    if (m < 1) throw ConfigError("/lengths: xeb needs lengths >= 1");
    const double f = rblab::xeb_exact(q, noise, m);
    const auto mc = rblab::xeb_monte_carlo(q, noise, m, c.protocol.samples, rblab::stream_seed(c.seed, li, 0));
    exact.push_back(f);
    t.add_row({std::to_string(m), format_double(f), format_double(mc.f_hat), format_double(mc.std_error)});
  }
  const auto [trivial, adjoint] = rblab::xeb_twirl_eigenvalues(noise.gate);
  const auto norm = rblab::xeb_normalization(q, c.protocol.samples, rblab::stream_seed(c.seed, c.lengths.size(), 0));
  json summary = {{"twirl_trivial", trivial},
                  {"twirl_adjoint", adjoint},
                  {"normalization", norm.value},
                  {"normalization_expected", norm.expected},
                  {"normalization_std_error", norm.std_error},
                  {"haar_integral", norm.raw_integral}};
  if (c.lengths.size() >= 3) summary["fit"] = fit_json(rblab::fit_rb_decay(c.lengths, exact));
  run.write("xeb.csv", t, {{"summary", summary}});
  run.write_report(summary);
  fmt::print("xeb: adjoint eigenvalue {:.9f}, normalization {:.5f} (expected {:.5f})\n", adjoint, norm.value,
             norm.expected);
  fmt::print("run directory: {}\n", run.dir().string());
  return kExitOk;
}

}  // namespace rbcli
