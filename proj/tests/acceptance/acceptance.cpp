// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance               run all criteria
//   acceptance --criterion N run criterion N only
// Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rblab/csv.hpp"
#include "rblab/decay.hpp"
#include "rblab/filter.hpp"
#include "rblab/gauge.hpp"
#include "rblab/poles.hpp"
#include "support/generators.hpp"

using namespace rblab;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, std::string what) {
    pass = pass && ok;
    notes.push_back(fmt::format("{}[{}]", std::move(what), ok ? "ok" : "FAIL"));
  }
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // <= 0: no limit
  std::function<void(Outcome&)> run;
};

// n_lambda = |G|^-1 sum_g conj(chi_lambda(g)) Tr omega(g).
double character_multiplicity(const Representation& omega, const Irrep& irrep) {
  cplx s = 0.0;
  for (int g = 0; g < omega.group()->order(); ++g) s += std::conj(irrep.character[g]) * omega(g).trace();
  return s.real() / omega.group()->order();
}

// ---- 1 --------------------------------------------------------------------
void fourier_projectors(Outcome& out) {
  auto check_group = [&](const std::string& name, const GroupBundle& b, const IrrepCatalog& cat) {
    const auto blocks = fourier_transform(ImplementationMap::from_representation(b.omega), cat);
    double worst_idem = 0.0, worst_trace = 0.0;
    for (const auto& blk : blocks) {
      worst_idem = std::max(worst_idem, (blk.mat * blk.mat - blk.mat).norm());
      const double n = character_multiplicity(b.omega, cat.irreps()[blk.irrep]);
      worst_trace = std::max(worst_trace, std::abs(blk.mat.trace() - n));
    }
    out.check(worst_idem <= 1e-9, fmt::format("{} |F^2-F|={:.1e}", name, worst_idem));
    out.check(worst_trace <= 1e-8, fmt::format("{} |TrF-n|={:.1e}", name, worst_trace));
  };
  const auto p = build_pauli_group(1);
  check_group("pauli1", p, pauli_catalog(p));
  const auto c = build_clifford_1q();
  check_group("clifford1", c, clifford_1q_catalog(c));
}

// ---- 2 --------------------------------------------------------------------
void uniform_certification(Outcome& out) {
  const auto b = build_clifford_1q();
  const auto cat = clifford_1q_catalog(b);
  const auto omega = ImplementationMap::from_representation(b.omega);
  std::vector<int> lengths;
  for (int m = 5; m <= 60; ++m) lengths.push_back(m);
  for (double theta : {0.02, 0.05, 0.1}) {
    const auto phi = overrotation_own_axis(b, theta);
    const auto dist = mean_diamond_distance(phi, omega);
    RBConfig c{.phi = phi};
    c.lengths = lengths;
    c.rho0 = basis_state(2, 0);
    c.povm = survival_povm(2);
    c.schedule = SamplingSchedule::single(uniform_distribution(24));
    const ExactEngine engine(c, cat);
    const auto rep = verify_uniform_bound(engine, b.omega, dist);
    const double d = dist.delta;
    const double base = d * (1.0 + 2.0 * d / (1.0 - 5.0 * d));
    // The residual comes from the deflated blocks; p_exact - p_model cancels at
    // rounding level long before the bound does, so it only cross-checks.
    double worst = 0.0, cancel = 0.0;
    for (const auto& r : rep.rows) {
      worst = std::max(worst, std::abs(r.residual) / (8.0 * std::pow(base, r.m)));
      cancel = std::max(cancel, std::abs(std::abs(r.p_exact - r.p_model) - std::abs(r.residual)));
    }
    out.check(d <= 1.0 / 9.0, fmt::format("theta={} delta={:.5f}", theta, d));
    out.check(rep.rows.size() == lengths.size() && worst <= 1.0,
              fmt::format("theta={} max residual/bound={:.2e}", theta, worst));
    out.check(cancel <= 1e-12, fmt::format("theta={} ||exact-model|-|residual||={:.1e}", theta, cancel));
  }
}

// ---- 3 --------------------------------------------------------------------
void oracle_equivalence(Outcome& out) {
  std::mt19937_64 rng(3);
  const auto b = build_pauli_group(1);
  const auto& G = *b.group;
  const auto cat = pauli_catalog(b);
  for (int trial = 0; trial < 3; ++trial) {
    const auto phi = rbtest::random_cp_implementation(b, rng);
    const auto nu = rbtest::random_distribution(4, rng);
    RBConfig c{.phi = phi};
    c.g_end = trial;
    c.lengths = {1, 2, 3};
    c.rho0 = rbtest::random_state(2, rng);
    c.povm = computational_povm(2);
    c.schedule = SamplingSchedule::single(nu);
    const ExactEngine engine(c, cat);
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m) {
      int total = 1;
      for (int i = 0; i < m; ++i) total *= 4;
      std::vector<double> brute(c.povm.size(), 0.0);
      for (int idx = 0; idx < total; ++idx) {
        CMat state = c.rho0;
        double w = 1.0;
        int prod = G.identity();
        for (int i = 0, x = idx; i < m; ++i, x /= 4) {
          state = phi(x % 4).apply(state);
          w *= nu[x % 4];
          prod = G.mul(x % 4, prod);
        }
        state = phi(G.mul(c.g_end, G.inv(prod))).apply(state);
        for (size_t i = 0; i < c.povm.size(); ++i) brute[i] += w * (c.povm[i] * state).trace().real();
      }
      for (size_t i = 0; i < c.povm.size(); ++i)
        worst = std::max(worst, std::abs(engine.probability(static_cast<int>(i), m) - brute[i]));
    }
    out.check(worst <= 1e-10, fmt::format("trial {} max diff={:.1e}", trial, worst));
  }
}

// ---- 4 --------------------------------------------------------------------
void subset_bound(Outcome& out) {
  const auto b = build_clifford_1q();
  const auto cat = clifford_1q_catalog(b);
  int h = -1, s = -1;
  for (int g = 0; g < 24; ++g) {
    if (b.group->element_name(g) == "H") h = g;
    if (b.group->element_name(g) == "S") s = g;
  }
  const auto nu = generator_supported(24, {h, b.group->mul(h, s)}, {0.5, 0.5});
  const int mm = m_mix(nu, 0.01, *b.group);
  const auto phi = overrotation_own_axis(b, 0.003);
  const auto dist = mean_diamond_distance(phi, ImplementationMap::from_representation(b.omega));
  RBConfig c{.phi = phi};
  for (int m = mm; m < mm + 30; ++m) c.lengths.push_back(m);
  c.rho0 = basis_state(2, 0);
  c.povm = survival_povm(2);
  c.schedule = SamplingSchedule::single(nu);
  const ExactEngine engine(c, cat);
  const auto rep = verify_subset_bound(engine, b.omega, dist, mm);
  out.check(rep.delta_prime <= 0.01, fmt::format("m_mix={} delta'={:.4f}", mm, rep.delta_prime));
  const double bound = 4.0 * (rep.delta + rep.delta_prime);
  double worst = 0.0;
  for (const auto& r : rep.rows) worst = std::max(worst, std::abs(r.p_exact - r.p_model));
  out.check(rep.rows.size() == 30 && worst <= bound,
            fmt::format("delta={:.4f} max residual={:.2e} bound={:.3f}", rep.delta, worst, bound));
}

// ---- 5 --------------------------------------------------------------------
void esprit_recovery(Outcome& out) {
  double worst = 0.0;
  for (const char* fam : {"lin0.5", "lin0.9", "F1", "F2"})
    for (int n : {2, 4, 6}) {
      const auto truth = pole_family(fam, n);
      const double h = hausdorff(truth.poles, esprit_exact(truth, 100, 50, n).poles);
      worst = std::max(worst, h);
      if (h > 1e-6) out.check(false, fmt::format("{}({}) hausdorff={:.1e}", fam, n, h));
    }
  out.check(worst <= 1e-6, fmt::format("12 families max hausdorff={:.1e}", worst));
}

// ---- 6 --------------------------------------------------------------------
void noisy_threshold(Outcome& out) {
  const auto truth = pole_family("F1", 2);
  const int M = 100;
  const RVec y = synthesize_signal(truth, M);
  std::vector<double> medians;
  for (long long shots : {1000LL, 10000LL, 100000LL, 1000000LL}) {
    std::vector<double> h;
    for (int s = 0; s < 100; ++s) {
      const RVec yh = binomial_sample(y, shots, 1000 + s);
      try {
        h.push_back(hausdorff(esprit(yh, M / 2, 2).poles, truth.poles));
      } catch (const NumericError&) {
        h.push_back(std::numeric_limits<double>::infinity());
      }
    }
    std::sort(h.begin(), h.end());
    medians.push_back(0.5 * (h[49] + h[50]));
  }
  bool monotone = true;
  for (size_t k = 1; k < medians.size(); ++k) monotone = monotone && medians[k] < medians[k - 1];
  out.check(monotone, fmt::format("medians {:.1e} {:.1e} {:.1e} {:.1e}", medians[0], medians[1], medians[2],
                                  medians[3]));
  out.check(medians.back() < 1e-3, "median at N=1e6 below 1e-3");
}

// ---- 7 --------------------------------------------------------------------
void asymptotic_conditioning(Outcome& out) {
  const std::vector<cplx> z{0.9, 0.99};
  CMat c(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c(i, j) = 1.0 / (1.0 - z[i] * std::conj(z[j]));
  const RVec sv = Eigen::JacobiSVD<CMat>(c).singularValues();
  const double limit = std::sqrt(sv(0) / sv(sv.size() - 1));
  out.check(std::abs(asymptotic_cond(z) - limit) <= 1e-9 * limit, fmt::format("sqrt(kappa(C))={:.6f}", limit));
  double rel = 1.0;
  int reached = -1;
  for (int M : {100, 200, 400, 800, 1600, 3200}) {
    rel = std::abs(cond2(z, M) - limit) / limit;
    if (rel <= 0.01 && reached < 0) reached = M;
  }
  out.check(reached > 0 && rel <= 0.01, fmt::format("within 1% from M={} (M=3200 rel={:.1e})", reached, rel));
}

// ---- 8 --------------------------------------------------------------------
void bernstein_validity(Outcome& out) {
  const int M = 20;
  const double var = 0.25, eps = 0.05, delta = 0.1;
  const auto n_formula = static_cast<long long>(
      std::ceil(4.0 * std::max(M * var / (eps * eps), 2.0 / (3.0 * eps)) * std::log(M / delta)));
  const long long n = bernstein_samples(M, var, eps, delta);
  out.check(n == n_formula, fmt::format("N={}", n));
  const RVec y = synthesize_signal(pole_family("F1", 2), M).tail(M);
  const double fail_rate = 1.0 - empirical_hankel_deviation(y, n, eps, 500, 9);
  out.check(fail_rate <= 0.1 + 0.05, fmt::format("failure rate={:.3f}", fail_rate));
}

// ---- 9 --------------------------------------------------------------------
void filter_orthogonality(Outcome& out) {
  const auto b = build_pauli_group(1);
  const auto cat = pauli_catalog(b);
  const std::vector<std::pair<std::string, double>> axes{{"pauli:X", 0.97}, {"pauli:Y", 0.95}, {"pauli:Z", 0.93}};
  CMat ptm = CMat::Identity(4, 4);
  for (int k = 0; k < 3; ++k) ptm(k + 1, k + 1) = axes[k].second;
  RBConfig c{.phi = gate_independent(b, SuperOp(2, ptm))};
  c.randomize_end = true;
  for (int m = 1; m <= 20; ++m) c.lengths.push_back(m);
  // Magic state and 3-design POVM see every axis.
  c.rho0 = 0.5 * (CMat::Identity(2, 2) + (pauli_matrix(1) + pauli_matrix(2) + pauli_matrix(3)) / std::sqrt(3.0));
  c.povm = threedesign_povm(1).effects;
  c.schedule = SamplingSchedule::single(uniform_distribution(4));
  const ExactEngine engine(c, cat);
  const auto sectors = irrep_projectors(b.omega, cat);
  for (const auto& [label, rate] : axes) {
    const FilterSpec f(b.omega, cat, label, c.rho0, c.povm);
    std::vector<double> y;
    for (int m : c.lengths) y.push_back(filtered_data(engine, f, m).real());
    const auto fit = fit_single_exponential(y, 1);
    out.check(std::abs(fit.rate - rate) <= 1e-9, fmt::format("{} rate={:.12f}", label, fit.rate));
    double leak = 0.0;
    for (const auto& [other, unused] : axes) {
      if (other == label) continue;
      const CMat& p = sectors[cat.index_of(other)].projector;
      for (int m : c.lengths) leak = std::max(leak, std::abs(filtered_cross_data(engine, f, p, m)));
    }
    out.check(leak <= 1e-9, fmt::format("{} leakage={:.1e}", label, leak));
  }
}

// ---- 10 -------------------------------------------------------------------
void threedesign_machinery(Outcome& out) {
  for (int q : {1, 2}) {
    const auto mc = povm_moments(threedesign_povm(q), 100000, 5);
    const double d = 1 << q;
    const double haar2 = 2.0 / (d * (d + 1.0)), haar3 = 6.0 / (d * (d + 1.0) * (d + 2.0));
    out.check(std::abs(mc.second - haar2) <= 1e-3 && std::abs(mc.third - haar3) <= 1e-3,
              fmt::format("q={} moments dev {:.1e} {:.1e}", q, std::abs(mc.second - haar2), std::abs(mc.third - haar3)));
  }
  const auto cb = build_clifford_1q();
  const auto cc = clifford_1q_catalog(cb);
  const auto pov = threedesign_povm(1);
  const CMat rho = basis_state(2, 0);
  for (const std::string label : {"trivial", "adjoint"}) {
    const FilterSpec f(cb.omega, cc, label, rho, pov.effects);
    const double direct = normalization_double_sum(f, cb.omega, rho, pov.effects).real();
    const double printed = threedesign_normalization_printed(f.projector(), rho, pov.size());
    const double derived = threedesign_normalization(f.projector(), rho, pov.size());
    out.check(std::abs(printed - direct) <= 1e-10,
              fmt::format("{} printed closed form {:.10f} vs double sum {:.10f}", label, printed, direct));
    out.notes.push_back(fmt::format("{} rederived closed form {:.10f} (diff {:.1e})", label, derived,
                                    std::abs(derived - direct)));
  }
}

// ---- 11 -------------------------------------------------------------------
void xeb_filtered(Outcome& out) {
  const int q = 2, d = 4;
  const double p = 0.05;
  const SuperOp lambda = depolarizing(d, p);
  const RMat t = lambda.transfer_matrix();
  const double adjoint = (t.trace() - 1.0) / (d * d - 1.0);
  out.check(std::abs(adjoint - (1.0 - p)) <= 1e-12, fmt::format("adjoint eigenvalue={:.12f}", adjoint));
  std::vector<double> y;
  for (int m = 1; m <= 30; ++m) y.push_back(xeb_exact(q, XebNoise{lambda, {}, {}}, m));
  const auto fit = fit_constant_plus_exponential(y, 1);
  out.check(std::abs(fit.rate - adjoint) <= 1e-6, fmt::format("fitted rate={:.10f}", fit.rate));
  const auto norm = xeb_normalization(q, 100000, 3);
  const double expected = 2.0 * d / (d + 1.0);
  out.check(std::abs(norm.value - expected) <= 1e-3,
            fmt::format("normalization={:.6f} (se {:.1e}) vs {:.6f}", norm.value, norm.std_error, expected));
}

// ---- 12 -------------------------------------------------------------------
void gauge_pathology(Outcome& out) {
  std::vector<double> alphas;
  for (int k = 1; k <= 9; ++k) alphas.push_back(0.1 * k);
  const auto rows = cp_violation_scan(alphas, {0.0});
  int signature = 0;
  for (const auto& r : rows) signature += r.phi_cp && r.noise_non_cp;
  out.check(signature == 9, fmt::format("gamma=0 signature at {}/9 alphas", signature));

  const auto b = build_clifford_1q();
  const auto cat = clifford_1q_catalog(b);
  std::vector<double> angles;
  for (int g = 0; g < 24; ++g) angles.push_back(0.01 * (g % 7));
  const std::vector<std::pair<std::string, ImplementationMap>> models{
      {"overrotation", overrotation_own_axis(b, 0.05)},
      {"depolarizing", gate_independent(b, depolarizing(2, 0.03))},
      {"fixed-axis", overrotation_fixed_axis(b, Eigen::Vector3d(0.3, -0.5, 0.8).normalized(), angles)}};
  for (const auto& [name, phi] : models) {
    // Direct average of F_e(omega(g)^dag S phi(g) S^-1) = Tr(...)/d^2 in the depolarizing gauge.
    const CMat s = depolarizing_gauge(phi, b.omega, cat).r;
    const CMat s_inv = s.inverse();
    double direct = 0.0;
    for (int g = 0; g < 24; ++g) direct += (b.omega(g).adjoint() * s * phi(g).mat() * s_inv).trace().real() / 4.0;
    direct /= 24.0;
    const auto dec = fidelity_decomposition(phi, b.omega, cat, s);
    out.check(std::abs(dec.total - direct) <= 1e-8 && std::abs(dec.parseval - direct) <= 1e-8,
              fmt::format("{} total={:.10f} direct={:.10f}", name, dec.total, direct));
  }
}

// ---- 13 -------------------------------------------------------------------
void fidelity_vs_diamond(Outcome& out) {
  std::vector<int> lengths;
  for (int m = 1; m <= 200; ++m) lengths.push_back(m);
  const int levels = 8, qubits = 6;
  const auto ex = decay_vs_fidelity_example(levels, 0.95, qubits, lengths);
  const double bound = 1.0 - 2.0 * levels / double(1 << qubits);
  out.check(ex.fidelity_exact >= bound, fmt::format("fidelity={:.6f} >= {:.4f}", ex.fidelity_exact, bound));
  const double score = non_exponentiality_score(lengths, ex.p);
  out.check(score > 0.05, fmt::format("log-linear residual={:.4f}", score));
}

// ---- 14 -------------------------------------------------------------------
void determinism(Outcome& out) {
  const auto b = build_clifford_1q();
  RBConfig c{.phi = overrotation_own_axis(b, 0.05)};
  c.lengths = {1, 5, 20};
  c.rho0 = basis_state(2, 0);
  c.povm = survival_povm(2);
  c.schedule = SamplingSchedule::single(uniform_distribution(24));
  c.shots = 50;
  c.sequences = 40;
  c.seed = 11;
  const std::string ref = to_csv_string(dataset_table(run_rb(c, 1)));
  for (int threads : {2, 3, 8})
    out.check(to_csv_string(dataset_table(run_rb(c, threads))) == ref, fmt::format("simulate threads={}", threads));

  const auto cat = clifford_1q_catalog(b);
  const FilterSpec f(b.omega, cat, "adjoint", c.rho0, computational_povm(2));
  RBConfig fc = c;
  fc.povm = computational_povm(2);
  auto filtered_csv = [&](int threads) {
    FilterSampling o;
    o.samples = 5000;
    o.seed = 13;
    o.threads = threads;
    CsvTable t;
    t.header = {"sample", "value"};
    const auto v = filtered_samples(fc, f, 4, o);
    for (size_t k = 0; k < v.size(); ++k) t.add_row({std::to_string(k), format_double(v[k])});
    return to_csv_string(t);
  };
  const std::string fref = filtered_csv(1);
  for (int threads : {2, 4}) out.check(filtered_csv(threads) == fref, fmt::format("filter threads={}", threads));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-14)")->check(CLI::Range(1, 14));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "Fourier projector laws", 1, fourier_projectors},
      {2, "uniform decay certification", 120, uniform_certification},
      {3, "exact engine vs enumeration", 10, oracle_equivalence},
      {4, "subset RB bound", 120, subset_bound},
      {5, "ESPRIT exact recovery", 5, esprit_recovery},
      {6, "noisy recovery threshold", 300, noisy_threshold},
      {7, "asymptotic conditioning", 5, asymptotic_conditioning},
      {8, "matrix Bernstein validity", 120, bernstein_validity},
      {9, "filter orthogonality", 10, filter_orthogonality},
      {10, "3-design machinery", 60, threedesign_machinery},
      {11, "XEB as filtered RB", 180, xeb_filtered},
      {12, "gauge pathology", 60, gauge_pathology},
      {13, "fidelity vs diamond separation", 60, fidelity_vs_diamond},
      {14, "determinism across threads", 0, determinism},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.check(false, fmt::format("exception: {}", e.what()));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0) out.check(secs < c.time_limit_s, fmt::format("runtime {:.2f}s < {}s", secs, c.time_limit_s));
    all = all && out.pass;
    std::string detail;
    for (const auto& n : out.notes) detail += (detail.empty() ? "" : "; ") + n;
    fmt::print("criterion {:2d} {}: {} ({})\n", c.id, c.name, out.pass ? "PASS" : "FAIL", detail);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
