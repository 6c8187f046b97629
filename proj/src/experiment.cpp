#include "dynsense/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "dynsense/channel.hpp"
#include "dynsense/geometry.hpp"
#include "dynsense/metrics.hpp"
#include "dynsense/query.hpp"
#include "dynsense/signal.hpp"

namespace dynsense {

namespace {

struct SimulationSetup {
  PathLossMatrix gains;
  QuerySet primary;
  QuerySet extra;
};

SimulationSetup build_setup(const ExperimentConfig& config, std::uint64_t seed) {
  Rng layout_rng = make_stream(seed, streams::kLayout);
  Rng query_rng = make_stream(seed, streams::kQuery);
  SimulationSetup setup;
  if (config.layout.circular()) {
    const auto layout = CircularLayout::build(config.layout.emitters, config.layout.sensors, config.layout.circles,
                                              config.layout.emitter_radius, config.layout.radii, layout_rng);
    setup.gains = build_path_loss_matrix(layout, config.channel.offset_k);
    setup.primary = select_query_circular(layout, config.query.q, query_rng);
    setup.extra = select_extra_random(layout.num_sensors(), setup.primary, config.query.q_extra, query_rng);
  } else {
    const auto grid = GridLayout::build(config.layout.cells, config.layout.side, layout_rng);
    setup.gains = build_path_loss_matrix(grid, config.channel.offset_k);
    setup.primary = select_query_grid(config.layout.cells, config.query.q);
    setup.extra = select_extra_grid(config.layout.cells, setup.primary, config.query.q_extra);
  }
  return setup;
}

MeasurementFrame measure(const ExperimentConfig& config, const PathLossMatrix& gains, const SignalState& state,
                         Rng& rng) {
  if (config.channel.fidelity == Fidelity::Surrogate)
    return measure_window_surrogate(gains, state, config.channel.window, config.noise_var(), rng,
                                    config.channel.calibration);
  return measure_window(config.channel.fidelity, gains, state, config.channel.window, config.noise_var(), rng);
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_error_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

SimulationRun run_simulation(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  const MarkovOnOff chain = config.chain();
  chain.validate();
  const SimulationSetup setup = build_setup(config, seed);
  const FusionCenter center(setup.gains, config.fusion_config(), setup.primary, setup.extra);

  Rng signal_rng = make_stream(seed, streams::kSignal);
  Rng channel_rng = make_stream(seed, streams::kChannel);
  const std::size_t n = config.num_emitters();

  SignalState state = initial_state(n, chain, signal_rng);
  FusionState fusion;
  fusion.window = -1;
  fusion.estimate = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  MeasurementFrame previous;

  SimulationRun run;
  run.windows.reserve(config.sim.windows);
  std::vector<double> distances;
  for (std::size_t k = 0; k < config.sim.windows; ++k) {
    std::size_t changes = 0;
    if (k > 0) {
      SignalState next = config.signal.max_changes > 0
                             ? step_signal_capped(state, chain, config.signal.max_changes, signal_rng)
                             : step_signal(state, chain, signal_rng);
      changes = count_changes(state, next);
      state = std::move(next);
    }
    MeasurementFrame frame = measure(config, setup.gains, state, channel_rng);
    auto [next_fusion, result] = center.step(fusion, frame, k == 0 ? frame : previous);
    fusion = std::move(next_fusion);
    previous = std::move(frame);

    WindowRecord rec;
    rec.window = result.window;
    rec.mode = result.mode;
    rec.queried = result.queried;
    rec.cv_error = result.cv_error;
    rec.distance = set_distance(estimate_support(fusion.estimate, config.signal.power), state.support(), n);
    rec.solver_iterations = result.solver_iterations;
    rec.solver_converged = result.solver_converged;
    rec.changes = changes;
    distances.push_back(rec.distance);

    auto& s = run.summary;
    if (rec.mode == Mode::Dynamics)
      ++s.dynamics_windows;
    else if (rec.mode == Mode::PartialReset)
      ++s.partial_resets;
    else
      ++s.full_resets;
    if (!rec.solver_converged) ++s.nonconverged;
    run.windows.push_back(rec);
  }

  auto& s = run.summary;
  s.avg_distance = average_distance(distances);
  const BandwidthReport bw = bandwidth(s.dynamics_windows, s.partial_resets, s.full_resets, config.query.q,
                                       config.query.q_extra, config.num_sensors());
  s.bandwidth = bw.bandwidth;
  s.savings = bw.savings;
  return run;
}

std::vector<SweepCell> enumerate_sweep(const SweepSection& sweep) {
  auto eps = sweep.eps;
  auto periods = sweep.reset_period;
  auto nu = sweep.nu;
  std::sort(eps.begin(), eps.end());
  std::sort(periods.begin(), periods.end());
  std::sort(nu.begin(), nu.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  periods.erase(std::unique(periods.begin(), periods.end()), periods.end());
  nu.erase(std::unique(nu.begin(), nu.end()), nu.end());
  std::vector<SweepCell> cells;
  for (double e : eps)
    for (int t : periods)
      for (double v : nu) cells.push_back({cells.size() + 1, e, t, v});
  return cells;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::uint64_t seed, std::size_t trials) {
  config.validate();
  if (trials == 0) throw std::invalid_argument("sweep: trials must be >= 1");
  const auto cells = enumerate_sweep(config.sweep);
  const std::size_t jobs = cells.size() * trials;
  std::vector<std::optional<RunSummary>> results(jobs);
  std::vector<std::string> errors(jobs);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(jobs); ++j) {
    const auto job = static_cast<std::size_t>(j);
    const SweepCell& cell = cells[job / trials];
    ExperimentConfig local = config;
    local.fusion.eps = cell.eps * config.signal.power;
    local.fusion.reset_period = cell.reset_period;
    local.fusion.nu = cell.nu * config.signal.power;
    try {
      results[job] = run_simulation(local, derive_seed(seed, job % trials)).summary;
    } catch (const std::exception& e) {
      errors[job] = e.what();
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    SweepRow row;
    row.cell = cells[c];
    std::vector<double> dist;
    for (std::size_t t = 0; t < trials; ++t) {
      const std::size_t job = c * trials + t;
      if (!results[job]) {
        if (row.error.empty()) row.error = errors[job];
        continue;
      }
      const RunSummary& s = *results[job];
      dist.push_back(s.avg_distance);
      row.bandwidth += s.bandwidth;
      row.savings += s.savings;
      row.dynamics_windows += static_cast<double>(s.dynamics_windows);
      row.partial_resets += static_cast<double>(s.partial_resets);
      row.full_resets += static_cast<double>(s.full_resets);
    }
    row.trials = dist.size();
    if (row.trials > 0) {
      const auto n = static_cast<double>(row.trials);
      row.avg_distance = mean_of(dist);
      row.distance_std_error = std_error_of(dist);
      row.bandwidth /= n;
      row.savings /= n;
      row.dynamics_windows /= n;
      row.partial_resets /= n;
      row.full_resets /= n;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BaselineRow> run_baseline(const ExperimentConfig& config, std::uint64_t seed, std::size_t trials) {
  config.validate();
  if (trials == 0) throw std::invalid_argument("baseline: trials must be >= 1");
  const auto& windows = config.baseline.windows;
  const std::size_t jobs = windows.size() * trials;
  std::vector<std::vector<double>> distances(jobs);
  std::vector<std::string> errors(jobs);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(jobs); ++j) {
    const auto job = static_cast<std::size_t>(j);
    ExperimentConfig local = config;
    local.channel.window = windows[job / trials];
    local.fusion.reset_period = 1;
    try {
      const SimulationRun run = run_simulation(local, derive_seed(seed, job % trials));
      for (const auto& w : run.windows) distances[job].push_back(w.distance);
    } catch (const std::exception& e) {
      errors[job] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("baseline: " + e);

  std::vector<BaselineRow> rows;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    BaselineRow row;
    row.window = windows[w];
    row.trials = trials;
    std::vector<double> means;
    for (std::size_t t = 0; t < trials; ++t) means.push_back(mean_of(distances[w * trials + t]));
    row.avg_distance = mean_of(means);
    row.std_error = trials > 1 ? std_error_of(means) : std_error_of(distances[w * trials]);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

CertifyInstance make_certify_instance(const ExperimentConfig& config, std::uint64_t seed, std::size_t q) {
  Rng layout_rng = make_stream(seed, streams::kLayout);
  Rng query_rng = make_stream(seed, streams::kQuery);
  Rng sign_rng = make_stream(seed, streams::kCertify);
  auto layout = CircularLayout::build(config.layout.emitters, config.layout.sensors, config.layout.circles,
                                      config.layout.emitter_radius, config.layout.radii, layout_rng);
  auto query = select_query_circular(layout, q, query_rng);
  auto matrix = build_processed(layout, query, config.channel.offset_k, sign_rng);
  return {std::move(layout), std::move(query), std::move(matrix)};
}

RipEstimate estimate_rip(const Eigen::MatrixXd& m, std::size_t order, std::size_t draws, Rng& rng) {
  const std::size_t p = std::min(order, static_cast<std::size_t>(m.cols()));
  if (binomial(static_cast<std::size_t>(m.cols()), p) <= kMaxEnumeratedSupports)
    return estimate_rip_exhaustive(m, order);
  return estimate_rip_sampled(m, order, draws, rng);
}

namespace {

// Smallest even q >= 4 S ln N.
std::size_t recovery_query_size(std::size_t sparsity, std::size_t emitters) {
  const double raw = 4.0 * static_cast<double>(sparsity) * std::log(static_cast<double>(emitters));
  auto q = static_cast<std::size_t>(std::ceil(raw - 1e-12));
  q += q % 2;
  return std::max<std::size_t>(q, 2);
}

CertifyRow check_at_most(std::string check, std::string statistic, double value, std::size_t samples,
                         double tolerance) {
  return {std::move(check), std::move(statistic), value, samples, tolerance, value <= tolerance};
}

CertifyRow info(std::string check, std::string statistic, double value, std::size_t samples) {
  return {std::move(check), std::move(statistic), value, samples, std::numeric_limits<double>::quiet_NaN(), true};
}

}  // namespace

std::vector<CertifyRow> run_certify(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate_certify();
  const auto& cc = config.certify;
  const double k = config.channel.offset_k;
  const std::size_t n = cc.samples;
  const CertifyInstance inst = make_certify_instance(config, seed, cc.q);
  const auto& layout = inst.layout;
  std::vector<CertifyRow> rows;

  const IsotropyReport iso = certify_isotropy(layout, inst.query, k, n, derive_seed(seed, 101));
  rows.push_back(check_at_most("isotropy", "max_abs_deviation", iso.max_deviation, n, 0.05));
  rows.push_back(check_at_most("isotropy", "max_z_diagonal", iso.max_z_diagonal, n, 3.0));
  rows.push_back(check_at_most("isotropy", "max_z_off_diagonal", iso.max_z_off_diagonal, n, 3.0));

  Rng rng = make_stream(derive_seed(seed, 102), streams::kCertify);
  for (std::size_t c = 0; c < layout.num_circles(); ++c) {
    const std::string tag = "_c" + std::to_string(c + 1);
    const SymmetryReport sym = certify_symmetry_exchangeability(layout, c, k, n, rng);
    const double mean_z = sym.mean_std_error > 0.0 ? std::abs(sym.mean) / sym.mean_std_error : 0.0;
    rows.push_back(check_at_most("centering" + tag, "abs_mean_z", mean_z, n, 3.0));
    rows.push_back(check_at_most("symmetry" + tag, "cdf_gap", sym.cdf_symmetry_gap, n, sym.tolerance));
    rows.push_back(info("symmetry" + tag, "skewness", sym.skewness, n));
    rows.push_back(check_at_most("exchangeability" + tag, "joint_cdf_gap", sym.exchangeability_gap, n, sym.tolerance));
  }

  const auto pairs = certify_pair_variances(layout, k, n, rng);
  for (std::size_t c = 0; c < layout.num_circles(); ++c) {
    const std::string tag = "_c" + std::to_string(c + 1);
    const double r = layout.circle_radii()[c];
    const double base = variance_of_g(r, layout.emitter_radius(), k, layout.sensors()[layout.partition(c)[0]].angle());
    double spread = 0.0;
    for (std::size_t p = 1; 2 * p < layout.partition(c).size(); ++p) {
      const double angle = layout.sensors()[layout.partition(c)[2 * p]].angle();
      spread = std::max(spread, std::abs(variance_of_g(r, layout.emitter_radius(), k, angle) - base));
    }
    rows.push_back(info("pair_variance" + tag, "quadrature", base, 0));
    rows.push_back(check_at_most("pair_variance" + tag, "quadrature_spread", spread, 0, 1e-9));
    double worst_z = 0.0;
    for (const auto& pv : pairs)
      if (pv.circle == c && pv.std_error > 0.0)
        worst_z = std::max(worst_z, std::abs(pv.estimate - pv.quadrature) / pv.std_error);
    rows.push_back(check_at_most("pair_variance" + tag, "max_z_vs_quadrature", worst_z, n, 3.0));
  }

  {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::vector<double> angles(cc.angles);
    for (auto& a : angles) a = angle(rng);
    auto counts = cc.counts;
    std::sort(counts.begin(), counts.end());
    const auto points = certify_norm_convergence(layout.circle_radii()[0], layout.emitter_radius(), k, counts, angles);
    std::vector<double> worst(counts.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i)
      worst[i / angles.size()] = std::max(worst[i / angles.size()], points[i].deviation);
    for (std::size_t c = 0; c < counts.size(); ++c)
      rows.push_back(info("norm_convergence", "max_deviation_at_" + std::to_string(counts[c]), worst[c], angles.size()));
    std::size_t improved = 0;
    const std::size_t last = (counts.size() - 1) * angles.size();
    for (std::size_t a = 0; a < angles.size(); ++a)
      improved += points[last + a].deviation < points[a].deviation ? 1 : 0;
    const double frac = static_cast<double>(improved) / static_cast<double>(angles.size());
    rows.push_back({"norm_convergence", "fraction_improved", frac, angles.size(), 1.0, frac >= 1.0});
    rows.push_back(check_at_most("norm_convergence", "max_deviation_largest", worst.back(), angles.size(), 0.05));
  }

  {
    const std::size_t small = 10000;
    const auto few = sample_processed_entries(layout, inst.query, k, 0, small, rng);
    const auto many = sample_processed_entries(layout, inst.query, k, 0, n, rng);
    const double psi_small = estimate_subgaussian_norm(few);
    const double psi = estimate_subgaussian_norm(many);
    rows.push_back(info("subgaussian", "psi_hat", psi, n));
    rows.push_back(check_at_most("subgaussian", "relative_change", std::abs(psi - psi_small) / psi, n, 0.1));
  }

  {
    const IndependenceReport ind = certify_column_independence(layout, inst.query, k, n, rng);
    const double tol = 4.0 / std::sqrt(static_cast<double>(n));
    rows.push_back(check_at_most("independence", "max_entry_correlation", ind.max_entry_correlation, n, tol));
    rows.push_back(check_at_most("independence", "max_square_correlation", ind.max_square_correlation, n, tol));
  }

  {
    const Eigen::MatrixXd& a = inst.matrix.processed;
    const Eigen::VectorXd norms = a.colwise().norm();
    const Eigen::MatrixXd unit = a * norms.cwiseInverse().asDiagonal() * std::sqrt(static_cast<double>(a.rows()));
    rows.push_back(check_at_most("rip", "order1_normalized", estimate_rip_exhaustive(unit, 1).constant, 0, 1e-12));
    const RipEstimate e = estimate_rip(a, cc.order, cc.rip_draws, rng);
    rows.push_back(info("rip", "order" + std::to_string(cc.order) +
                                   (e.method == RipMethod::Exhaustive ? "_exhaustive" : "_sampled"),
                        e.constant, e.supports_checked));
  }

  {
    const std::size_t s = cc.sparsity;
    const std::size_t q = std::min(recovery_query_size(s, config.layout.emitters), config.layout.sensors);
    std::size_t passed = 0, solver_failures = 0, inconsistent = 0;
    for (std::size_t t = 0; t < cc.layouts; ++t) {
      const CertifyInstance trial = make_certify_instance(config, derive_seed(seed, 1000 + t), q);
      const NspResult res = nsp_recovery_oracle(trial.matrix.processed, s);
      passed += res.pass ? 1 : 0;
      solver_failures += res.solver_failure ? 1 : 0;
      const std::size_t order = std::min(2 * s, config.layout.emitters);
      if (binomial(config.layout.emitters, order) <= kMaxEnumeratedSupports &&
          estimate_rip_exhaustive(trial.matrix.processed, order).constant <= 0.4531 && !res.pass)
        ++inconsistent;
    }
    const double rate = static_cast<double>(passed) / static_cast<double>(cc.layouts);
    rows.push_back(info("recovery_oracle", "query_size", static_cast<double>(q), cc.layouts));
    rows.push_back({"recovery_oracle", "pass_rate", rate, cc.layouts, 0.9, rate >= 0.9});
    rows.push_back(info("recovery_oracle", "solver_failures", static_cast<double>(solver_failures), cc.layouts));
    rows.push_back(check_at_most("rip_recovery_consistency", "violations", static_cast<double>(inconsistent),
                                 cc.layouts, 0.0));
  }
  return rows;
}

std::vector<RipRow> run_rip(const ExperimentConfig& config, std::uint64_t seed, std::size_t trials) {
  config.validate_certify();
  std::vector<RipRow> rows;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, t);
    const CertifyInstance inst = make_certify_instance(config, s, config.certify.q);
    Rng rng = make_stream(s, streams::kCertify + 100);
    for (std::size_t p = 1; p <= config.certify.order; ++p)
      rows.push_back({t, config.certify.q, config.layout.emitters,
                      estimate_rip(inst.matrix.processed, p, config.certify.rip_draws, rng)});
  }
  return rows;
}

std::vector<NspRow> run_nsp(const ExperimentConfig& config, std::uint64_t seed, std::size_t trials) {
  config.validate_certify();
  std::vector<NspRow> rows;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, t);
    const CertifyInstance inst = make_certify_instance(config, s, config.certify.q);
    Rng rng = make_stream(s, streams::kCertify + 100);
    NspRow row;
    row.trial = t;
    row.q = config.certify.q;
    row.emitters = config.layout.emitters;
    row.result = nsp_recovery_oracle(inst.matrix.processed, config.certify.sparsity);
    const RipEstimate e = estimate_rip(inst.matrix.processed, 2 * config.certify.sparsity, config.certify.rip_draws, rng);
    row.rip_constant = e.constant;
    row.rip_exhaustive = e.method == RipMethod::Exhaustive;
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  return format_number(v);
}

std::string join_indices(const std::vector<std::size_t>& idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) out += (i ? " " : "") + std::to_string(idx[i] + 1);
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

}  // namespace

void write_windows_csv(std::ostream& out, const ExperimentConfig& config, const SimulationRun& run) {
  out << config_comment_block(config, "simulate");
  out << "k,mode,queried_count,e,distance_k,solver_iters,solver_converged,changes\n";
  for (const auto& w : run.windows)
    out << w.window << ',' << to_string(w.mode) << ',' << w.queried << ',' << num(w.cv_error) << ','
        << num(w.distance) << ',' << w.solver_iterations << ',' << (w.solver_converged ? 1 : 0) << ',' << w.changes
        << '\n';
}

void write_summary_csv(std::ostream& out, const ExperimentConfig& config, const SimulationRun& run) {
  const auto& s = run.summary;
  out << config_comment_block(config, "simulate");
  out << "config_id,avg_distance,bandwidth,savings,T_d,T_sr,T_r,nonconverged\n";
  out << 0 << ',' << num(s.avg_distance) << ',' << num(s.bandwidth) << ',' << num(s.savings) << ','
      << s.dynamics_windows << ',' << s.partial_resets << ',' << s.full_resets << ',' << s.nonconverged << '\n';
}

void write_sweep_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<SweepRow>& rows) {
  out << config_comment_block(config, "sweep");
  out << "index,eps_over_P,T_err,nu_over_P,trials,avg_distance,distance_se,bandwidth,savings,T_d,T_sr,T_r,status\n";
  for (const auto& r : rows)
    out << r.cell.index << ',' << num(r.cell.eps) << ',' << r.cell.reset_period << ',' << num(r.cell.nu) << ','
        << r.trials << ',' << num(r.avg_distance) << ',' << num(r.distance_std_error) << ',' << num(r.bandwidth)
        << ',' << num(r.savings) << ',' << num(r.dynamics_windows) << ',' << num(r.partial_resets) << ','
        << num(r.full_resets) << ',' << (r.error.empty() ? std::string("ok") : csv_field("error: " + r.error))
        << '\n';
}

void write_baseline_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<BaselineRow>& rows) {
  out << config_comment_block(config, "baseline");
  out << "W,avg_distance,std_error,trials\n";
  for (const auto& r : rows)
    out << r.window << ',' << num(r.avg_distance) << ',' << num(r.std_error) << ',' << r.trials << '\n';
}

void write_certify_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<CertifyRow>& rows) {
  out << config_comment_block(config, "certify");
  out << "check,statistic,value,samples,tolerance,pass\n";
  for (const auto& r : rows)
    out << r.check << ',' << r.statistic << ',' << num(r.value) << ',' << r.samples << ',' << num(r.tolerance) << ','
        << (std::isnan(r.tolerance) ? "info" : (r.pass ? "pass" : "fail")) << '\n';
}

void write_rip_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<RipRow>& rows) {
  out << config_comment_block(config, "rip");
  out << "trial,q,N,order,constant,method,supports_checked\n";
  for (const auto& r : rows)
    out << r.trial << ',' << r.q << ',' << r.emitters << ',' << r.estimate.order << ',' << num(r.estimate.constant)
        << ',' << (r.estimate.method == RipMethod::Exhaustive ? "exhaustive" : "sampled") << ','
        << r.estimate.supports_checked << '\n';
}

void write_nsp_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<NspRow>& rows) {
  out << config_comment_block(config, "nsp");
  out << "trial,q,N,S,pass,solver_failure,problems_checked,witness_support,witness_signs,rip_2S,rip_method\n";
  for (const auto& r : rows) {
    std::string support, signs;
    if (r.result.witness) {
      support = join_indices(r.result.witness->support);
      for (std::size_t i = 0; i < r.result.witness->signs.size(); ++i)
        signs += (i ? " " : "") + std::string(r.result.witness->signs[i] > 0 ? "+" : "-");
    }
    out << r.trial << ',' << r.q << ',' << r.emitters << ',' << r.result.order << ',' << (r.result.pass ? 1 : 0)
        << ',' << (r.result.solver_failure ? 1 : 0) << ',' << r.result.problems_checked << ',' << support << ','
        << signs << ',' << num(r.rip_constant) << ',' << (r.rip_exhaustive ? "exhaustive" : "sampled") << '\n';
  }
}

}  // namespace dynsense
