#include <catch_amalgamated.hpp>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dynsense/experiment.hpp"

using namespace dynsense;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

ExperimentConfig short_config(std::vector<std::string> overrides = {}) {
  overrides.insert(overrides.begin(), "sim.T=120");
  return parse_config("", overrides);
}

ExperimentConfig small_certify_config() {
  return parse_config("", {"layout.type=circular", "certify.samples=10000", "certify.layouts=3", "certify.angles=3",
                           "certify.counts=8,64", "certify.q=8"});
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Comment block first, then exactly one header row, then data rows of equal width.
void check_csv_shape(const std::string& text, const std::string& command, std::size_t data_rows) {
  const auto lines = lines_of(text);
  REQUIRE(!lines.empty());
  CHECK(lines.front() == "# dynsense " + command);
  std::size_t first = 0;
  while (first < lines.size() && lines[first].rfind('#', 0) == 0) ++first;
  REQUIRE(first < lines.size());
  const auto columns = std::count(lines[first].begin(), lines[first].end(), ',');
  CHECK(lines.size() - first - 1 == data_rows);
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    CHECK(lines[i].rfind('#', 0) != 0);
    if (lines[i].find('"') == std::string::npos) CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == columns);
  }
}

bool same_runs(const SimulationRun& a, const SimulationRun& b) {
  if (a.windows.size() != b.windows.size()) return false;
  for (std::size_t k = 0; k < a.windows.size(); ++k) {
    const auto& x = a.windows[k];
    const auto& y = b.windows[k];
    if (x.mode != y.mode || x.queried != y.queried || x.distance != y.distance || x.changes != y.changes) return false;
    if (!(x.cv_error == y.cv_error || (std::isnan(x.cv_error) && std::isnan(y.cv_error)))) return false;
  }
  return a.summary.avg_distance == b.summary.avg_distance && a.summary.bandwidth == b.summary.bandwidth;
}

}  // namespace

TEST_CASE("simulation is a function of config and seed") {
  const auto c = short_config();
  const auto a = run_simulation(c, 11);
  const auto b = run_simulation(c, 11);
  CHECK(same_runs(a, b));
  const auto other = run_simulation(c, 12);
  CHECK_FALSE(same_runs(a, other));
}

TEST_CASE("circular and sample-level simulations run") {
  const auto circ = run_simulation(
      short_config({"layout.type=circular", "query.q=16", "query.q_extra=4", "sim.T=40"}), 3);
  CHECK(circ.windows.size() == 40);
  CHECK(circ.windows.front().mode == Mode::FullReset);
  CHECK(circ.summary.bandwidth >= 20.0);
  CHECK(circ.summary.bandwidth <= 32.0);

  const auto samples = run_simulation(short_config({"channel.fidelity=samples", "channel.W=200", "sim.T=10"}), 3);
  CHECK(samples.windows.size() == 10);
}

TEST_CASE("capped dynamics respect the cap") {
  const auto run = run_simulation(short_config({"signal.max_changes=2"}), 4);
  for (const auto& w : run.windows) CHECK(w.changes <= 2);
}

TEST_CASE("invalid configurations are rejected before running") {
  CHECK_THROWS_AS(run_simulation(short_config({"query.q=60"}), 1), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(short_config({"sweep.eps=0"}), 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(short_config(), 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(run_baseline(short_config(), 1, 0), std::invalid_argument);
}

TEST_CASE("sweep cells enumerate lexicographically") {
  SweepSection s;
  s.eps = {1.0, 0.5, 1.0};
  s.reset_period = {8, 2};
  s.nu = {0.75, 0.25};
  const auto cells = enumerate_sweep(s);
  REQUIRE(cells.size() == 8);
  CHECK(cells[0].index == 1);
  CHECK(cells[0].eps == 0.5);
  CHECK(cells[0].reset_period == 2);
  CHECK(cells[0].nu == 0.25);
  CHECK(cells[1].nu == 0.75);
  CHECK(cells[2].reset_period == 8);
  CHECK(cells[4].eps == 1.0);
  CHECK(cells[7].index == 8);
}

TEST_CASE("a single-cell sweep reproduces simulate") {
  const auto c = short_config({"sweep.eps=0.5", "sweep.T_err=3", "sweep.nu=0.5", "fusion.eps=0.5",
                               "fusion.T_err=3", "fusion.nu=0.5"});
  const auto rows = run_sweep(c, 21, 1);
  REQUIRE(rows.size() == 1);
  const auto run = run_simulation(c, 21);
  CHECK(rows[0].trials == 1);
  CHECK(rows[0].error.empty());
  CHECK(rows[0].avg_distance == run.summary.avg_distance);
  CHECK(rows[0].bandwidth == run.summary.bandwidth);
  CHECK(rows[0].dynamics_windows == static_cast<double>(run.summary.dynamics_windows));
}

TEST_CASE("sweep rows do not depend on the worker count") {
  const auto c = short_config({"sweep.eps=0.5,2", "sweep.T_err=2,5", "sweep.nu=0.5", "sim.T=60"});
  const auto a = run_sweep(c, 5, 2);
  omp_set_num_threads(3);
  const auto b = run_sweep(c, 5, 2);
  omp_set_num_threads(1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].avg_distance == b[i].avg_distance);
    CHECK(a[i].bandwidth == b[i].bandwidth);
  }
}

TEST_CASE("baseline is direct recovery every window") {
  const auto c = short_config({"baseline.W=500", "channel.W=500"});
  const auto rows = run_baseline(c, 9, 1);
  REQUIRE(rows.size() == 1);
  auto direct = c;
  direct.fusion.reset_period = 1;
  const auto run = run_simulation(direct, 9);
  CHECK(rows[0].window == 500);
  CHECK(rows[0].avg_distance == Approx(run.summary.avg_distance).epsilon(1e-14));
  CHECK(run.summary.full_resets == run.windows.size());
}

TEST_CASE("simulation CSV layout") {
  const auto c = short_config({"sim.seed=2"});
  const auto run = run_simulation(c, 2);
  std::ostringstream windows, summary;
  write_windows_csv(windows, c, run);
  write_summary_csv(summary, c, run);
  check_csv_shape(windows.str(), "simulate", 120);
  check_csv_shape(summary.str(), "simulate", 1);
  CHECK_THAT(windows.str(), ContainsSubstring("# sim.seed = 2\n"));
  CHECK_THAT(windows.str(), ContainsSubstring("\nk,mode,queried_count,e,distance_k"));
  CHECK_THAT(windows.str(), ContainsSubstring("\n0,full_reset,49,,"));
  CHECK_THAT(summary.str(), ContainsSubstring("config_id,avg_distance,bandwidth,savings,T_d,T_sr,T_r"));
}

TEST_CASE("sweep and baseline CSV layout") {
  const auto c = short_config({"sweep.eps=0.5,1", "sweep.T_err=4", "sweep.nu=0.5", "baseline.W=250,500",
                               "sim.T=30"});
  std::ostringstream sweep, baseline;
  write_sweep_csv(sweep, c, run_sweep(c, 1, 1));
  write_baseline_csv(baseline, c, run_baseline(c, 1, 1));
  check_csv_shape(sweep.str(), "sweep", 2);
  check_csv_shape(baseline.str(), "baseline", 2);
  CHECK_THAT(sweep.str(), ContainsSubstring(",ok\n"));
}

TEST_CASE("certification instances are reproducible") {
  const auto c = small_certify_config();
  const auto a = make_certify_instance(c, 7, 8);
  const auto b = make_certify_instance(c, 7, 8);
  CHECK(a.matrix.processed == b.matrix.processed);
  CHECK(a.query.indices == b.query.indices);
  CHECK(is_pair_structured(a.layout, a.query));
  CHECK(a.matrix.processed.rows() == 8);
  CHECK(a.matrix.processed.cols() == 16);
}

TEST_CASE("rip and nsp commands") {
  const auto c = small_certify_config();
  const auto rip = run_rip(c, 3, 2);
  REQUIRE(rip.size() == 4);  // orders 1 and 2 for each trial
  for (const auto& r : rip) {
    CHECK(r.estimate.method == RipMethod::Exhaustive);
    CHECK(r.estimate.constant >= 0.0);
  }
  CHECK(rip[0].estimate.constant <= rip[1].estimate.constant);

  const auto nsp = run_nsp(c, 3, 2);
  REQUIRE(nsp.size() == 2);
  for (const auto& r : nsp) {
    CHECK_FALSE(r.result.solver_failure);
    CHECK(r.result.pass == !r.result.witness.has_value());
    if (r.rip_constant <= 0.4531) CHECK(r.result.pass);
  }

  std::ostringstream rip_csv, nsp_csv;
  write_rip_csv(rip_csv, c, rip);
  write_nsp_csv(nsp_csv, c, nsp);
  check_csv_shape(rip_csv.str(), "rip", 4);
  check_csv_shape(nsp_csv.str(), "nsp", 2);
}

TEST_CASE("certify report") {
  const auto c = small_certify_config();
  const auto rows = run_certify(c, 1);
  std::set<std::string> checks;
  for (const auto& r : rows) {
    checks.insert(r.check);
    CHECK(std::isfinite(r.value));
  }
  CHECK(checks.size() >= 5);
  std::ostringstream out;
  write_certify_csv(out, c, rows);
  check_csv_shape(out.str(), "certify", rows.size());
  CHECK(lines_of(out.str())[1 + c.entries().size()] == "check,statistic,value,samples,tolerance,pass");

  const auto again = run_certify(c, 1);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].value == rows[i].value);
}
