#include "intersample/sim.hpp"

#include "intersample/feasibility.hpp"
#include "intersample/scenario.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace intersample;

namespace {

const Tolerances kTol{};

struct Pipeline {
  LtiSystem sys;
  TimingGrid grid;
  LiftedCluster lifted;
  DisruptionSpec spec;
  AttackPlan plan;
};

Pipeline run_demo(const char* name, std::int64_t clusters, const ThresholdSpec& thresholds) {
  const Scenario s = demo_scenario(name);
  LtiSystem sys = s.system();
  TimingGrid grid = s.design_grid();
  LiftedCluster lifted = build_lifted(sys, grid);
  const DisruptionChoice choice = select_disruption_time(sys, grid, lifted, kTol);
  DisruptionSpec spec = build_disruption_spec(sys, grid, choice.t_star);
  AttackPlan plan = synthesize(sys, grid, lifted, spec, thresholds, clusters, kTol);
  return {std::move(sys), grid, std::move(lifted), std::move(spec), std::move(plan)};
}

AttackPlan holds_only_plan(const TimingGrid& grid, std::vector<Vector> holds,
                           std::vector<double> disruption_times = {}) {
  AttackPlan plan;
  plan.grid = grid;
  plan.t_star = Rational(1);
  plan.holds = std::move(holds);
  plan.disruption_times = std::move(disruption_times);
  plan.thresholds.assign(plan.disruption_times.size(), 1.0);
  plan.gains.assign(plan.disruption_times.size(), 0.0);
  return plan;
}

}  // namespace

TEST_CASE("zero attack leaves the error state at rest") {
  const Scenario s = demo_scenario("sec4a");
  const LtiSystem sys = s.system();
  const TimingGrid grid = s.design_grid();
  const AttackPlan plan =
      holds_only_plan(grid, std::vector<Vector>(6, Vector::Zero(2)), {1.0, 2.0, 3.0});
  const SimTrace trace = simulate(sys, grid, plan, 4);
  for (const Vector& x : trace.states) CHECK(x.norm() == 0.0);

  const VerificationReport report = verify(trace, plan, 1e-8);
  CHECK(report.stealthy);
  CHECK_FALSE(report.disruptive);
  CHECK(report.max_sampled_residual == 0.0);
  CHECK_FALSE(report.first_detection_sample.has_value());
}

TEST_CASE("unit-ratio demo trace is stealthy and disruptive") {
  const Pipeline p = run_demo("sec4a", 10, ThresholdSpec::linear(1.0));
  const SimTrace trace = simulate(p.sys, p.grid, p.plan, 10);
  CHECK(trace.sampled.size() == 10);
  for (const SampledOutput& sample : trace.sampled) {
    CHECK(sample.y.norm() <= 1e-8);
  }
  REQUIRE(trace.disruption_samples.size() == 10);
  for (const DisruptionSample& sample : trace.disruption_samples) {
    const double threshold = static_cast<double>(sample.k);
    CHECK(sample.state_norm >= threshold * (1.0 - 1e-9));
  }
  const VerificationReport report = verify(trace, p.plan, 1e-8);
  CHECK(report.stealthy);
  CHECK(report.disruptive);

  // samples land exactly on actuation instants here; one merged event
  // carries both roles
  const auto at_edge = trace.index_at(1.0);
  REQUIRE(at_edge.has_value());
  CHECK(trace.sensing_flag[static_cast<std::size_t>(*at_edge)] == 1);
  CHECK(trace.actuation_flag[static_cast<std::size_t>(*at_edge)] == 1);
}

TEST_CASE("every scheduled instant appears exactly once") {
  const Pipeline p = run_demo("sec4c", 4, ThresholdSpec::linear(10.0));
  const SimTrace trace = simulate(p.sys, p.grid, p.plan, 7);
  for (std::size_t e = 1; e < trace.times.size(); ++e) {
    CHECK(trace.times[e] > trace.times[e - 1]);
  }
  // 4 clusters, alpha = 5 samples each; beta = 2 holds each plus the terminal edge
  CHECK(trace.sampled.size() == 20);
  std::int64_t actuations = 0;
  for (auto flag : trace.actuation_flag) actuations += flag;
  CHECK(actuations == 9);
  CHECK(trace.states.front().norm() == 0.0);
}

TEST_CASE("refining the fine grid does not move coincident states") {
  const Pipeline p = run_demo("sec4c", 3, ThresholdSpec::linear(10.0));
  const SimTrace coarse = simulate(p.sys, p.grid, p.plan, 3);
  const SimTrace fine = simulate(p.sys, p.grid, p.plan, 24);
  for (std::size_t e = 0; e < coarse.times.size(); ++e) {
    const auto idx = fine.index_at(coarse.times[e]);
    REQUIRE(idx.has_value());
    CHECK((fine.states[static_cast<std::size_t>(*idx)] - coarse.states[e]).norm() <=
          1e-12 * (1.0 + coarse.states[e].norm()));
  }
}

TEST_CASE("trace agrees with the lifted recursion at cluster edges") {
  const Pipeline p = run_demo("sec4c", 6, ThresholdSpec::linear(10.0));
  const SimTrace trace = simulate(p.sys, p.grid, p.plan, 6);
  for (std::int64_t k = 1; k <= 6; ++k) {
    const auto idx = trace.index_at(static_cast<double>(k) * p.grid.cluster_span());
    REQUIRE(idx.has_value());
    const Vector& simulated = trace.states[static_cast<std::size_t>(*idx)];
    const Vector& predicted = p.plan.terminal_states[static_cast<std::size_t>(k - 1)];
    CHECK((simulated - predicted).norm() <= 1e-8 * (1.0 + predicted.norm()));
  }
}

TEST_CASE("trace agrees with an independent RK4 integration") {
  std::mt19937_64 rng(61);
  const LtiSystem sys = oracles::random_system(rng, 4, 2, 2);
  const TimingGrid grid = oracles::random_grid(rng);
  const auto holds = oracles::random_holds(rng, sys.p(), 2 * grid.beta);
  const AttackPlan plan = holds_only_plan(grid, holds);
  const SimTrace trace = simulate(sys, grid, plan, 5);
  const Vector at_end = oracles::rk4_propagate(sys.A, sys.B, holds, grid.hold_period, trace.span);
  CHECK(oracles::rel_close(trace.states.back(), at_end, 1e-7));
}

TEST_CASE("simulation is linear in the injected holds") {
  std::mt19937_64 rng(62);
  const LtiSystem sys = oracles::random_system(rng, 4, 2, 2);
  const TimingGrid grid = oracles::random_grid(rng);
  const auto first = oracles::random_holds(rng, sys.p(), 2 * grid.beta);
  const auto second = oracles::random_holds(rng, sys.p(), 2 * grid.beta);
  std::vector<Vector> combined;
  for (std::size_t i = 0; i < first.size(); ++i) combined.push_back(first[i] + second[i]);

  const SimTrace trace_first = simulate(sys, grid, holds_only_plan(grid, first), 4);
  const SimTrace trace_second = simulate(sys, grid, holds_only_plan(grid, second), 4);
  const SimTrace trace_combined = simulate(sys, grid, holds_only_plan(grid, combined), 4);
  REQUIRE(trace_first.times.size() == trace_combined.times.size());
  for (std::size_t e = 0; e < trace_combined.times.size(); ++e) {
    const Vector sum = trace_first.states[e] + trace_second.states[e];
    CHECK((trace_combined.states[e] - sum).norm() <= 1e-10 * (1.0 + sum.norm()));
  }
}

TEST_CASE("timing mismatch defeats stealth") {
  const Pipeline p = run_demo("sec4c-mismatch", 20, ThresholdSpec::linear(10.0));
  const Scenario s = demo_scenario("sec4c-mismatch");
  const TimingGrid grid_true = s.true_grid();
  CHECK(grid_true.alpha == 2500);
  CHECK(grid_true.beta == 1001);
  const SimTrace trace = simulate(p.sys, grid_true, p.plan, 2);
  const VerificationReport report = verify(trace, p.plan, 1e-8);
  CHECK_FALSE(report.stealthy);
  CHECK(report.max_sampled_residual > 1e-3);
  REQUIRE(report.first_detection_sample.has_value());
  CHECK(*report.first_detection_sample >= 1);
}

TEST_CASE("probing between samples exposes the attack") {
  const Pipeline p = run_demo("sec4c", 4, ThresholdSpec::linear(10.0));
  const SimTrace trace = simulate(p.sys, p.grid, p.plan, 10);

  // at t = 0 nothing has happened yet
  CHECK(probe_outputs(trace, {0.0}).front().norm() == 0.0);

  // at scheduled sample instants the probe sees the (zero) sampled residual
  const auto at_samples = probe_outputs(trace, {trace.sampled[0].t, trace.sampled[5].t});
  CHECK(at_samples[0].norm() <= 1e-8);
  CHECK(at_samples[1].norm() <= 1e-8);

  // at the disruption instants the output is visibly nonzero
  const auto at_disruption = probe_outputs(trace, {p.plan.disruption_times[1]});
  CHECK(at_disruption[0].norm() > 1e-3);

  // probes between grid points match a fine-grid rerun
  const SimTrace dense = simulate(p.sys, p.grid, p.plan, 1000);
  const double off_grid = 0.513;
  const auto probed = probe_outputs(trace, {off_grid});
  const auto idx = dense.index_at(off_grid);
  REQUIRE(idx.has_value());
  CHECK((probed[0] - dense.outputs[static_cast<std::size_t>(*idx)]).norm() <= 1e-9);

  CHECK_THROWS_AS(probe_outputs(trace, {trace.span + 1.0}), std::out_of_range);
  CHECK_THROWS_AS(probe_outputs(trace, {-0.5}), std::out_of_range);
}

TEST_CASE("empty plans simulate to a single instant") {
  const Scenario s = demo_scenario("sec4a");
  const AttackPlan plan = holds_only_plan(s.design_grid(), {});
  const SimTrace trace = simulate(s.system(), s.design_grid(), plan, 4);
  REQUIRE(trace.times.size() == 1);
  CHECK(trace.times.front() == 0.0);
  const VerificationReport report = verify(trace, plan, 1e-8);
  CHECK(report.stealthy);
  CHECK_FALSE(report.disruptive);
}
