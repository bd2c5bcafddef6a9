#include "intersample/sim.hpp"

#include "intersample/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace intersample {

namespace {

constexpr std::uint8_t kSensing = 1;
constexpr std::uint8_t kActuation = 2;
constexpr std::uint8_t kDisruption = 4;

struct Event {
  double t = 0.0;
  Rational ticks;
  bool has_ticks = false;
  std::uint8_t flags = 0;
};

}  // namespace

std::optional<Index> SimTrace::index_at(double t) const {
  const double window = 1e-9 * std::max(1.0, std::abs(t));
  auto it = std::lower_bound(times.begin(), times.end(), t - window);
  if (it == times.end() || std::abs(*it - t) > window) return std::nullopt;
  return static_cast<Index>(it - times.begin());
}

SimTrace simulate(const LtiSystem& sys, const TimingGrid& grid_true, const AttackPlan& plan,
                  int fine_steps_per_hold) {
  if (fine_steps_per_hold < 1) {
    throw std::invalid_argument("simulate: fine_steps_per_hold must be at least 1");
  }
  if (!plan.holds.empty() && plan.holds.front().size() != sys.p()) {
    throw std::invalid_argument("simulate: plan hold width does not match the system input count");
  }
  const std::int64_t n_holds = static_cast<std::int64_t>(plan.holds.size());

  // Instants are assembled in exact tick units of grid_true so that a sample
  // landing on an actuation instant dedupes exactly. The plan's disruption
  // instants are epsilon-merged afterwards: they coincide bit-for-bit with
  // grid points when the design and simulation grids agree, and fall between
  // them under timing mismatch.
  std::map<Rational, std::uint8_t> ticked;
  for (std::int64_t i = 0; i <= n_holds; ++i) {
    ticked[grid_true.actuation_ticks(i)] |= kActuation;
    if (i < n_holds) {
      for (int s = 1; s < fine_steps_per_hold; ++s) {
        ticked[Rational(i * fine_steps_per_hold + s, fine_steps_per_hold) *
               Rational(grid_true.alpha)] |= 0;
      }
    }
  }
  const Rational span_ticks = grid_true.actuation_ticks(n_holds);
  for (std::int64_t j = 1;; ++j) {
    const Rational at = grid_true.sensing_ticks(j);
    if (at > span_ticks) break;
    ticked[at] |= kSensing;
  }

  std::vector<Event> events;
  events.reserve(ticked.size() + plan.disruption_times.size());
  for (const auto& [ticks, flags] : ticked) {
    events.push_back({grid_true.seconds(ticks), ticks, true, flags});
  }
  const double merge_tol = 1e-9 * std::max(grid_true.hold_period, grid_true.sample_period);
  const double span_seconds = events.empty() ? 0.0 : events.back().t;
  for (double td : plan.disruption_times) {
    if (td > span_seconds + merge_tol) continue;  // beyond the simulated span
    auto it = std::lower_bound(events.begin(), events.end(), td,
                               [](const Event& e, double t) { return e.t < t; });
    if (it != events.end() && std::abs(it->t - td) <= merge_tol) {
      it->flags |= kDisruption;
    } else if (it != events.begin() && std::abs(std::prev(it)->t - td) <= merge_tol) {
      std::prev(it)->flags |= kDisruption;
    } else {
      events.insert(it, Event{td, Rational(), false, kDisruption});
    }
  }

  SimTrace trace;
  trace.A = sys.A;
  trace.B = sys.B;
  trace.C = sys.C;
  trace.holds = plan.holds;
  trace.span = span_seconds;
  trace.times.reserve(events.size());

  const Vector idle = Vector::Zero(sys.p());
  Vector state = Vector::Zero(sys.n());
  std::int64_t hold = -1;
  for (std::size_t e = 0; e < events.size(); ++e) {
    if (events[e].flags & kActuation) ++hold;
    const std::int64_t active = (hold >= 0 && hold < n_holds) ? hold : -1;
    trace.times.push_back(events[e].t);
    trace.states.push_back(state);
    trace.outputs.push_back(sys.C * state);
    trace.sensing_flag.push_back((events[e].flags & kSensing) ? 1 : 0);
    trace.actuation_flag.push_back((events[e].flags & kActuation) ? 1 : 0);
    trace.disruption_flag.push_back((events[e].flags & kDisruption) ? 1 : 0);
    trace.hold_index.push_back(active);
    if (e + 1 < events.size()) {
      const double h = (events[e].has_ticks && events[e + 1].has_ticks)
                           ? grid_true.seconds(events[e + 1].ticks - events[e].ticks)
                           : events[e + 1].t - events[e].t;
      const Vector& input = active >= 0 ? plan.holds[static_cast<std::size_t>(active)] : idle;
      auto [step_transition, step_input] = zoh_pair(sys.A, sys.B, h);
      state = step_transition * state + step_input * input;
    }
  }

  std::int64_t j = 0;
  for (std::size_t e = 0; e < trace.times.size(); ++e) {
    if (trace.sensing_flag[e]) {
      trace.sampled.push_back({++j, trace.times[e], trace.outputs[e]});
    }
  }
  for (std::size_t k = 0; k < plan.disruption_times.size(); ++k) {
    const auto idx = trace.index_at(plan.disruption_times[k]);
    if (!idx) continue;
    trace.disruption_samples.push_back({static_cast<std::int64_t>(k + 1), trace.times[*idx],
                                        trace.states[*idx].norm()});
  }
  return trace;
}

VerificationReport verify(const SimTrace& trace, const AttackPlan& plan, double stealth_tol) {
  if (!(stealth_tol > 0.0)) {
    throw std::invalid_argument("verify: stealth tolerance must be positive");
  }
  VerificationReport report;
  report.stealth_tol = stealth_tol;
  for (const SampledOutput& sample : trace.sampled) {
    const double residual = sample.y.norm();
    report.max_sampled_residual = std::max(report.max_sampled_residual, residual);
    if (residual > stealth_tol && !report.first_detection_sample) {
      report.first_detection_sample = sample.j;
    }
  }
  report.stealthy = report.max_sampled_residual <= stealth_tol;

  report.margins.reserve(trace.disruption_samples.size());
  bool all_met = !trace.disruption_samples.empty();
  for (const DisruptionSample& sample : trace.disruption_samples) {
    const std::size_t k = static_cast<std::size_t>(sample.k - 1);
    if (k >= plan.thresholds.size()) {
      throw std::invalid_argument("verify: trace disruption index exceeds the plan's clusters");
    }
    const double threshold = plan.thresholds[k];
    const double margin = sample.state_norm - threshold;
    report.margins.push_back(margin);
    // the first cluster meets its threshold with equality in exact
    // arithmetic, so the check needs a relative slack
    if (margin < -1e-9 * std::max(1.0, threshold)) all_met = false;
  }
  report.disruptive = all_met;
  return report;
}

std::vector<Vector> probe_outputs(const SimTrace& trace, const std::vector<double>& probe_times) {
  if (trace.times.empty()) {
    throw std::invalid_argument("probe_outputs: empty trace");
  }
  std::vector<Vector> values;
  values.reserve(probe_times.size());
  const double window = 1e-9 * std::max(1.0, trace.span);
  for (double t : probe_times) {
    if (t < -window || t > trace.span + window) {
      throw std::out_of_range("probe_outputs: probe time " + std::to_string(t) +
                              " outside the simulated span");
    }
    auto it = std::upper_bound(trace.times.begin(), trace.times.end(), t);
    const Index i = std::max<Index>(0, static_cast<Index>(it - trace.times.begin()) - 1);
    const double h = std::max(0.0, t - trace.times[static_cast<std::size_t>(i)]);
    const std::int64_t active = trace.hold_index[static_cast<std::size_t>(i)];
    const Vector input = active >= 0 ? trace.holds[static_cast<std::size_t>(active)]
                                     : Vector::Zero(trace.B.cols());
    auto [step_transition, step_input] = zoh_pair(trace.A, trace.B, h);
    const Vector state = step_transition * trace.states[static_cast<std::size_t>(i)] +
                         step_input * input;
    values.push_back(trace.C * state);
  }
  return values;
}

}  // namespace intersample
