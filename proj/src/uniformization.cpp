#include "mjp/uniformization.hpp"

#include <algorithm>
#include <cmath>

namespace mjp {

UniformizedPath::UniformizedPath(int v0, std::vector<double> grid_times,
                                 std::vector<int> grid_states, TimeInterval interval,
                                 double omega, int n_states)
    : v0_(v0),
      times_(std::move(grid_times)),
      states_(std::move(grid_states)),
      interval_(interval),
      omega_(omega),
      n_states_(n_states) {
  require(n_states_ >= 1, "uniformized path needs a positive state count");
  require(0 <= v0_ && v0_ < n_states_, "uniformized path v0 out of range");
  require(times_.size() == states_.size(), "uniformized path |V| must equal |W|");
  require(omega_ >= 0.0 && std::isfinite(omega_), "omega must be finite and >= 0");
  double prev_t = interval_.t_start;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    require(times_[i] > prev_t, "grid times must be strictly increasing");
    require(times_[i] <= interval_.t_end, "grid times must lie inside the interval");
    require(0 <= states_[i] && states_[i] < n_states_, "grid state out of range");
    prev_t = times_[i];
  }
}

StochasticMatrix subordinated_transition_matrix(const RateMatrix& a, double omega) {
  return StochasticMatrix::uniformized(a, omega);
}

UniformizedPath sample_uniformized(const RateMatrix& a, const InitialDistribution& pi0,
                                   const TimeInterval& interval, double omega, Rng& rng) {
  require(a.n() == pi0.n(), "generator and initial distribution disagree on N");
  StochasticMatrix b = subordinated_transition_matrix(a, omega);
  std::vector<double> w =
      detail::poisson_segment_times(omega, interval.t_start, interval.t_end, rng);
  int v = pi0.sample(rng);
  const int v0 = v;
  std::vector<int> states(w.size());
  std::vector<double> column(a.n());
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (int to = 0; to < a.n(); ++to) column[to] = b.entry(to, v);
    v = rng.categorical(column);
    states[i] = v;
  }
  return UniformizedPath(v0, std::move(w), std::move(states), interval, omega, a.n());
}

Trajectory thin(const UniformizedPath& path) {
  std::vector<double> times;
  std::vector<int> states;
  int cur = path.v0();
  for (std::size_t i = 0; i < path.grid_times().size(); ++i) {
    int v = path.grid_states()[i];
    if (v != cur) {
      times.push_back(path.grid_times()[i]);
      states.push_back(v);
      cur = v;
    }
  }
  return Trajectory(path.v0(), std::move(times), std::move(states), path.interval(),
                    path.n_states());
}

namespace detail {

std::vector<double> poisson_segment_times(double rate, double a, double b, Rng& rng) {
  require(b >= a, "segment must have nonnegative length");
  if (rate <= 0.0 || b == a) return {};
  long count = rng.poisson(rate * (b - a));
  std::vector<double> times(static_cast<std::size_t>(count));
  for (auto& t : times) t = rng.uniform(a, b);
  std::sort(times.begin(), times.end());
  return times;
}

VirtualJumps sample_virtual_jumps_allowing_equal(const Trajectory& traj, const RateMatrix& a,
                                                 double omega, Rng& rng) {
  require(traj.n_states() == a.n(), "dimension mismatch");
  require(omega >= a.max_exit_rate(), "omega must dominate every exit rate");
  VirtualJumps out;
  traj.for_each_segment([&](double begin, double end, int state) {
    double rate = omega - a.exit_rate(state);
    auto times = poisson_segment_times(rate, begin, end, rng);
    for (double t : times) {
      out.times.push_back(t);
      out.states.push_back(state);
    }
  });
  return out;
}

}  // namespace detail

VirtualJumps sample_virtual_jumps(const Trajectory& traj, const RateMatrix& a, double omega,
                                  Rng& rng) {
  require(omega > a.max_exit_rate(),
          "omega must be strictly greater than max_s |A_s| (irreducibility)");
  return detail::sample_virtual_jumps_allowing_equal(traj, a, omega, rng);
}

UniformizedPath augment(const Trajectory& traj, const VirtualJumps& virtual_jumps,
                        double omega) {
  require(virtual_jumps.times.size() == virtual_jumps.states.size(),
          "virtual jump times/states size mismatch");
  for (std::size_t j = 0; j < virtual_jumps.times.size(); ++j) {
    require(virtual_jumps.states[j] == traj.state_at(virtual_jumps.times[j]),
            "virtual jump states must match the trajectory");
  }
  std::vector<double> w;
  std::vector<int> v;
  w.reserve(traj.n_jumps() + virtual_jumps.times.size());
  v.reserve(w.capacity());
  std::size_t i = 0, j = 0;
  const auto& tt = traj.times();
  const auto& ts = traj.states();
  const auto& ut = virtual_jumps.times;
  const auto& us = virtual_jumps.states;
  while (i < tt.size() || j < ut.size()) {
    bool take_real;
    if (i == tt.size())
      take_real = false;
    else if (j == ut.size())
      take_real = true;
    else if (tt[i] == ut[j])
      throw numeric_error("duplicate time in T and U_T; RNG streams are misused");
    else
      take_real = tt[i] < ut[j];
    if (take_real) {
      w.push_back(tt[i]);
      v.push_back(ts[i]);
      ++i;
    } else {
      w.push_back(ut[j]);
      v.push_back(us[j]);
      ++j;
    }
  }
  for (std::size_t k = 1; k < w.size(); ++k)
    if (w[k] == w[k - 1]) throw numeric_error("duplicate merged grid time");
  return UniformizedPath(traj.s0(), std::move(w), std::move(v), traj.interval(), omega,
                         traj.n_states());
}

}  // namespace mjp
