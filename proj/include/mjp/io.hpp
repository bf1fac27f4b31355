#ifndef MJP_IO_HPP
#define MJP_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mjp/bayes.hpp"
#include "mjp/ctbn.hpp"
#include "mjp/mmpp.hpp"
#include "mjp/types.hpp"

namespace mjp::io {

// Deterministic shortest-faithful rendering at 17 significant digits.
std::string format_double(double x);

// Trajectory CSV: header `time,state`; first row is (t_start, s0), then one
// row per jump with the post-jump state.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path, double t_end, int n_states);

// CTBN trajectory CSV: header `time,node,state`; one initial row per node at
// t_start, then one row per event.
void write_ctbn_trajectory_csv(const std::filesystem::path& path, const CtbnTrajectory& traj);

// Event-time CSV: single `time` column, ascending.
void write_events_csv(const std::filesystem::path& path, const std::vector<double>& events);
std::vector<double> read_events_csv(const std::filesystem::path& path);

// Observation CSV for discrete state readings: `time,value`.
struct StateReadings {
  std::vector<double> times;
  std::vector<int> values;
};
void write_observations_csv(const std::filesystem::path& path, const StateReadings& readings);
StateReadings read_observations_csv(const std::filesystem::path& path);

// CTBN observation CSV: `time,node,value` (node by name).
struct CtbnReadings {
  std::vector<double> times;
  std::vector<std::string> node_names;
  std::vector<int> values;
};
void write_ctbn_observations_csv(const std::filesystem::path& path, const CtbnReadings& readings);
CtbnReadings read_ctbn_observations_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Model files (JSON). Matrices are nested row arrays in the column
// convention used everywhere in this project: entry [to][from], columns
// summing to zero.
// ---------------------------------------------------------------------------

struct NoiseSpec {
  enum class Kind { exact, misidentify, power2 };
  Kind kind = Kind::exact;
  double p_correct = 1.0;  // misidentify only
};

struct MjpModelFile {
  RateMatrix a;
  InitialDistribution pi0;
  std::optional<RatePrior> prior;
  NoiseSpec noise;
};

struct MmppModelFile {
  MmppModel model;
  std::optional<RatePrior> prior;
  std::optional<EmissionPrior> emission_prior;
};

struct CtbnModelFile {
  CtbnModel model;
  std::vector<NoiseSpec> noise;  // per node
};

using ModelFile = std::variant<MjpModelFile, MmppModelFile, CtbnModelFile>;

ModelFile load_model(const std::filesystem::path& path);
Eigen::MatrixXd observation_log_lik(const NoiseSpec& noise, const std::vector<int>& values,
                                    int n_states);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace mjp::io

#endif
