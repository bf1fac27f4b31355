#include "mjp/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace mjp::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw model_error("cannot open " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "empty CSV file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == expected_header,
          "unexpected CSV header in " + path.string() + " (want `" + expected_header + "`)");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  require(pos == s.size(), "malformed number: " + s);
  return v;
}

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  int v = std::stoi(s, &pos);
  require(pos == s.size(), "malformed integer: " + s);
  return v;
}

Eigen::MatrixXd parse_matrix(const nlohmann::json& j) {
  require(j.is_array() && !j.empty(), "matrix must be a nonempty array of rows");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    require(j.at(r).is_array() && j.at(r).size() == cols, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j.at(r).at(c).get<double>();
  }
  return m;
}

Eigen::VectorXd parse_vector(const nlohmann::json& j) {
  require(j.is_array(), "expected an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

NoiseSpec parse_noise(const nlohmann::json& j) {
  NoiseSpec spec;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "exact") {
    spec.kind = NoiseSpec::Kind::exact;
  } else if (kind == "misidentify") {
    spec.kind = NoiseSpec::Kind::misidentify;
    spec.p_correct = j.at("p_correct").get<double>();
    require(0.0 < spec.p_correct && spec.p_correct <= 1.0, "p_correct must be in (0,1]");
  } else if (kind == "power2") {
    spec.kind = NoiseSpec::Kind::power2;
  } else {
    throw model_error("unknown noise kind: " + kind);
  }
  return spec;
}

RatePrior parse_prior(const nlohmann::json& j) {
  RatePrior prior;
  prior.alpha1 = j.at("alpha1").get<double>();
  prior.alpha2 = j.at("alpha2").get<double>();
  prior.beta = j.at("beta").get<double>();
  prior.validate();
  return prior;
}

MjpModelFile parse_mjp(const nlohmann::json& j) {
  RateMatrix a(parse_matrix(j.at("rate_matrix")));
  InitialDistribution pi0(parse_vector(j.at("pi0")));
  require(pi0.n() == a.n(), "pi0 length must match the rate matrix");
  MjpModelFile file{std::move(a), std::move(pi0), std::nullopt, NoiseSpec{}};
  if (j.contains("prior")) file.prior = parse_prior(j.at("prior"));
  if (j.contains("noise")) file.noise = parse_noise(j.at("noise"));
  return file;
}

MmppModelFile parse_mmpp(const nlohmann::json& j) {
  RateMatrix a(parse_matrix(j.at("rate_matrix")));
  InitialDistribution pi0(parse_vector(j.at("pi0")));
  Eigen::VectorXd lambda = parse_vector(j.at("lambda"));
  MmppModelFile file{MmppModel(std::move(a), std::move(pi0), std::move(lambda)), std::nullopt,
                     std::nullopt};
  if (j.contains("prior")) file.prior = parse_prior(j.at("prior"));
  if (j.contains("lambda_prior")) {
    EmissionPrior ep;
    ep.shape = parse_vector(j.at("lambda_prior").at("shape"));
    ep.rate = parse_vector(j.at("lambda_prior").at("rate"));
    ep.validate(file.model.a.n());
    file.emission_prior = ep;
  }
  return file;
}

CtbnModelFile parse_ctbn(const nlohmann::json& j) {
  std::vector<CtbnModel::Node> nodes;
  std::map<std::string, int> id_of;
  for (const auto& nj : j.at("nodes")) {
    CtbnModel::Node node{nj.at("name").get<std::string>(), nj.at("states").get<int>()};
    require(id_of.emplace(node.name, static_cast<int>(nodes.size())).second,
            "duplicate node name " + node.name);
    nodes.push_back(std::move(node));
  }
  auto node_id = [&](const std::string& name) {
    auto it = id_of.find(name);
    require(it != id_of.end(), "unknown node name " + name);
    return it->second;
  };
  std::vector<std::pair<int, int>> edges;
  for (const auto& ej : j.at("edges")) {
    require(ej.is_array() && ej.size() == 2, "edges are [parent, child] pairs");
    edges.push_back({node_id(ej.at(0).get<std::string>()), node_id(ej.at(1).get<std::string>())});
  }

  // Temporarily build parent lists to index configurations.
  std::vector<std::vector<int>> parents(nodes.size());
  for (auto [p, c] : edges) parents[static_cast<std::size_t>(c)].push_back(p);
  for (auto& v : parents) std::sort(v.begin(), v.end());

  std::vector<std::vector<std::optional<RateMatrix>>> tables(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    long configs = 1;
    for (int p : parents[k]) configs *= nodes[static_cast<std::size_t>(p)].n_states;
    tables[k].assign(static_cast<std::size_t>(configs), std::nullopt);
  }
  for (const auto& rj : j.at("rates")) {
    int k = node_id(rj.at("node").get<std::string>());
    long idx = 0;
    long stride = 1;
    const auto& pj = rj.contains("parents") ? rj.at("parents") : nlohmann::json::object();
    for (int p : parents[static_cast<std::size_t>(k)]) {
      const std::string& pname = nodes[static_cast<std::size_t>(p)].name;
      require(pj.contains(pname), "rate entry for node " + nodes[static_cast<std::size_t>(k)].name +
                                       " missing parent state for " + pname);
      long state = pj.at(pname).get<long>();
      require(0 <= state && state < nodes[static_cast<std::size_t>(p)].n_states,
              "parent state out of range");
      idx += state * stride;
      stride *= nodes[static_cast<std::size_t>(p)].n_states;
    }
    require(!tables[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)].has_value(),
            "duplicate rate entry for a parent configuration");
    tables[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)] =
        RateMatrix(parse_matrix(rj.at("matrix")));
  }
  std::vector<std::vector<RateMatrix>> rate_tables(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (std::size_t c = 0; c < tables[k].size(); ++c) {
      require(tables[k][c].has_value(), "missing rate entry for node " + nodes[k].name);
      rate_tables[k].push_back(std::move(*tables[k][c]));
    }
  }

  CtbnInitial pi0 = CtbnInitial::uniform([&] {
    std::vector<int> cards;
    for (const auto& nd : nodes) cards.push_back(nd.n_states);
    return cards;
  }());
  if (j.contains("pi0")) {
    const auto& pj = j.at("pi0");
    std::string kind = pj.at("kind").get<std::string>();
    if (kind == "uniform") {
      // already the default
    } else if (kind == "product") {
      std::vector<Eigen::VectorXd> per_node;
      for (const auto& dj : pj.at("dists")) per_node.push_back(parse_vector(dj));
      pi0 = CtbnInitial::product(std::move(per_node));
    } else if (kind == "joint") {
      pi0 = CtbnInitial::joint(parse_vector(pj.at("table")));
    } else {
      throw model_error("unknown pi0 kind: " + kind);
    }
  }

  std::vector<NoiseSpec> noise(nodes.size());
  if (j.contains("noise")) {
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (j.at("noise").contains(nodes[k].name))
        noise[k] = parse_noise(j.at("noise").at(nodes[k].name));
    }
  }
  return CtbnModelFile{CtbnModel(std::move(nodes), std::move(edges), std::move(rate_tables),
                                 std::move(pi0)),
                       std::move(noise)};
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw model_error("cannot write " + path.string());
  out << content;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw model_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::string out = "time,state\n";
  out += format_double(traj.interval().t_start) + "," + std::to_string(traj.s0()) + "\n";
  for (std::size_t i = 0; i < traj.times().size(); ++i)
    out += format_double(traj.times()[i]) + "," + std::to_string(traj.states()[i]) + "\n";
  write_text(path, out);
}

Trajectory read_trajectory_csv(const std::filesystem::path& path, double t_end, int n_states) {
  auto rows = read_csv(path, "time,state");
  require(!rows.empty(), "trajectory CSV has no rows");
  for (const auto& row : rows) require(row.size() == 2, "trajectory rows are time,state");
  double t_start = parse_double(rows[0][0]);
  int s0 = parse_int(rows[0][1]);
  std::vector<double> times;
  std::vector<int> states;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    times.push_back(parse_double(rows[i][0]));
    states.push_back(parse_int(rows[i][1]));
  }
  return Trajectory(s0, std::move(times), std::move(states), TimeInterval(t_start, t_end),
                    n_states);
}

void write_ctbn_trajectory_csv(const std::filesystem::path& path, const CtbnTrajectory& traj) {
  std::string out = "time,node,state\n";
  for (std::size_t k = 0; k < traj.s0().size(); ++k)
    out += format_double(traj.interval().t_start) + "," + std::to_string(k) + "," +
           std::to_string(traj.s0()[k]) + "\n";
  for (std::size_t i = 0; i < traj.times().size(); ++i)
    out += format_double(traj.times()[i]) + "," + std::to_string(traj.nodes()[i]) + "," +
           std::to_string(traj.states()[i]) + "\n";
  write_text(path, out);
}

void write_events_csv(const std::filesystem::path& path, const std::vector<double>& events) {
  std::string out = "time\n";
  for (double t : events) out += format_double(t) + "\n";
  write_text(path, out);
}

std::vector<double> read_events_csv(const std::filesystem::path& path) {
  auto rows = read_csv(path, "time");
  std::vector<double> events;
  for (const auto& row : rows) {
    require(row.size() == 1, "event rows carry a single time");
    events.push_back(parse_double(row[0]));
  }
  for (std::size_t i = 1; i < events.size(); ++i)
    require(events[i] >= events[i - 1], "event times must be ascending");
  return events;
}

void write_observations_csv(const std::filesystem::path& path, const StateReadings& readings) {
  require(readings.times.size() == readings.values.size(), "times/values size mismatch");
  std::string out = "time,value\n";
  for (std::size_t i = 0; i < readings.times.size(); ++i)
    out += format_double(readings.times[i]) + "," + std::to_string(readings.values[i]) + "\n";
  write_text(path, out);
}

StateReadings read_observations_csv(const std::filesystem::path& path) {
  auto rows = read_csv(path, "time,value");
  StateReadings readings;
  for (const auto& row : rows) {
    require(row.size() == 2, "observation rows are time,value");
    readings.times.push_back(parse_double(row[0]));
    readings.values.push_back(parse_int(row[1]));
  }
  for (std::size_t i = 1; i < readings.times.size(); ++i)
    require(readings.times[i] >= readings.times[i - 1], "observation times must be ascending");
  return readings;
}

void write_ctbn_observations_csv(const std::filesystem::path& path,
                                 const CtbnReadings& readings) {
  std::string out = "time,node,value\n";
  for (std::size_t i = 0; i < readings.times.size(); ++i)
    out += format_double(readings.times[i]) + "," + readings.node_names[i] + "," +
           std::to_string(readings.values[i]) + "\n";
  write_text(path, out);
}

CtbnReadings read_ctbn_observations_csv(const std::filesystem::path& path) {
  auto rows = read_csv(path, "time,node,value");
  CtbnReadings readings;
  for (const auto& row : rows) {
    require(row.size() == 3, "ctbn observation rows are time,node,value");
    readings.times.push_back(parse_double(row[0]));
    readings.node_names.push_back(row[1]);
    readings.values.push_back(parse_int(row[2]));
  }
  return readings;
}

ModelFile load_model(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw model_error("cannot parse " + path.string() + ": " + e.what());
  }
  try {
    std::string type = j.at("type").get<std::string>();
    if (type == "mjp") return parse_mjp(j);
    if (type == "mmpp") return parse_mmpp(j);
    if (type == "ctbn") return parse_ctbn(j);
    if (type == "lotka_volterra") {
      CtbnModelFile file{lotka_volterra_model(j.at("alpha").get<double>(),
                                              j.at("beta").get<double>(),
                                              j.at("gamma").get<double>(),
                                              j.at("delta").get<double>(), j.at("cap").get<int>()),
                         {NoiseSpec{NoiseSpec::Kind::power2, 1.0},
                          NoiseSpec{NoiseSpec::Kind::power2, 1.0}}};
      return file;
    }
    throw model_error("unknown model type: " + type);
  } catch (const nlohmann::json::exception& e) {
    throw model_error("invalid model file " + path.string() + ": " + e.what());
  }
}

Eigen::MatrixXd observation_log_lik(const NoiseSpec& noise, const std::vector<int>& values,
                                    int n_states) {
  switch (noise.kind) {
    case NoiseSpec::Kind::power2:
      return power2_noise_log_lik(values, n_states);
    case NoiseSpec::Kind::misidentify: {
      double p_other = n_states > 1 ? (1.0 - noise.p_correct) / (n_states - 1) : 0.0;
      Eigen::MatrixXd ll(static_cast<Eigen::Index>(values.size()), n_states);
      for (std::size_t j = 0; j < values.size(); ++j) {
        require(0 <= values[j] && values[j] < n_states, "observed value out of range");
        for (int s = 0; s < n_states; ++s)
          ll(static_cast<Eigen::Index>(j), s) =
              std::log(s == values[j] ? noise.p_correct : p_other);
      }
      return ll;
    }
    case NoiseSpec::Kind::exact:
    default: {
      Eigen::MatrixXd ll = Eigen::MatrixXd::Constant(
          static_cast<Eigen::Index>(values.size()), n_states,
          -std::numeric_limits<double>::infinity());
      for (std::size_t j = 0; j < values.size(); ++j) {
        require(0 <= values[j] && values[j] < n_states, "observed value out of range");
        ll(static_cast<Eigen::Index>(j), values[j]) = 0.0;
      }
      return ll;
    }
  }
}

}  // namespace mjp::io
