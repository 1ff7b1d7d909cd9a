#include "dpffd/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dpffd {

using nlohmann::json;

Scenario Scenario::nine_tank_default() {
  Scenario s;
  s.faults = {
      {4, {FaultShape::Abrupt, 2.0, 2000}},
      {5, {FaultShape::Abrupt, 2.0, 2500}},
      {7, {FaultShape::Abrupt, 2.0, 2900}},
  };
  s.nodes = {
      {1, {1, 2, 3, 4, 5, 6}, 0.2},
      {2, {4, 5, 6}, 0.2},
      {3, {4, 5, 6, 7, 8, 9}, 0.2},
  };
  s.topology = Topology::complete(3);
  s.filter.particle_count = 1000;
  s.filter.alpha = 0.9;
  s.seed = 1;
  s.steps = 3300;
  return s;
}

void Scenario::validate() const {
  if (params.Sc <= 0.0) throw ScenarioError("plant.Sc: must be > 0");
  if (params.Sp <= 0.0) throw ScenarioError("plant.Sp: must be > 0");
  if (params.Ts <= 0.0) throw ScenarioError("plant.Ts: must be > 0");
  if (params.mu.size() != kTankCount || params.x0.size() != kTankCount)
    throw ScenarioError("plant.mu/x0: expected 9 entries");
  for (double x : params.x0)
    if (x < 0.0) throw ScenarioError("plant.x0: levels must be >= 0");
  if (plant_process_variance < 0.0)
    throw ScenarioError("plant.process_noise_variance: must be >= 0");
  for (auto [a, b] : pipes.pipes)
    if (a < 0 || b < 0 || a >= kTankCount || b >= kTankCount || a == b)
      throw ScenarioError("plant.pipes: invalid tank pair");

  if (steps < 1) throw ScenarioError("steps: must be >= 1");
  for (const FaultSpec& f : faults) {
    if (f.tank < 1 || f.tank > kTankCount)
      throw ScenarioError("faults.tank: tank " + std::to_string(f.tank) + " does not exist");
    if (f.profile.onset_step < 0 || f.profile.onset_step >= steps)
      throw ScenarioError("faults.onset_step: must lie within [0, steps)");
    if (f.profile.kind == FaultShape::Incipient && f.profile.c <= 1.0)
      throw ScenarioError("faults.c: incipient profile requires c > 1");
  }

  if (nodes.empty()) throw ScenarioError("nodes: at least one detector node required");
  for (const NodeSpec& n : nodes) {
    if (n.tanks.empty()) throw ScenarioError("nodes.tanks: node " + std::to_string(n.id) +
                                             " measures nothing");
    for (int t : n.tanks)
      if (t < 1 || t > kTankCount)
        throw ScenarioError("nodes.tanks: tank " + std::to_string(t) + " does not exist");
    if (n.noise_variance <= 0.0)
      throw ScenarioError("nodes.noise_variance: must be > 0");
  }
  if (topology.nodes != static_cast<int>(nodes.size()))
    throw ScenarioError("topology: node count does not match node definitions");
  if (!is_connected(topology)) throw ScenarioError("topology: graph must be connected");

  if (filter.particle_count < 1) throw ScenarioError("filter.particles: must be >= 1");
  if (filter.alpha <= 0.0 || filter.alpha >= 1.0)
    throw ScenarioError("filter.alpha: must lie in (0, 1)");
  if (filter.consensus.max_iterations < 1)
    throw ScenarioError("filter.consensus.max_iterations: must be >= 1");
  if (filter.consensus.tolerance <= 0.0)
    throw ScenarioError("filter.consensus.tolerance: must be > 0");
  if (binary_noise_halfwidth <= 0.0)
    throw ScenarioError("filter.binary_noise_halfwidth: must be > 0");
}

namespace {

json topology_to_json(const Topology& t) {
  const Topology complete = Topology::complete(t.nodes);
  if (t.edges.size() == complete.edges.size() && is_connected(t)) {
    // size check is enough for simple graphs with no duplicates
    return json("complete");
  }
  json edges = json::array();
  for (auto [a, b] : t.edges) edges.push_back({a + 1, b + 1});
  return json{{"edges", edges}};
}

Topology topology_from_json(const json& j, int node_count) {
  Topology t;
  t.nodes = node_count;
  if (j.is_string()) {
    const std::string kind = j.get<std::string>();
    if (kind == "complete") return Topology::complete(node_count);
    if (kind == "path") return Topology::path(node_count);
    throw ScenarioError("topology: unknown keyword '" + kind + "'");
  }
  for (const auto& e : j.at("edges"))
    t.edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
  return t;
}

Vec vec_or_scalar(const json& j, std::size_t n, const char* field) {
  if (j.is_number()) return Vec(n, j.get<double>());
  Vec v = j.get<Vec>();
  if (v.size() != n)
    throw ScenarioError(std::string(field) + ": expected " + std::to_string(n) + " entries");
  return v;
}

}  // namespace

std::string scenario_to_json_text(const Scenario& s) {
  json j;
  j["plant"] = {
      {"Sc", s.params.Sc},
      {"Sp", s.params.Sp},
      {"g", s.params.g},
      {"Ts", s.params.Ts},
      {"mu", s.params.mu},
      {"x0", s.params.x0},
      {"process_noise_variance", s.plant_process_variance},
  };
  json pipes = json::array();
  for (auto [a, b] : s.pipes.pipes) pipes.push_back({a + 1, b + 1});
  j["plant"]["pipes"] = pipes;

  j["faults"] = json::array();
  for (const FaultSpec& f : s.faults)
    j["faults"].push_back({
        {"tank", f.tank},
        {"profile", f.profile.kind == FaultShape::Abrupt ? "abrupt" : "incipient"},
        {"c", f.profile.c},
        {"onset_step", f.profile.onset_step},
    });

  j["nodes"] = json::array();
  for (const NodeSpec& n : s.nodes)
    j["nodes"].push_back({{"id", n.id}, {"tanks", n.tanks}, {"noise_variance", n.noise_variance}});

  j["topology"] = topology_to_json(s.topology);
  j["filter"] = {
      {"particles", s.filter.particle_count},
      {"alpha", s.filter.alpha},
      {"consensus",
       {{"max_iterations", s.filter.consensus.max_iterations},
        {"tolerance", s.filter.consensus.tolerance}}},
      {"one_hop_only", s.filter.one_hop_only},
      {"binary_noise_halfwidth", s.binary_noise_halfwidth},
  };
  if (s.filter_process_variance >= 0.0)
    j["filter"]["process_noise_variance"] = s.filter_process_variance;
  j["seed"] = s.seed;
  j["steps"] = s.steps;
  return j.dump(2) + "\n";
}

Scenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
  }
  Scenario s;
  try {
    if (j.contains("plant")) {
      const json& p = j["plant"];
      s.params.Sc = p.value("Sc", s.params.Sc);
      s.params.Sp = p.value("Sp", s.params.Sp);
      s.params.g = p.value("g", s.params.g);
      s.params.Ts = p.value("Ts", s.params.Ts);
      if (p.contains("mu")) s.params.mu = vec_or_scalar(p["mu"], kTankCount, "plant.mu");
      if (p.contains("x0")) s.params.x0 = vec_or_scalar(p["x0"], kTankCount, "plant.x0");
      s.plant_process_variance = p.value("process_noise_variance", s.plant_process_variance);
      if (p.contains("pipes")) {
        if (p["pipes"].is_string()) {
          if (p["pipes"] != "grid3x3")
            throw ScenarioError("plant.pipes: unknown keyword");
          s.pipes = TankTopology::grid3x3();
        } else {
          s.pipes.pipes.clear();
          for (const auto& e : p["pipes"])
            s.pipes.pipes.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
        }
      }
    }
    if (j.contains("faults")) {
      s.faults.clear();
      for (const auto& f : j["faults"]) {
        FaultSpec fs;
        fs.tank = f.at("tank").get<int>();
        const std::string kind = f.value("profile", "abrupt");
        if (kind == "abrupt")
          fs.profile.kind = FaultShape::Abrupt;
        else if (kind == "incipient")
          fs.profile.kind = FaultShape::Incipient;
        else
          throw ScenarioError("faults.profile: must be 'abrupt' or 'incipient'");
        fs.profile.c = f.value("c", 2.0);
        fs.profile.onset_step = f.at("onset_step").get<long>();
        s.faults.push_back(fs);
      }
    } else {
      s.faults = Scenario::nine_tank_default().faults;
    }
    if (j.contains("nodes")) {
      s.nodes.clear();
      for (const auto& n : j["nodes"]) {
        NodeSpec ns;
        ns.id = n.at("id").get<int>();
        ns.tanks = n.at("tanks").get<std::vector<int>>();
        ns.noise_variance = n.value("noise_variance", 0.2);
        s.nodes.push_back(ns);
      }
    } else {
      s.nodes = Scenario::nine_tank_default().nodes;
    }
    s.topology = j.contains("topology")
                     ? topology_from_json(j["topology"], static_cast<int>(s.nodes.size()))
                     : Topology::complete(static_cast<int>(s.nodes.size()));
    if (j.contains("filter")) {
      const json& f = j["filter"];
      s.filter.particle_count = f.value("particles", s.filter.particle_count);
      s.filter.alpha = f.value("alpha", s.filter.alpha);
      if (f.contains("consensus")) {
        s.filter.consensus.max_iterations =
            f["consensus"].value("max_iterations", s.filter.consensus.max_iterations);
        s.filter.consensus.tolerance =
            f["consensus"].value("tolerance", s.filter.consensus.tolerance);
      }
      s.filter.one_hop_only = f.value("one_hop_only", false);
      s.binary_noise_halfwidth = f.value("binary_noise_halfwidth", s.binary_noise_halfwidth);
      if (f.contains("process_noise_variance"))
        s.filter_process_variance = f["process_noise_variance"].get<double>();
    }
    s.seed = j.value("seed", s.seed);
    s.steps = j.value("steps", s.steps);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("scenario: cannot write " + path);
  out << scenario_to_json_text(scenario);
}

PlantConfig make_plant_config(const Scenario& s) {
  PlantConfig c;
  c.params = s.params;
  c.topology = s.pipes;
  for (const FaultSpec& f : s.faults) c.faults.push_back(TankFault{f.tank - 1, f.profile});
  c.process_noise = NoiseSpec::gaussian_iid(0.0, s.plant_process_variance, kTankCount);
  return c;
}

AugmentedModel make_filter_model(const Scenario& s) {
  PlantConfig plant = make_plant_config(s);
  AugmentedModel m;
  m.n_x = kTankCount;
  const TankParams params = s.params;
  const TankTopology pipes = s.pipes;
  m.healthy_step = [params, pipes](const Vec& x) { return tank_healthy_step(x, params, pipes); };
  m.modes = tank_fault_modes(plant);
  m.process_noise =
      NoiseSpec::gaussian_iid(0.0, s.effective_filter_process_variance(), kTankCount);
  m.binary_noise = NoiseSpec::uniform_box(-s.binary_noise_halfwidth, s.binary_noise_halfwidth, 2);
  return m;
}

std::vector<DetectorNode> make_detector_nodes(const Scenario& s) {
  std::vector<DetectorNode> nodes;
  for (const NodeSpec& n : s.nodes) {
    DetectorNode d;
    d.id = n.id;
    for (int t : n.tanks) d.selector.push_back(t - 1);
    d.meas_variance = n.noise_variance;
    nodes.push_back(std::move(d));
  }
  return nodes;
}

}  // namespace dpffd
