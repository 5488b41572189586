#include "covercheck/space_json.hpp"

#include <fstream>

namespace covercheck {

using nlohmann::json;

namespace {

json density_to_json(const Density& d, bool cube) {
  json j;
  if (cube) {
    j["res"] = d.cube_res;
    j["values"] = d.cube_values;
  } else {
    json pieces = json::array();
    for (const auto& comp : d.comp) {
      json list = json::array();
      for (const auto& p : comp) list.push_back({p.lo, p.hi, p.value});
      pieces.push_back(list);
    }
    j["pieces"] = pieces;
  }
  j["c"] = d.lower;
  j["C"] = d.upper;
  return j;
}

Density density_from_json(const json& j, bool cube) {
  Density d;
  if (cube) {
    d.cube_res = j.value("res", 1);
    d.cube_values = j.at("values").get<std::vector<double>>();
  } else {
    for (const auto& comp : j.at("pieces")) {
      std::vector<DensityPiece> pieces;
      for (const auto& p : comp)
        pieces.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                          p.at(2).get<double>()});
      d.comp.push_back(std::move(pieces));
    }
  }
  d.lower = j.value("c", 1.0);
  d.upper = j.value("C", d.lower);
  return d;
}

}  // namespace

json space_to_json(const Space& space) {
  json j;
  j["kind"] = to_string(space.kind());
  const bool cube =
      space.kind() == SpaceKind::CubeLinf || space.kind() == SpaceKind::CubeL2;
  switch (space.kind()) {
    case SpaceKind::CubeLinf:
    case SpaceKind::CubeL2:
      j["dim"] = space.dim();
      j["density"] = density_to_json(space.density(), cube);
      break;
    case SpaceKind::TwoInterval:
      j["q"] = space.two_interval_q();
      break;
    case SpaceKind::Graph: {
      json g;
      g["vertices"] = space.graph_geom().num_vertices;
      json edges = json::array();
      for (auto [u, v] : space.graph_geom().edges) edges.push_back({u, v});
      g["edges"] = edges;
      if (!space.graph_geom().vertex_pos.empty()) {
        json pos = json::array();
        for (const auto& p : space.graph_geom().vertex_pos) pos.push_back({p[0], p[1]});
        g["positions"] = pos;
      }
      j["graph"] = g;
      j["density"] = density_to_json(space.density(), cube);
      break;
    }
    default:
      j["density"] = density_to_json(space.density(), cube);
  }
  return j;
}

Space space_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "interval") {
    return j.contains("density")
               ? Space::interval(density_from_json(j["density"], false))
               : Space::interval();
  }
  if (kind == "circle") {
    return j.contains("density") ? Space::circle(density_from_json(j["density"], false))
                                 : Space::circle();
  }
  if (kind == "two-interval") {
    return Space::two_interval(j.value("q", M_SQRT1_2));
  }
  if (kind == "cube-linf" || kind == "cube-l2") {
    int dim = j.value("dim", 2);
    Density d = j.contains("density") ? density_from_json(j["density"], true) : Density{};
    return Space::cube(dim, kind == "cube-linf", std::move(d));
  }
  if (kind == "graph") {
    const json& g = j.at("graph");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : g.at("edges"))
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    std::vector<std::array<double, 2>> pos;
    if (g.contains("positions"))
      for (const auto& p : g["positions"])
        pos.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    Density d = j.contains("density") ? density_from_json(j["density"], false) : Density{};
    return Space::graph(g.at("vertices").get<int>(), std::move(edges), std::move(d),
                        std::move(pos));
  }
  throw std::invalid_argument("unknown space kind: " + kind);
}

Space load_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open space file: " + path);
  json j;
  in >> j;
  return space_from_json(j);
}

ExperimentConfig config_from_json(const json& j, const std::string& base_dir) {
  ExperimentConfig cfg;
  if (j.contains("space_file")) {
    std::string p = j["space_file"].get<std::string>();
    if (!base_dir.empty() && !p.empty() && p[0] != '/') p = base_dir + "/" + p;
    cfg.space = load_space_file(p);
  } else {
    cfg.space = space_from_json(j.at("space"));
  }
  cfg.family_label = j.value("family", std::string(to_string(cfg.space.kind())));
  cfg.rate = rate_params_for(cfg.space, j.value("alpha", 1.0));
  if (j.contains("c")) cfg.rate.c = j["c"].get<double>();
  cfg.n_grid = j.at("n_grid").get<std::vector<long>>();
  cfg.trials = j.value("trials", 100);
  cfg.seed = j.value("seed", 0ULL);
  cfg.mode = parse_check_mode(j.value("mode", std::string("auto")));
  if (j.contains("radius")) {
    const json& r = j["radius"];
    if (r.contains("fixed")) {
      cfg.radius.kind = RadiusSpec::Kind::Fixed;
      cfg.radius.value = r["fixed"].get<double>();
    } else if (r.contains("rate_multiplier")) {
      cfg.radius.kind = RadiusSpec::Kind::Multiplier;
      cfg.radius.value = r["rate_multiplier"].get<double>();
    }
  }
  if (j.contains("sandwich")) {
    cfg.check_params.sandwich_h0 = j["sandwich"].value("h0", 0.25);
    cfg.check_params.sandwich_refinements = j["sandwich"].value("refinements", 3);
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  in >> j;
  std::string dir;
  auto slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return config_from_json(j, dir);
}

}  // namespace covercheck
