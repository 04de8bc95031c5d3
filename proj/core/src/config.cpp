#include "arboreal/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arboreal {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + " expects an integer, got '" + value + "'");
  }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not a key=value pair");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key == "tree.d") {
      cfg.d = parse_int(key, value);
    } else if (key == "local_group.generators") {
      cfg.generators = value;
    } else if (key == "parabolic.kind") {
      if (value == "full")
        cfg.kind = ParabolicKind::FullFixator;
      else if (value == "horospherical")
        cfg.kind = ParabolicKind::Horospherical;
      else if (value == "ray")
        cfg.kind = ParabolicKind::RayFixator;
      else
        throw std::invalid_argument("config: parabolic.kind must be full, horospherical, or ray");
    } else if (key == "parabolic.xi") {
      cfg.xi = value;
    } else if (key == "parabolic.base") {
      cfg.base = value;
    } else if (key == "portraits.f1") {
      cfg.f1 = value;
    } else if (key == "portraits.f2") {
      cfg.f2 = value;
    } else if (key == "schedule.n_max") {
      cfg.n_max = parse_int(key, value);
    } else if (key == "schedule.depth") {
      cfg.depth = parse_int(key, value);
    } else if (key == "thresholds.final_ratio") {
      cfg.final_ratio = parse_rational(value);
    } else if (key == "seed") {
      cfg.seed = static_cast<unsigned long>(std::stoull(value));
    } else if (key == "output") {
      cfg.output = value;
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (cfg.n_max < 1) throw std::invalid_argument("config: schedule.n_max must be positive");
  if (cfg.depth < 1) throw std::invalid_argument("config: schedule.depth must be positive");
  if (cfg.final_ratio <= 0 || cfg.final_ratio >= 1)
    throw std::invalid_argument("config: thresholds.final_ratio must lie in (0, 1)");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

GroupPtr make_group(const ExperimentConfig& cfg) {
  return std::make_shared<LocalGroup>(LocalGroup::parse(cfg.d, cfg.generators));
}

ParabolicSpec make_parabolic(const ExperimentConfig& cfg, GroupPtr F) {
  BoundaryPoint xi = BoundaryPoint::parse(cfg.xi, cfg.d);
  switch (cfg.kind) {
    case ParabolicKind::FullFixator:
      return full_fixator(std::move(F), xi);
    case ParabolicKind::Horospherical:
      return horospherical(std::move(F), xi);
    case ParabolicKind::RayFixator:
      return ray_fixator(std::move(F), xi, Vertex::parse(cfg.base, cfg.d));
  }
  throw std::logic_error("make_parabolic: unknown kind");
}

Portrait make_portrait(GroupPtr F, const std::string& spec) {
  if (spec.empty() || spec == "id") return Portrait::identity(std::move(F));
  if (spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw std::invalid_argument("portrait: cannot open '" + spec.substr(1) + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return Portrait::from_json(std::move(F), buf.str());
  }
  return Portrait::from_json(std::move(F), spec);
}

std::string vertex_name(const Vertex& v) { return v.is_base() ? "e" : v.word(); }

}  // namespace arboreal
