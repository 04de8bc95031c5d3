#pragma once

#include <string>

#include "arboreal/parabolic.hpp"
#include "arboreal/rational.hpp"

namespace arboreal {

inline constexpr char kVersion[] = "0.1.0";

/// Flat key=value experiment description ('#' starts a comment line).
struct ExperimentConfig {
  int d = 3;
  std::string generators = "(12),(123)";
  ParabolicKind kind = ParabolicKind::FullFixator;
  std::string xi = "|12";
  std::string base;  // ray fixator base vertex word; empty means x0
  std::string f1 = "id";
  std::string f2 = "id";
  int n_max = 8;
  int depth = 3;  // coset truncation depth
  Rational final_ratio = Rational(1, 100);
  unsigned long seed = 0;
  std::string output;  // CSV destination; empty keeps it in memory
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

GroupPtr make_group(const ExperimentConfig& cfg);
ParabolicSpec make_parabolic(const ExperimentConfig& cfg, GroupPtr F);
/// "id", inline portrait JSON, or @path to a JSON file.
Portrait make_portrait(GroupPtr F, const std::string& spec);

/// Vertex rendering for reports: the base vertex prints as "e".
std::string vertex_name(const Vertex& v);

}  // namespace arboreal
