#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "arboreal/config.hpp"

#include "oracles.hpp"

using namespace arboreal;

namespace {

const char* kFullText =
    "# experiment description\n"
    "tree.d = 5\n"
    "local_group.generators = (12345),(25)(34)\n"
    "\n"
    "parabolic.kind = horospherical\n"
    "parabolic.xi = |12\n"
    "portraits.f1 = id\n"
    "portraits.f2 = id\n"
    "schedule.n_max = 6\n"
    "schedule.depth = 2\n"
    "thresholds.final_ratio = 1/50\n"
    "seed = 99\n"
    "output = run.csv\n";

struct TempFile {
  std::string path;
  TempFile(const std::string& text, const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty text yields the default experiment") {
    ExperimentConfig cfg = parse_config_text("");
    CHECK(cfg.d == 3);
    CHECK(cfg.generators == "(12),(123)");
    CHECK(cfg.kind == ParabolicKind::FullFixator);
    CHECK(cfg.xi == "|12");
    CHECK(cfg.f1 == "id");
    CHECK(cfg.f2 == "id");
    CHECK(cfg.n_max == 8);
    CHECK(cfg.depth == 3);
    CHECK(cfg.final_ratio == Rational(1, 100));
    CHECK(cfg.seed == 0);
    CHECK(cfg.output.empty());
  }

  TEST_CASE("every key parses with comments and padding") {
    ExperimentConfig cfg = parse_config_text(kFullText);
    CHECK(cfg.d == 5);
    CHECK(cfg.generators == "(12345),(25)(34)");
    CHECK(cfg.kind == ParabolicKind::Horospherical);
    CHECK(cfg.n_max == 6);
    CHECK(cfg.depth == 2);
    CHECK(cfg.final_ratio == Rational(1, 50));
    CHECK(cfg.seed == 99);
    CHECK(cfg.output == "run.csv");
  }

  TEST_CASE("malformed lines and values are rejected") {
    CHECK_THROWS_AS(parse_config_text("tree.d\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("mystery.key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("tree.d = three\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("tree.d = 3x\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("parabolic.kind = entire\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("schedule.n_max = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("schedule.depth = -1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("thresholds.final_ratio = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("thresholds.final_ratio = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("thresholds.final_ratio = 0.5\n"), std::invalid_argument);
  }

  TEST_CASE("config files round trip through the filesystem") {
    TempFile file(kFullText, "arboreal_cfg_roundtrip.cfg");
    ExperimentConfig cfg = parse_config_file(file.path);
    CHECK(cfg.d == 5);
    CHECK(cfg.kind == ParabolicKind::Horospherical);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg"), std::invalid_argument);
  }

  TEST_CASE("factories build the described objects") {
    ExperimentConfig cfg = parse_config_text("");
    GroupPtr F = make_group(cfg);
    CHECK(F->degree() == 3);
    CHECK(F->order() == 6);
    ParabolicSpec full = make_parabolic(cfg, F);
    CHECK(full.kind == ParabolicKind::FullFixator);
    CHECK(full.xi == BoundaryPoint::parse("|12", 3));

    cfg.kind = ParabolicKind::RayFixator;
    cfg.base = "1";
    ParabolicSpec ray = make_parabolic(cfg, F);
    CHECK(ray.kind == ParabolicKind::RayFixator);
    CHECK(ray.base == Vertex::parse("1", 3));

    cfg.base = "";
    CHECK(make_parabolic(cfg, F).base == Vertex::base());
  }

  TEST_CASE("portrait specs accept id, inline json, and file references") {
    ExperimentConfig cfg = parse_config_text("");
    GroupPtr F = make_group(cfg);
    CHECK(test::equal_on_ball(make_portrait(F, "id"), Portrait::identity(F), 3));
    CHECK(test::equal_on_ball(make_portrait(F, ""), Portrait::identity(F), 3));

    Portrait g = Portrait::left_mult(F, Vertex::parse("12", 3));
    Portrait inline_g = make_portrait(F, g.to_json());
    CHECK(test::equal_on_ball(inline_g, g, 4));

    TempFile file(g.to_json(), "arboreal_portrait.json");
    Portrait file_g = make_portrait(F, "@" + file.path);
    CHECK(test::equal_on_ball(file_g, g, 4));
    CHECK_THROWS_AS(make_portrait(F, "@/nonexistent/portrait.json"), std::invalid_argument);
  }

  TEST_CASE("vertex names render the base vertex as e") {
    CHECK(vertex_name(Vertex::base()) == "e");
    CHECK(vertex_name(Vertex::parse("12", 3)) == "12");
  }
}
