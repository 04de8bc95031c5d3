#include "arboreal/config.hpp"
#include "arboreal/cosets.hpp"
#include "arboreal/decomposition.hpp"
#include "arboreal/measure.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace arboreal;

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text;
}

GroupPtr group_from_flags(int d, const std::string& gens) {
  return std::make_shared<LocalGroup>(LocalGroup::parse(d, gens));
}

std::string gate_diagnostic(const LocalGroup& F) {
  if (!F.is_primitive()) return "local group is not primitive";
  if (F.is_cyclic_of_prime_order()) return "local group is cyclic of prime order";
  return "";
}

void require_gate(const LocalGroup& F) {
  std::string why = gate_diagnostic(F);
  if (!why.empty()) throw std::invalid_argument(why);
}

int cmd_gate(int d, const std::string& gens) {
  LocalGroup F = LocalGroup::parse(d, gens);
  std::string why = gate_diagnostic(F);
  if (!why.empty()) {
    std::cerr << "gate: " << why << "\n";
    return 2;
  }
  std::cout << "gate: ok (order " << F.order() << ", transitive "
            << (F.is_transitive() ? "yes" : "no") << ", primitive yes)\n";
  return 0;
}

int cmd_classify(int d, const std::string& gens, const std::string& portrait_spec, int probe) {
  GroupPtr F = group_from_flags(d, gens);
  require_gate(*F);
  Portrait g = make_portrait(F, portrait_spec);
  Classification c = probe > 0 ? classify(g, probe) : classify(g);
  std::ostringstream out;
  if (c.kind == IsometryKind::Elliptic) {
    out << "elliptic fixed_vertex=" << vertex_name(c.min_vertex) << "\n";
  } else {
    out << "hyperbolic length=" << c.translation_length
        << " axis_vertex=" << vertex_name(c.min_vertex);
    if (c.attracting) out << " attracting=" << c.attracting->to_string();
    if (c.repelling) out << " repelling=" << c.repelling->to_string();
    out << (c.directions_exact ? " exact" : " truncated") << "\n";
  }
  std::cout << out.str();
  return 0;
}

int cmd_decompose(int d, const std::string& gens, const std::string& portrait_spec, int color) {
  GroupPtr F = group_from_flags(d, gens);
  Portrait g = make_portrait(F, portrait_spec);
  KAKTriple kak = kak_decompose(g, Edge{Vertex::base(), color});
  std::cout << "k1 = " << kak.k1.to_json() << "\n";
  std::cout << "a  = " << kak.a.to_json() << "\n";
  std::cout << "k2 = " << kak.k2.to_json() << "\n";
  std::cout << "displacement=" << dist(Vertex::base(), kak.a.apply(Vertex::base())) << "\n";
  return 0;
}

int cmd_compose(int d, const std::string& gens, const std::string& lhs, const std::string& rhs) {
  GroupPtr F = group_from_flags(d, gens);
  Portrait a = make_portrait(F, lhs);
  Portrait b = make_portrait(F, rhs);
  std::cout << compose(a, b).to_json() << "\n";
  return 0;
}

int cmd_modular(const ExperimentConfig& cfg) {
  GroupPtr F = make_group(cfg);
  require_gate(*F);
  ParabolicSpec H = make_parabolic(cfg, F);
  MinimalHyperbolic mh = minimal_hyperbolic(H);
  Rational delta = modular_value(H, mh.gamma);
  std::cout << "gamma_length=" << mh.length << " delta=" << to_string(delta) << "\n";
  return 0;
}

int cmd_cosets(const ExperimentConfig& cfg, int n_power, const std::string& out_path) {
  GroupPtr F = make_group(cfg);
  require_gate(*F);
  ParabolicSpec H = make_parabolic(cfg, F);
  Portrait f1 = make_portrait(F, cfg.f1);
  Portrait f2 = make_portrait(F, cfg.f2);

  if (H.kind == ParabolicKind::FullFixator) {
    MinimalHyperbolic mh = minimal_hyperbolic(H);
    Portrait g = compose(inverse(f2), compose(mh.gamma.pow(n_power), f1));
    std::vector<SolutionDomain> domains = solution_domains(g, H, mh, cfg.depth);
    emit(out_path, domains_csv(domains, cfg));
    return 0;
  }

  ParabolicSpec ambient = full_fixator(F, H.xi);
  MinimalHyperbolic mh = minimal_hyperbolic(ambient);
  Portrait g = compose(inverse(f2), compose(mh.gamma.pow(n_power), f1));
  ContainmentReport report = unimodular_containment(g, H, cfg.depth);
  std::ostringstream out;
  out << "# d=" << cfg.d << " H=" << kind_name(cfg.kind) << " xi=" << cfg.xi
      << " version=" << kVersion << "\n";
  out << "label_i,m_class,x_h,domain_size\n";
  for (const ContainmentSolution& s : report.solutions)
    out << vertex_name(s.k2_label) << ",0," << vertex_name(report.x_g) << ','
        << report.solutions.size() << "\n";
  emit(out_path, out.str());
  return report.verified ? 0 : 1;
}

int cmd_sn(int d, int p, const std::string& t_text, long m_max, const std::string& out_path) {
  Rational t = parse_rational(t_text);
  std::ostringstream out;
  out << "# d=" << d << " p=" << p << " t=" << to_string(t) << " version=" << kVersion << "\n";
  out << "M,sn\n";
  bool positive = true;
  QuadExt prev;
  bool have_prev = false;
  bool tail_decreasing = true;
  for (long M = 2; M <= m_max; M += 2) {
    QuadExt s = sn_sequence(d, p, t, M);
    if (s.sign() <= 0) positive = false;
    if (have_prev && M > m_max / 2 && (s - prev).sign() >= 0) tail_decreasing = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", s.to_double());
    out << M << ',' << buf << "\n";
    prev = s;
    have_prev = true;
  }
  emit(out_path, out.str());
  if (!positive || !tail_decreasing) {
    std::cerr << "sn: " << (!positive ? "nonpositive value in column" : "tail is not decreasing")
              << "\n";
    return 1;
  }
  return 0;
}

int cmd_decay(const ExperimentConfig& cfg, const std::string& out_override) {
  GroupPtr F = make_group(cfg);
  require_gate(*F);
  DecayReport report = decay_experiment(cfg);
  std::string out_path = out_override.empty() ? cfg.output : out_override;
  emit(out_path, decay_csv(report, cfg));
  if (!report.pass()) {
    std::cerr << "decay: assertions failed:"
              << (report.dominated ? "" : " no finite domination constant")
              << (report.eventually_decreasing ? "" : " primary column is not eventually decreasing")
              << (report.final_small ? "" : " final value is not below the threshold") << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal-group experiment driver"};
  app.set_version_flag("--version", std::string(arboreal::kVersion));
  app.require_subcommand(1);

  int d = 3;
  std::string gens = "(12),(123)";
  std::string portrait_spec = "id";
  std::string lhs = "id", rhs = "id";
  std::string config_path;
  std::string out_path;
  int probe = 0;
  int color = 1;
  int n_power = 1;
  int sn_p = 1;
  long sn_mmax = 100;
  std::string sn_t = "1/4";

  CLI::App* gate = app.add_subcommand("gate", "Check the local-group admissibility gate");
  gate->add_option("--d", d, "Tree degree");
  gate->add_option("--group", gens, "Local group generators, cycle notation");

  CLI::App* cls = app.add_subcommand("classify", "Classify one element");
  cls->add_option("--d", d, "Tree degree");
  cls->add_option("--group", gens, "Local group generators");
  cls->add_option("--portrait", portrait_spec, "id, inline JSON, or @file");
  cls->add_option("--probe", probe, "Probe depth override");

  CLI::App* dec = app.add_subcommand("decompose", "Cartan-style factorization of one element");
  dec->add_option("--d", d, "Tree degree");
  dec->add_option("--group", gens, "Local group generators");
  dec->add_option("--portrait", portrait_spec, "id, inline JSON, or @file");
  dec->add_option("--color", color, "Reference edge color at the base vertex");

  CLI::App* cmp = app.add_subcommand("compose", "Compose two elements, print the portrait");
  cmp->add_option("--d", d, "Tree degree");
  cmp->add_option("--group", gens, "Local group generators");
  cmp->add_option("--lhs", lhs, "Left factor");
  cmp->add_option("--rhs", rhs, "Right factor");

  CLI::App* mod = app.add_subcommand("modular", "Modular function of the configured subgroup");
  mod->add_option("--config", config_path, "Experiment config file")->required();

  CLI::App* cos = app.add_subcommand("cosets", "Coset-intersection domains as CSV");
  cos->add_option("--config", config_path, "Experiment config file")->required();
  cos->add_option("--n", n_power, "Translation power");
  cos->add_option("--out", out_path, "CSV destination (default stdout)");

  CLI::App* sn = app.add_subcommand("sn", "Comparison series values as CSV");
  sn->add_option("--d", d, "Tree degree");
  sn->add_option("--p", sn_p, "Half period");
  sn->add_option("--t", sn_t, "Ratio, exact rational");
  sn->add_option("--Mmax", sn_mmax, "Largest displacement");
  sn->add_option("--out", out_path, "CSV destination (default stdout)");

  CLI::App* dk = app.add_subcommand("decay", "Full decay experiment, CSV report");
  dk->add_option("--config", config_path, "Experiment config file")->required();
  dk->add_option("--out", out_path, "CSV destination (overrides config output)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gate->parsed()) return cmd_gate(d, gens);
    if (cls->parsed()) return cmd_classify(d, gens, portrait_spec, probe);
    if (dec->parsed()) return cmd_decompose(d, gens, portrait_spec, color);
    if (cmp->parsed()) return cmd_compose(d, gens, lhs, rhs);
    if (mod->parsed()) return cmd_modular(arboreal::parse_config_file(config_path));
    if (cos->parsed()) return cmd_cosets(arboreal::parse_config_file(config_path), n_power, out_path);
    if (sn->parsed()) return cmd_sn(d, sn_p, sn_t, sn_mmax, out_path);
    if (dk->parsed()) return cmd_decay(arboreal::parse_config_file(config_path), out_path);
  } catch (const arboreal::UnimodularCase& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const arboreal::InsufficientDepth& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
