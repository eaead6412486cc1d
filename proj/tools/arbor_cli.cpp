#include <algorithm>
#include <cstddef>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arbor/ball.hpp"
#include "arbor/caps.hpp"
#include "arbor/certificate.hpp"
#include "arbor/engine.hpp"
#include "arbor/error.hpp"
#include "arbor/graph_of_groups.hpp"
#include "arbor/hecke.hpp"
#include "arbor/json_io.hpp"
#include "arbor/perm_group.hpp"
#include "arbor/permutation.hpp"
#include "arbor/serre_graph.hpp"

namespace {

using ojson = nlohmann::ordered_json;

struct Options {
  std::string format;  // empty = per-command default
  bool strict = false;
  std::size_t cap_group_order = 0;
  std::size_t cap_ball_size = 0;

  int degree = 0;
  int radius = 0;
  std::vector<std::string> gens;
  std::string group_file;
  std::string gog_file;
  std::string tree_file;
  std::string certificate_file;
  std::vector<std::string> subgroup;
  std::string subgroup_file;
  std::vector<std::string> left;
  std::vector<std::string> right;
  bool assert_nonamenable = false;
  bool type_preserving = false;
};

void apply_caps(const Options& o) {
  if (o.cap_group_order > 0) arbor::global_caps().group_order = o.cap_group_order;
  if (o.cap_ball_size > 0) arbor::global_caps().ball_size = o.cap_ball_size;
}

std::string format_or(const Options& o, const char* fallback) {
  return o.format.empty() ? fallback : o.format;
}

arbor::PermGroup group_from_cycles(int degree, const std::vector<std::string>& cycles) {
  std::vector<arbor::Permutation> generators;
  for (const std::string& text : cycles) {
    generators.push_back(arbor::parse_cycles(text, degree));
  }
  return arbor::PermGroup(degree, std::move(generators));
}

arbor::PermGroup load_permgroup(const Options& o) {
  if (!o.group_file.empty() && !o.gens.empty()) {
    arbor::throw_invalid("give either --group or --gens, not both");
  }
  if (!o.group_file.empty()) {
    arbor::PermGroup group = arbor::group_from_json(arbor::load_json_file(o.group_file));
    if (o.degree > 0 && group.degree() != o.degree) {
      arbor::throw_invalid("--degree " + std::to_string(o.degree) +
                           " does not match the group file degree " +
                           std::to_string(group.degree()));
    }
    return group;
  }
  if (o.degree <= 0) arbor::throw_invalid("--degree is required with --gens");
  return group_from_cycles(o.degree, o.gens);
}

void emit_json(const ojson& j) { std::cout << arbor::dump_json(j); }

void emit_certificate(const arbor::Certificate& cert, const std::string& format) {
  if (format == "text") {
    std::string text = arbor::certificate_to_text(cert);
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  emit_json(arbor::certificate_to_json(cert));
}

int finish_certificate(const arbor::Certificate& cert, const Options& o) {
  emit_certificate(cert, format_or(o, "json"));
  if (o.strict && cert.verdict == arbor::Verdict::Inconclusive) return 1;
  return 0;
}

int run_classify_bm(const Options& o) {
  arbor::PermGroup f = load_permgroup(o);
  int degree = o.degree > 0 ? o.degree : f.degree();
  return finish_certificate(arbor::classify_bm(f, degree), o);
}

int run_analyze(const Options& o) {
  arbor::GraphOfGroups gog = arbor::gog_from_json(arbor::load_json_file(o.gog_file));
  arbor::Assertions assertions;
  assertions.nonamenable_group = o.assert_nonamenable;
  assertions.type_preserving = o.type_preserving;
  return finish_certificate(arbor::analyze(gog, assertions), o);
}

int run_hecke_dim(const Options& o) {
  arbor::PermGroup group = arbor::group_from_json(arbor::load_json_file(o.group_file));
  arbor::PermGroup subgroup = [&] {
    if (!o.subgroup_file.empty() && !o.subgroup.empty()) {
      arbor::throw_invalid("give either --subgroup or --subgroup-file, not both");
    }
    if (!o.subgroup_file.empty()) {
      return arbor::group_from_json(arbor::load_json_file(o.subgroup_file));
    }
    return group_from_cycles(group.degree(), o.subgroup);
  }();
  arbor::HeckeDimensionReport report = arbor::verify_hecke_dimension(group, subgroup);
  if (format_or(o, "text") == "text") {
    std::cout << "dim=" << report.corner_dim << " double_cosets=" << report.double_coset_count
              << " equal=" << (report.equal ? "true" : "false") << "\n";
    return 0;
  }
  ojson j;
  j["dim"] = report.corner_dim;
  j["double_cosets"] = report.double_coset_count;
  j["equal"] = report.equal;
  emit_json(j);
  return 0;
}

int run_double_cosets(const Options& o) {
  arbor::PermGroup group = arbor::group_from_json(arbor::load_json_file(o.group_file));
  arbor::PermGroup left = group_from_cycles(group.degree(), o.left);
  arbor::PermGroup right =
      o.right.empty() ? left : group_from_cycles(group.degree(), o.right);
  arbor::DoubleCosets dc = arbor::double_cosets(group, left, right);
  ojson j;
  j["count"] = dc.count();
  ojson reps = ojson::array();
  for (const arbor::Permutation& g : dc.representatives) {
    reps.push_back(arbor::format_cycles(g));
  }
  j["representatives"] = std::move(reps);
  j["sizes"] = dc.sizes;
  emit_json(j);
  return 0;
}

int run_reduce(const Options& o) {
  arbor::SerreGraph graph = arbor::graph_from_json(arbor::load_json_file(o.tree_file));
  arbor::SerreTree tree(std::move(graph));
  arbor::ReductionResult reduction = arbor::suppress_degree_two(tree);
  emit_json(arbor::reduction_to_json(reduction));
  return 0;
}

int run_ball_orbits(const Options& o) {
  arbor::PermGroup f = load_permgroup(o);
  if (o.radius < 1) arbor::throw_invalid("--radius must be at least 1");
  arbor::ColouredBall ball = arbor::build_ball(f.degree(), o.radius);
  std::vector<arbor::BallAutomorphism> group = arbor::ball_group(ball, f);
  ojson j;
  j["degree"] = f.degree();
  j["radius"] = o.radius;
  j["ball_size"] = ball.size();
  j["group_order"] = group.size();
  ojson spheres = ojson::array();
  for (int r = 1; r <= o.radius; ++r) {
    std::vector<std::vector<int>> orbits = arbor::sphere_orbits(ball, group, r);
    auto [first, last] = ball.sphere_range(r);
    ojson rec;
    rec["radius"] = r;
    rec["size"] = last - first;
    rec["orbit_count"] = orbits.size();
    rec["orbits"] = orbits;
    spheres.push_back(std::move(rec));
  }
  j["spheres"] = std::move(spheres);
  emit_json(j);
  return 0;
}

int run_validate(const Options& o) {
  arbor::Certificate cert =
      arbor::certificate_from_json(arbor::load_json_file(o.certificate_file));
  bool have_gog = !o.gog_file.empty();
  bool have_group = !o.group_file.empty() || !o.gens.empty();
  if (have_gog && have_group) {
    arbor::throw_invalid("give either --gog or a local action, not both");
  }
  arbor::ReplayReport report;
  if (have_gog) {
    arbor::GraphOfGroups gog = arbor::gog_from_json(arbor::load_json_file(o.gog_file));
    auto assumed = [&](const char* name) {
      return std::find(cert.assumptions.begin(), cert.assumptions.end(), name) !=
             cert.assumptions.end();
    };
    arbor::Assertions assertions;
    assertions.nonamenable_group = assumed("group non-amenable");
    assertions.type_preserving = assumed("action type-preserving");
    report = arbor::replay_analyze(cert, gog, assertions);
  } else if (have_group) {
    arbor::PermGroup f = load_permgroup(o);
    int degree = o.degree > 0 ? o.degree : f.degree();
    report = arbor::replay_classify_bm(cert, f, degree);
  } else {
    report.ok = arbor::verdict_supported(cert);
    if (!report.ok) {
      report.failures.push_back("verdict is not supported by the recorded steps");
    }
  }
  ojson j;
  j["ok"] = report.ok;
  j["failures"] = report.failures;
  emit_json(j);
  return report.ok ? 0 : 1;
}

int report_error(const arbor::Error& e) {
  const std::string message = e.what();
  if (message.rfind("malformed JSON", 0) == 0) {
    std::cerr << "error: " << message << "\n";
    return 2;
  }
  switch (e.kind()) {
    case arbor::ErrorKind::invalid_input:
      std::cerr << "error: invalid input: " << message << "\n";
      break;
    case arbor::ErrorKind::cap_exceeded:
      std::cerr << "error: cap exceeded: " << message << "\n";
      break;
    case arbor::ErrorKind::missing_assertion:
      std::cerr << "error: missing assertion: " << message << "\n";
      break;
  }
  return 2;
}

void add_output_flags(CLI::App* cmd, Options& o, bool with_strict) {
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  if (with_strict) {
    cmd->add_flag("--strict", o.strict, "exit 1 when the verdict is Inconclusive");
  }
  cmd->add_option("--cap-group-order", o.cap_group_order,
                  "override the group-order cap for this run");
  cmd->add_option("--cap-ball-size", o.cap_ball_size,
                  "override the ball-size cap for this run");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groups acting on trees: local actions, quotient data, certified verdicts"};
  app.require_subcommand(1);
  Options o;

  CLI::App* classify = app.add_subcommand(
      "classify-bm", "classify the universal group of a local action");
  classify->add_option("--degree", o.degree, "degree of the local action");
  classify->add_option("--gens", o.gens, "generator in cycle notation (repeatable)");
  classify->add_option("--group", o.group_file, "permutation group JSON file");
  add_output_flags(classify, o, true);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "run the decision pipeline on a graph of groups");
  analyze->add_option("--gog", o.gog_file, "graph-of-groups JSON file")->required();
  analyze->add_flag("--assert-nonamenable", o.assert_nonamenable,
                    "assert that the acting group is non-amenable");
  analyze->add_flag("--type-preserving", o.type_preserving,
                    "assert that the quotient data comes from a type-preserving action");
  add_output_flags(analyze, o, true);

  CLI::App* hecke = app.add_subcommand(
      "hecke-dim", "corner dimension vs double-coset count for a subgroup");
  hecke->add_option("--group", o.group_file, "permutation group JSON file")->required();
  hecke->add_option("--subgroup", o.subgroup, "subgroup generator in cycle notation "
                                              "(repeatable)");
  hecke->add_option("--subgroup-file", o.subgroup_file, "subgroup JSON file");
  add_output_flags(hecke, o, false);

  CLI::App* cosets = app.add_subcommand(
      "double-cosets", "double cosets H\\G/K of a finite group");
  cosets->add_option("--group", o.group_file, "permutation group JSON file")->required();
  cosets->add_option("--left", o.left, "generator of H in cycle notation (repeatable)");
  cosets->add_option("--right", o.right,
                     "generator of K in cycle notation (repeatable, defaults to H)");
  add_output_flags(cosets, o, false);

  CLI::App* reduce = app.add_subcommand(
      "reduce", "suppress the degree-2 vertices of a boundary-marked tree");
  reduce->add_option("--tree", o.tree_file, "tree JSON file")->required();
  add_output_flags(reduce, o, false);

  CLI::App* orbits = app.add_subcommand(
      "ball-orbits", "sphere orbits of a ball group acting on a coloured ball");
  orbits->add_option("--degree", o.degree, "degree of the local action");
  orbits->add_option("--radius", o.radius, "ball radius")->required();
  orbits->add_option("--gens", o.gens, "generator in cycle notation (repeatable)");
  orbits->add_option("--group", o.group_file, "permutation group JSON file");
  add_output_flags(orbits, o, false);

  CLI::App* validate = app.add_subcommand(
      "validate", "replay a certificate against its input");
  validate->add_option("--certificate", o.certificate_file, "certificate JSON file")
      ->required();
  validate->add_option("--gog", o.gog_file, "graph-of-groups JSON file");
  validate->add_option("--degree", o.degree, "degree of the local action");
  validate->add_option("--gens", o.gens, "generator in cycle notation (repeatable)");
  validate->add_option("--group", o.group_file, "permutation group JSON file");
  add_output_flags(validate, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: invalid arguments: " << e.what() << "\n";
    return 2;
  }

  try {
    apply_caps(o);
    if (app.got_subcommand(classify)) return run_classify_bm(o);
    if (app.got_subcommand(analyze)) return run_analyze(o);
    if (app.got_subcommand(hecke)) return run_hecke_dim(o);
    if (app.got_subcommand(cosets)) return run_double_cosets(o);
    if (app.got_subcommand(reduce)) return run_reduce(o);
    if (app.got_subcommand(orbits)) return run_ball_orbits(o);
    if (app.got_subcommand(validate)) return run_validate(o);
  } catch (const arbor::Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: invalid input: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
