// strata-corr: command-line front end for the correspondence engine.
//
// Exit codes: 0 pass, 1 parse/usage error, 2 validation failure (also d1^2 != 0),
// 3 inconsistent data, 4 non-unique decomposition, 5 composition mismatch,
// 6 equivariance failure.

#include "strata/correspondence.hpp"
#include "strata/generators.hpp"
#include "strata/text_format.hpp"
#include "strata/wss.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace strata;

namespace {

enum Exit { kPass = 0, kParse = 1, kInvalid = 2, kInconsistent = 3, kNonUnique = 4, kMismatch = 5, kNotEquivariant = 6 };

// Collects report lines; everything is printed to stdout and, with --report,
// copied to a file.
class Report {
 public:
  void line(const std::string& s) { os_ << s << '\n'; }
  int finish(int code, const std::string& report_path) {
    std::cout << os_.str() << std::flush;
    if (!report_path.empty()) write_file(report_path, os_.str());
    return code;
  }

 private:
  std::ostringstream os_;
};

int thread_count() {
  const char* env = std::getenv("STRATA_CORR_THREADS");
  if (!env || !*env) return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  try {
    return std::max(0, std::stoi(env));
  } catch (const std::exception&) {
    throw ParseError("STRATA_CORR_THREADS must be a nonnegative integer", "environment");
  }
}

IncidenceStructure load_structure(const std::string& path) {
  if (path.empty()) throw ParseError("no structure file given", "--structure");
  try {
    return parse_structure(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.what(), path);
  }
}

LevelOneInput load_family(const std::string& path, const IncidenceStructure& s) {
  try {
    return parse_family(read_file(path), s);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), path);
  }
}

// Reports violations and returns false when the structure is invalid.
bool check_valid(const IncidenceStructure& s, Report& rep) {
  const auto v = validate(s);
  for (const auto& msg : v) rep.line("VIOLATION " + msg);
  return v.empty();
}

std::string pair_string(const StratumKey& I, const StratumKey& J) { return key_string(I) + " " + key_string(J); }

int solver_exit(const SolverError& e, Report& rep) {
  rep.line("ERROR " + std::string(e.what()));
  return e.kind() == SolverError::Kind::inconsistent ? kInconsistent : kNonUnique;
}

struct Options {
  std::string structure;
  std::string structure_pos;
  std::vector<std::string> families;
  std::string out;
  std::string report;
  int level = 0;
  std::string example_name;
  int t = 0;
  std::string combination;

  const std::string& structure_path() const { return structure.empty() ? structure_pos : structure; }
};

int cmd_validate(const Options& o) {
  Report rep;
  const IncidenceStructure s = load_structure(o.structure_path());
  const bool ok = check_valid(s, rep);
  rep.line(std::string("RESULT validate ") + (ok ? "PASS" : "FAIL"));
  return rep.finish(ok ? kPass : kInvalid, o.report);
}

int cmd_levels(const Options& o) {
  Report rep;
  const IncidenceStructure s = load_structure(o.structure_path());
  if (o.families.size() != 1) throw ParseError("levels needs exactly one --family", "--family");
  if (!check_valid(s, rep)) return rep.finish(kInvalid, o.report);
  const LevelOneInput in = level_one(load_family(o.families[0], s));
  try {
    const CorrespondenceFamily f = compute_all_levels(s, in, {o.level, thread_count()});
    const std::string text = write_family(f);
    if (o.out.empty()) {
      std::cout << text;
    } else {
      write_file(o.out, text);
    }
    for (int m = 1; m <= f.depth(); ++m)
      for (const auto& [k, c] : f.level(m)) rep.line("CLASS m=" + std::to_string(m) + " " + pair_string(k.first, k.second) + " " + c.to_string());
    rep.line("RESULT levels PASS");
    if (o.out.empty()) {
      if (!o.report.empty()) write_file(o.report, "RESULT levels PASS\n");
      return kPass;
    }
    return rep.finish(kPass, o.report);
  } catch (const SolverError& e) {
    return rep.finish(solver_exit(e, rep), o.report);
  }
}

int cmd_compose_check(const Options& o) {
  Report rep;
  const IncidenceStructure s = load_structure(o.structure_path());
  if (o.families.size() != 2) throw ParseError("compose-check needs exactly two --family files (first, then second)", "--family");
  if (!check_valid(s, rep)) return rep.finish(kInvalid, o.report);
  const LevelOneInput a = level_one(load_family(o.families[0], s));
  const LevelOneInput b = level_one(load_family(o.families[1], s));
  try {
    const CompositionReport r = check_composition(s, a, b, {o.level, thread_count()});
    rep.line("CHECK compared " + std::to_string(r.compared) + " entries");
    for (const auto& mm : r.mismatches)
      rep.line("MISMATCH m=" + std::to_string(mm.level) + " " + pair_string(mm.I, mm.K) + " expected " + mm.expected +
               " got " + mm.actual);
    rep.line(std::string("RESULT compose-check ") + (r.pass ? "PASS" : "FAIL"));
    return rep.finish(r.pass ? kPass : kMismatch, o.report);
  } catch (const SolverError& e) {
    return rep.finish(solver_exit(e, rep), o.report);
  }
}

void print_page(const E1Page& page, Report& rep) {
  for (const auto& [bd, term] : page.terms)
    for (const auto& sm : term.summands)
      rep.line("TERM i=" + std::to_string(bd.first) + " j=" + std::to_string(bd.second) + " s=" + std::to_string(sm.s) +
               " m=" + std::to_string(sm.m) + " k=" + std::to_string(sm.k) + " twist=" + std::to_string(sm.twist()) +
               " dim=" + std::to_string(sm.dim));
}

int cmd_e1(const Options& o) {
  Report rep;
  const IncidenceStructure s = load_structure(o.structure_path());
  if (!check_valid(s, rep)) return rep.finish(kInvalid, o.report);
  const E1Page page = build_e1(s);
  print_page(page, rep);
  bool ok = true;
  for (const auto& c : check_d1_squared(page)) {
    rep.line("CHECK " + c.name + " " + (c.pass ? "PASS" : "FAIL " + c.counterexample));
    ok = ok && c.pass;
  }
  if (!ok) {
    rep.line("RESULT e1 FAIL d1^2 != 0");
    return rep.finish(kInvalid, o.report);
  }
  for (const auto& [bd, r] : e2_ranks(page))
    rep.line("E2 i=" + std::to_string(bd.first) + " j=" + std::to_string(bd.second) + " rank=" + std::to_string(r));
  const auto totals = e2_totals(page);
  for (std::size_t w = 0; w < totals.size(); ++w)
    rep.line("E2TOTAL w=" + std::to_string(w) + " rank=" + std::to_string(totals[w]));
  rep.line("RESULT e1 PASS");
  return rep.finish(kPass, o.report);
}

int cmd_equivariance(const Options& o) {
  Report rep;
  const IncidenceStructure s = load_structure(o.structure_path());
  if (o.families.size() != 1) throw ParseError("equivariance needs exactly one --family", "--family");
  if (!check_valid(s, rep)) return rep.finish(kInvalid, o.report);
  const LevelOneInput in = level_one(load_family(o.families[0], s));
  CorrespondenceFamily f;
  try {
    f = compute_all_levels(s, in, {0, thread_count()});
  } catch (const SolverError& e) {
    return rep.finish(solver_exit(e, rep), o.report);
  }
  const E1Page page = build_e1(s);
  if (!d1_squared_zero(page)) {
    for (const auto& c : check_d1_squared(page))
      if (!c.pass) rep.line("CHECK " + c.name + " FAIL " + c.counterexample);
    rep.line("RESULT equivariance FAIL d1^2 != 0");
    return rep.finish(kInvalid, o.report);
  }
  bool ok = true;
  for (const auto& c : check_equivariance(page, f)) {
    rep.line("CHECK " + c.name + " " + (c.pass ? "PASS" : "FAIL " + c.counterexample));
    ok = ok && c.pass;
  }
  rep.line(std::string("RESULT equivariance ") + (ok ? "PASS" : "FAIL"));
  return rep.finish(ok ? kPass : kNotEquivariant, o.report);
}

// "identity:3,rotation:-1" against the named generator families.
LevelOneInput parse_combination(const std::string& spec,
                                const std::vector<std::pair<std::string, LevelOneInput>>& gens) {
  std::vector<std::pair<Integer, LevelOneInput>> terms;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError("expected name:coefficient, got '" + item + "'", "--combination");
    const std::string name = item.substr(0, colon);
    Integer c;
    if (c.set_str(item.substr(colon + 1), 10) != 0)
      throw ParseError("malformed integer in '" + item + "'", "--combination");
    const LevelOneInput* fam = nullptr;
    for (const auto& [n, f] : gens)
      if (n == name) fam = &f;
    if (!fam) throw ParseError("unknown generator family '" + name + "'", "--combination");
    terms.emplace_back(c, *fam);
  }
  return combination(terms);
}

int cmd_example(const Options& o) {
  Report rep;
  IncidenceStructure s(1, 1);
  std::string base;
  if (o.example_name == "chain_p1") {
    const int t = o.t ? o.t : 2;
    if (t < 1) throw ParseError("chain_p1 needs --t >= 1", "--t");
    s = chain_p1(t);
    base = "chain" + std::to_string(t);
  } else if (o.example_name == "cycle_p1") {
    const int t = o.t ? o.t : 3;
    if (t < 3) throw ParseError("cycle_p1 needs --t >= 3", "--t");
    s = cycle_p1(t);
    base = "cycle" + std::to_string(t);
  } else if (o.example_name == "triple_plane") {
    s = triple_plane();
    base = "triple_plane";
  } else if (o.example_name == "resolved_triple_plane") {
    s = resolved_triple_plane();
    base = "resolved_triple_plane";
  } else {
    throw ParseError("unknown example '" + o.example_name + "'", "name");
  }
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  const auto gens = generator_families(o.example_name, s);
  write_file(dir / (base + ".wss"), write_structure(s));
  rep.line("WROTE " + (dir / (base + ".wss")).string());
  for (const auto& [name, fam] : gens) {
    const fs::path p = dir / (base + "." + name + ".fam");
    write_file(p, write_family(fam));
    rep.line("WROTE " + p.string());
  }
  if (!o.combination.empty()) {
    const fs::path p = dir / (base + ".combination.fam");
    write_file(p, write_family(parse_combination(o.combination, gens)));
    rep.line("WROTE " + p.string());
  }
  return rep.finish(kPass, o.report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stratum correspondences on semistable special fibers"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_structure = [&](CLI::App* sub) {
    sub->add_option("--structure", o.structure, "Incidence structure file");
    sub->add_option("file", o.structure_pos, "Incidence structure file (positional form)");
    sub->add_option("--report", o.report, "Also write the report to this file");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check the invariants of an incidence structure");
  add_structure(validate_cmd);

  CLI::App* levels_cmd = app.add_subcommand("levels", "Compute every level from level-1 data");
  add_structure(levels_cmd);
  levels_cmd->add_option("--family", o.families, "Level-1 family file")->required();
  levels_cmd->add_option("--out", o.out, "Write the full family here (default: stdout)");
  levels_cmd->add_option("--level", o.level, "Highest level to compute")->check(CLI::NonNegativeNumber);

  CLI::App* compose_cmd = app.add_subcommand("compose-check", "Check that recursion commutes with composition");
  add_structure(compose_cmd);
  compose_cmd->add_option("--family", o.families, "First family, then second family")->required();
  compose_cmd->add_option("--level", o.level, "Highest level to compare")->check(CLI::NonNegativeNumber);

  CLI::App* e1_cmd = app.add_subcommand("e1", "Build the E1 page, check d1^2 = 0 and report E2 ranks");
  add_structure(e1_cmd);

  CLI::App* equi_cmd = app.add_subcommand("equivariance", "Check that a family's action commutes with d1");
  add_structure(equi_cmd);
  equi_cmd->add_option("--family", o.families, "Level-1 family file")->required();

  CLI::App* example_cmd = app.add_subcommand("example", "Write a built-in structure and its generator families");
  example_cmd->add_option("name", o.example_name, "chain_p1, cycle_p1, triple_plane or resolved_triple_plane")->required();
  example_cmd->add_option("--t", o.t, "Number of components");
  example_cmd->add_option("--out", o.out, "Output directory (default: .)");
  example_cmd->add_option("--combination", o.combination, "Also write an integer combination, e.g. identity:3,rotation:-1");
  example_cmd->add_option("--report", o.report, "Also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kParse;
  }

  try {
    if (*validate_cmd) return cmd_validate(o);
    if (*levels_cmd) return cmd_levels(o);
    if (*compose_cmd) return cmd_compose_check(o);
    if (*e1_cmd) return cmd_e1(o);
    if (*equi_cmd) return cmd_equivariance(o);
    if (*example_cmd) return cmd_example(o);
  } catch (const ParseError& e) {
    std::cout << "ERROR parse: " << e.what() << '\n';
    return kParse;
  } catch (const FamilyError& e) {
    std::cout << "ERROR family: " << e.what() << '\n';
    return kParse;
  } catch (const std::exception& e) {
    std::cout << "ERROR " << e.what() << '\n';
    return kParse;
  }
  return kParse;
}
