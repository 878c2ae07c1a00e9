/*
 * Copyright 2026 The itle authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * Command-line front end. Exit status: 0 = verdict computed (whatever
 * the verdict), 1 = input error, 2 = internal failure. The `paper`
 * subcommand exits 1 when any suite item fails.
 */

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "itle/acceptance.hpp"
#include "itle/bisim.hpp"
#include "itle/checker.hpp"
#include "itle/countermodels.hpp"
#include "itle/formula.hpp"
#include "itle/formula_text.hpp"
#include "itle/model.hpp"
#include "itle/search.hpp"

namespace {

using nlohmann::json;

constexpr const char* report_schema = "itle-report/1";

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

/* Model arguments are file paths, or named artifacts with a '@' prefix. */
itle::Model load_model(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') {
    auto artifact = itle::named_artifact(arg.substr(1));
    if (!artifact) throw InputError("unknown artifact '" + arg + "'");
    if (!artifact->is_model()) throw InputError("'" + arg + "' names a formula, not a model");
    return artifact->model();
  }
  return itle::parse_model(slurp(arg));
}

itle::Formula load_formula(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') {
    auto artifact = itle::named_artifact(arg.substr(1));
    if (!artifact) throw InputError("unknown artifact '" + arg + "'");
    if (artifact->is_model()) throw InputError("'" + arg + "' names a model, not a formula");
    return artifact->formula();
  }
  return itle::parse_formula(arg);
}

itle::FrameClass parse_class(const std::string& s) {
  if (s == "expanding") return itle::FrameClass::Expanding;
  if (s == "persistent") return itle::FrameClass::Persistent;
  if (s == "ht" || s == "here-and-there") return itle::FrameClass::HereAndThere;
  throw InputError("unknown frame class '" + s + "' (expanding, persistent, ht)");
}

struct Timing {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
};

void print_report(const json& report, bool as_json) {
  if (as_json) {
    std::cout << report.dump(2) << '\n';
    return;
  }
  std::cout << report["human"].get<std::string>();
}

json base_report(const std::string& command, const Timing& t) {
  json r;
  r["schema"] = report_schema;
  r["command"] = command;
  r["timing_ms"] = t.ms();
  return r;
}

struct CheckArgs {
  std::string model, world, formula;
  std::string formula_file;
  bool json_out = false;
};

int run_check(const CheckArgs& a) {
  Timing t;
  itle::Model m = load_model(a.model);
  std::vector<itle::Formula> formulas;
  if (!a.formula_file.empty()) {
    formulas = itle::parse_formula_lines(slurp(a.formula_file));
  } else {
    formulas.push_back(load_formula(a.formula));
  }
  int w = m.world_index(a.world);
  itle::Evaluator ev(m);
  json verdicts = json::array();
  std::ostringstream human;
  for (const auto& f : formulas) {
    bool sat = ev.satisfies(w, f);
    verdicts.push_back({{"formula", itle::print_formula(f)}, {"verdict", sat}});
    human << (sat ? "true" : "false") << "  " << itle::print_formula(f) << '\n';
  }
  json r = base_report("check", t);
  r["model"] = a.model;
  r["world"] = a.world;
  r["results"] = verdicts;
  r["human"] = human.str();
  print_report(r, a.json_out);
  return 0;
}

struct ValidArgs {
  std::string model, formula;
  std::string formula_file;
  bool json_out = false;
};

int run_valid(const ValidArgs& a) {
  Timing t;
  itle::Model m = load_model(a.model);
  std::vector<itle::Formula> formulas;
  if (!a.formula_file.empty())
    formulas = itle::parse_formula_lines(slurp(a.formula_file));
  else
    formulas.push_back(load_formula(a.formula));
  json results = json::array();
  std::ostringstream human;
  for (const auto& f : formulas) {
    itle::Validity v = itle::valid_in_model(m, f);
    json one = {{"formula", itle::print_formula(f)}, {"valid", v.valid}};
    if (!v.valid) one["counter_world"] = m.world_name(v.counter_world);
    results.push_back(one);
    if (v.valid)
      human << "valid  " << itle::print_formula(f) << '\n';
    else
      human << "falsified at " << m.world_name(v.counter_world) << "  " << itle::print_formula(f) << '\n';
  }
  json r = base_report("valid", t);
  r["model"] = a.model;
  r["results"] = results;
  r["human"] = human.str();
  print_report(r, a.json_out);
  return 0;
}

struct SearchArgs {
  std::string formula, formula2;
  std::string frame_class = "expanding";
  int max_worlds = 3;
  std::vector<std::string> atoms;
  std::optional<std::uint64_t> limit;
  bool json_out = false;
};

itle::SearchBounds bounds_from(const SearchArgs& a, const itle::Formula& f,
                               const itle::Formula* g = nullptr) {
  itle::SearchBounds b;
  b.max_worlds = a.max_worlds;
  b.frame_class = parse_class(a.frame_class);
  b.limit = a.limit;
  if (a.atoms.empty()) {
    auto atoms = itle::atoms_of(f);
    if (g)
      for (const auto& atom : itle::atoms_of(*g)) atoms.insert(atom);
    b.atoms.assign(atoms.begin(), atoms.end());
  } else {
    b.atoms = a.atoms;
  }
  return b;
}

json search_report(const char* command, const itle::SearchResult& res, const Timing& t) {
  json r = base_report(command, t);
  r["verdict"] = itle::to_string(res.verdict);
  r["visited"] = res.visited;
  std::ostringstream human;
  if (res.verdict == itle::SearchVerdict::Found) {
    r["witness"] = {{"world", res.model->world_name(res.world)}, {"model", itle::serialize_model(*res.model)}};
    human << "found at world " << res.model->world_name(res.world) << " after " << res.visited
          << " models:\n"
          << itle::serialize_model(*res.model);
  } else {
    human << itle::to_string(res.verdict) << " after " << res.visited << " models\n";
  }
  r["human"] = human.str();
  return r;
}

int run_countermodel(const SearchArgs& a) {
  Timing t;
  itle::Formula f = load_formula(a.formula);
  itle::SearchResult res = itle::find_countermodel(f, bounds_from(a, f));
  json r = search_report("countermodel", res, t);
  r["formula"] = itle::print_formula(f);
  print_report(r, a.json_out);
  return 0;
}

int run_equiv(const SearchArgs& a) {
  Timing t;
  itle::Formula f = load_formula(a.formula);
  itle::Formula g = load_formula(a.formula2);
  itle::SearchResult res = itle::check_equivalence(f, g, bounds_from(a, f, &g));
  json r = search_report("equiv", res, t);
  r["left"] = itle::print_formula(f);
  r["right"] = itle::print_formula(g);
  print_report(r, a.json_out);
  return 0;
}

int run_countermodel_get(const std::string& name, bool json_out) {
  Timing t;
  auto artifact = itle::named_artifact(name);
  if (!artifact) throw InputError("unknown artifact '" + name + "'");
  json r = base_report("countermodel get", t);
  r["name"] = artifact->name;
  r["provenance"] = artifact->provenance;
  if (artifact->is_model()) {
    r["model"] = itle::serialize_model(artifact->model());
    r["human"] = "# " + artifact->provenance + "\n" + itle::serialize_model(artifact->model());
  } else {
    r["formula"] = itle::print_formula(artifact->formula());
    r["human"] = "# " + artifact->provenance + "\n" + itle::print_formula(artifact->formula()) + "\n";
  }
  print_report(r, json_out);
  return 0;
}

struct BisimArgs {
  std::string model1, model2;
  std::string kind = "next";
  int depth = 0;
  std::string family_file;
  std::vector<std::string> pairs;
  bool json_out = false;
};

int run_bisim(const BisimArgs& a) {
  Timing t;
  itle::Model m1 = load_model(a.model1);
  itle::Model m2 = load_model(a.model2);
  auto kind = itle::bisim_kind_from_string(a.kind);
  if (!kind) throw InputError("unknown kind '" + a.kind + "' (next, diam, box, until, release)");

  json r = base_report("bisim", t);
  r["kind"] = a.kind;
  std::ostringstream human;

  if (!a.family_file.empty()) {
    itle::BisimFamily fam = itle::parse_family(m1, m2, slurp(a.family_file));
    auto violations = itle::verify_family(*kind, fam);
    r["depth"] = fam.depth();
    r["violations"] = json::array();
    for (const auto& v : violations)
      r["violations"].push_back({{"clause", v.clause},
                                 {"level", v.level},
                                 {"left", m1.world_name(v.w1)},
                                 {"right", m2.world_name(v.w2)},
                                 {"detail", v.detail}});
    if (violations.empty()) {
      human << "family verifies: a bounded " << a.kind << "-bisimulation of depth " << fam.depth() << '\n';
    } else {
      human << violations.size() << " clause violations:\n";
      for (const auto& v : violations)
        human << "  " << v.clause << " at level " << v.level << " pair (" << m1.world_name(v.w1) << ","
              << m2.world_name(v.w2) << "): " << v.detail << '\n';
    }
    r["human"] = human.str();
    print_report(r, a.json_out);
    return 0;
  }

  itle::BisimFamily fam = itle::max_family(*kind, m1, m2, a.depth);
  r["depth"] = a.depth;
  r["family"] = itle::serialize_family(fam);
  human << itle::serialize_family(fam);
  json pair_reports = json::array();
  for (const auto& spec : a.pairs) {
    auto comma = spec.find(',');
    if (comma == std::string::npos) throw InputError("--pair wants 'left,right', got '" + spec + "'");
    int w1 = m1.world_index(spec.substr(0, comma));
    int w2 = m2.world_index(spec.substr(comma + 1));
    int deepest = -1;
    for (std::size_t i = 0; i < fam.chain.size(); ++i)
      if (fam.chain[i].contains(w1, w2)) deepest = static_cast<int>(i);
    pair_reports.push_back({{"left", m1.world_name(w1)}, {"right", m2.world_name(w2)}, {"deepest", deepest}});
    if (deepest < 0)
      human << "pair (" << spec << "): not related at any level\n";
    else
      human << "pair (" << spec << "): deepest level " << deepest << '\n';
  }
  if (!pair_reports.empty()) r["pairs"] = pair_reports;
  r["human"] = human.str();
  print_report(r, a.json_out);
  return 0;
}

int run_normal_form(const std::string& formula, bool json_out) {
  Timing t;
  itle::Formula f = load_formula(formula);
  itle::Formula nf = itle::next_normal_form(f);
  json r = base_report("normal-form", t);
  r["input"] = itle::print_formula(f);
  r["output"] = itle::print_formula(nf);
  r["human"] = itle::print_formula(nf) + "\n";
  print_report(r, json_out);
  return 0;
}

struct PaperArgs {
  std::optional<std::string> only;
  std::uint64_t seed = 20260810;
  unsigned threads = 0;
  bool json_out = false;
};

int run_paper(const PaperArgs& a) {
  Timing t;
  itle::acceptance::Options opt;
  opt.seed = a.seed;
  opt.only = a.only;
  opt.threads = a.threads;
  auto items = itle::acceptance::run(opt);
  json r = base_report("paper", t);
  json arr = json::array();
  std::ostringstream human;
  bool all = true;
  for (const auto& item : items) {
    arr.push_back({{"id", item.id},
                   {"title", item.title},
                   {"pass", item.pass},
                   {"detail", item.detail},
                   {"seconds", item.seconds}});
    char buf[32];
    std::snprintf(buf, sizeof buf, "%7.2fs", item.seconds);
    human << (item.pass ? "PASS" : "FAIL") << "  " << item.id << buf << "  " << item.detail << '\n';
    all = all && item.pass;
  }
  human << (all ? "all items passed\n" : "SOME ITEMS FAILED\n");
  r["items"] = arr;
  r["pass"] = all;
  r["human"] = human.str();
  print_report(r, a.json_out);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for an intuitionistic temporal logic over finite dynamic posets"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "evaluate a formula at a world of a model");
  check->add_option("model", check_args.model, "model file or @artifact")->required();
  check->add_option("world", check_args.world, "world name")->required();
  check->add_option("formula", check_args.formula, "formula text or @artifact");
  check->add_option("--formula-file", check_args.formula_file, "check every formula in a file");
  check->add_flag("--json", check_args.json_out, "machine-readable report");

  ValidArgs valid_args;
  auto* valid = app.add_subcommand("valid", "check a formula at every world of a model");
  valid->add_option("model", valid_args.model, "model file or @artifact")->required();
  valid->add_option("formula", valid_args.formula, "formula text or @artifact");
  valid->add_option("--formula-file", valid_args.formula_file, "check every formula in a file");
  valid->add_flag("--json", valid_args.json_out, "machine-readable report");

  SearchArgs cm_args;
  std::string cm_first, cm_second;
  auto* cm = app.add_subcommand("countermodel",
                                "search the bounded class for a countermodel, or `get` a named artifact");
  cm->add_option("formula", cm_first, "formula (or the word 'get')")->required();
  cm->add_option("name", cm_second, "artifact name after 'get'");
  cm->add_option("--class", cm_args.frame_class, "expanding | persistent | ht")->capture_default_str();
  cm->add_option("--max-worlds", cm_args.max_worlds, "size bound")->capture_default_str();
  cm->add_option("--atoms", cm_args.atoms, "atoms for the enumeration")->delimiter(',');
  cm->add_option("--limit", cm_args.limit, "cap on models visited");
  cm->add_flag("--json", cm_args.json_out, "machine-readable report");

  SearchArgs eq_args;
  auto* eq = app.add_subcommand("equiv", "search the bounded class for a world separating two formulas");
  eq->add_option("left", eq_args.formula, "first formula")->required();
  eq->add_option("right", eq_args.formula2, "second formula")->required();
  eq->add_option("--class", eq_args.frame_class, "expanding | persistent | ht")->capture_default_str();
  eq->add_option("--max-worlds", eq_args.max_worlds, "size bound")->capture_default_str();
  eq->add_option("--atoms", eq_args.atoms, "atoms for the enumeration")->delimiter(',');
  eq->add_option("--limit", eq_args.limit, "cap on models visited");
  eq->add_flag("--json", eq_args.json_out, "machine-readable report");

  BisimArgs bisim_args;
  auto* bisim = app.add_subcommand("bisim", "compute the greatest bounded bisimulation, or verify one");
  bisim->add_option("model1", bisim_args.model1, "left model file or @artifact")->required();
  bisim->add_option("model2", bisim_args.model2, "right model file or @artifact")->required();
  bisim->add_option("--kind", bisim_args.kind, "next | diam | box | until | release")->capture_default_str();
  bisim->add_option("--depth", bisim_args.depth, "chain depth n")->capture_default_str();
  bisim->add_option("--family", bisim_args.family_file, "verify this family file instead of computing");
  bisim->add_option("--pair", bisim_args.pairs, "report the deepest level holding 'left,right'");
  bisim->add_flag("--json", bisim_args.json_out, "machine-readable report");

  std::string nf_formula;
  bool nf_json = false;
  auto* nf = app.add_subcommand("normal-form", "push every X down to the atoms (persistent-class equivalence)");
  nf->add_option("formula", nf_formula, "formula text or @artifact")->required();
  nf->add_flag("--json", nf_json, "machine-readable report");

  PaperArgs paper_args;
  std::string paper_only;
  auto* paper = app.add_subcommand("paper", "run the bundled reproduction suite");
  paper->add_option("--only", paper_only, "run a single item by id");
  paper->add_option("--seed", paper_args.seed, "seed for the randomized items")->capture_default_str();
  paper->add_option("--threads", paper_args.threads, "worker threads (0 = all cores)");
  paper->add_flag("--json", paper_args.json_out, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(check)) {
      if (check_args.formula.empty() && check_args.formula_file.empty())
        throw InputError("check needs a formula or --formula-file");
      return run_check(check_args);
    }
    if (app.got_subcommand(valid)) {
      if (valid_args.formula.empty() && valid_args.formula_file.empty())
        throw InputError("valid needs a formula or --formula-file");
      return run_valid(valid_args);
    }
    if (app.got_subcommand(cm)) {
      if (cm_first == "get") {
        if (cm_second.empty()) throw InputError("countermodel get needs an artifact name");
        return run_countermodel_get(cm_second, cm_args.json_out);
      }
      if (!cm_second.empty()) throw InputError("unexpected extra argument '" + cm_second + "'");
      cm_args.formula = cm_first;
      return run_countermodel(cm_args);
    }
    if (app.got_subcommand(eq)) return run_equiv(eq_args);
    if (app.got_subcommand(bisim)) return run_bisim(bisim_args);
    if (app.got_subcommand(nf)) return run_normal_form(nf_formula, nf_json);
    if (app.got_subcommand(paper)) {
      if (!paper_only.empty()) paper_args.only = paper_only;
      return run_paper(paper_args);
    }
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const itle::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const itle::ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const itle::FamilyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
