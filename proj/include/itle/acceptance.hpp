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

/*!
  \file acceptance.hpp
  \brief The reproduction suite: every validity, non-validity,
         definability and undefinability result checked at desk scale,
         one pass/fail item each. Shared by the `paper` CLI command and
         the acceptance test binary.
*/

#pragma once

#include <chrono>
#include <cstdint>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "itle/bisim.hpp"
#include "itle/checker.hpp"
#include "itle/countermodels.hpp"
#include "itle/formula.hpp"
#include "itle/formula_text.hpp"
#include "itle/generators.hpp"
#include "itle/model.hpp"
#include "itle/search.hpp"

namespace itle::acceptance {

struct Options {
  std::uint64_t seed = 20260810;
  std::optional<std::string> only;  // run a single item by id
  unsigned threads = 0;             // 0 = hardware concurrency
};

struct ItemResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline bool all_passed(const std::vector<ItemResult>& items) {
  for (const auto& r : items)
    if (!r.pass) return false;
  return true;
}

/*
 * Reference evaluator, independent of the orbit/extension path: direct
 * recursion per world with temporal quantifiers unrolled to 3*|W|
 * steps. Used as the oracle for the agreement item.
 */
inline bool naive_satisfies(const Model& m, int w, const Formula& f) {
  struct Rec {
    const Model& m;
    int bound;
    std::unordered_map<const void*, std::uint64_t> done, truth;

    bool sat(int w, const Formula& f) {
      auto it = done.find(f.id());
      if (it != done.end() && ((it->second >> w) & 1)) return (truth[f.id()] >> w) & 1;
      bool result = eval(w, f);
      done[f.id()] |= world_bit(w);
      if (result) truth[f.id()] |= world_bit(w);
      return result;
    }

    bool eval(int w, const Formula& f) {
      using K = Formula::Kind;
      switch (f.kind()) {
        case K::Atom: return m.atom_true(f.atom_name(), w);
        case K::Bottom: return false;
        case K::And: return sat(w, f.left()) && sat(w, f.right());
        case K::Or: return sat(w, f.left()) || sat(w, f.right());
        case K::Implies: {
          for (int v = 0; v < m.size(); ++v)
            if (m.leq(w, v) && sat(v, f.left()) && !sat(v, f.right())) return false;
          return true;
        }
        case K::Next: return sat(m.succ(w), f.child());
        case K::Eventually: {
          int x = w;
          for (int k = 0; k < bound; ++k, x = m.succ(x))
            if (sat(x, f.child())) return true;
          return false;
        }
        case K::Henceforth: {
          int x = w;
          for (int k = 0; k < bound; ++k, x = m.succ(x))
            if (!sat(x, f.child())) return false;
          return true;
        }
        case K::Until: {
          int x = w;
          for (int k = 0; k < bound; ++k, x = m.succ(x)) {
            if (sat(x, f.right())) return true;
            if (!sat(x, f.left())) return false;
          }
          return false;
        }
        case K::Release: {
          int x = w;
          for (int k = 0; k < bound; ++k, x = m.succ(x)) {
            if (!sat(x, f.right())) return false;
            if (sat(x, f.left())) return true;
          }
          return true;
        }
      }
      throw std::logic_error("naive_satisfies: bad kind");
    }
  } rec{m, 3 * m.size(), {}, {}};
  return rec.sat(w, f);
}

namespace detail {

inline Formula iff(const Formula& a, const Formula& b) {
  return Formula::conj(Formula::implies(a, b), Formula::implies(b, a));
}

inline Formula iff(const char* a, const char* b) { return iff(parse_formula(a), parse_formula(b)); }

struct NamedFormula {
  std::string text;
  Formula formula;
};

inline std::vector<NamedFormula> expanding_law_suite() {
  std::vector<NamedFormula> out;
  auto add_iff = [&](const char* a, const char* b) {
    out.push_back({std::string(a) + "  <->  " + b, iff(a, b)});
  };
  auto add = [&](const char* a) { out.push_back({a, parse_formula(a)}); };
  /* interaction and induction laws */
  add_iff("X false", "false");
  add_iff("X(p & q)", "X p & X q");
  add_iff("X(p | q)", "X p | X q");
  add("X(p -> q) -> (X p -> X q)");
  add("G(p -> q) -> (G p -> G q)");
  add("G(p -> q) -> (F p -> F q)");
  add("F(p | q) -> F p | F q");
  add_iff("G p", "p & X G p");
  add_iff("p | X F p", "F p");
  add("G(p -> X p) -> (p -> G p)");
  add("(F p -> p) -> (X p -> p)");
  /* until/release laws */
  add_iff("p U q", "q | (p & X(p U q))");
  add_iff("p R q", "q & (p | X(p R q))");
  add("p U q -> F q");
  add("G q -> p R q");
  add_iff("F p", "true U p");
  add_iff("G p", "false R p");
  add_iff("X(p U q)", "X p U X q");
  add_iff("X(p R q)", "X p R X q");
  return out;
}

constexpr int expanding_suite_split = 11;  // first 11 entries form the interaction suite

inline std::string describe_counterexample(const Model& m, int world, const std::string& text) {
  std::ostringstream out;
  out << "counterexample to " << text << " at world " << m.world_name(world) << " of:\n" << serialize_model(m);
  return out.str();
}

/* Results of the single pass over expanding models with <= 4 worlds. */
struct ExpandingPass {
  std::vector<std::optional<std::string>> counterexample;  // per suite formula
  std::optional<std::string> fixpoint_failure;
  std::uint64_t visited = 0;
};

/* Results of the persistent pass: the model list plus search stats. */
struct PersistentPass {
  std::vector<Model> models;
  std::uint64_t visited = 0;
};

/* --- compact formula table for the normal-form item ------------------- */

struct FormulaTable {
  struct Node {
    Formula::Kind kind;
    std::int32_t a = -1;  // left child, or atom index for Atom nodes
    std::int32_t b = -1;
  };

  std::vector<Node> nodes;
  std::vector<std::uint8_t> xchain;     // X^i applied to an atom
  std::vector<std::uint8_t> normalish;  // every X sits on an x-chain
  std::unordered_map<std::uint64_t, std::int32_t> index;
  std::vector<std::string> atoms;

  explicit FormulaTable(std::vector<std::string> atom_names) : atoms(std::move(atom_names)) {}

  static std::uint64_t key(Formula::Kind k, std::int32_t a, std::int32_t b) {
    return (static_cast<std::uint64_t>(k) << 58) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a + 1)) << 29) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(b + 1));
  }

  std::int32_t make(Formula::Kind k, std::int32_t a, std::int32_t b) {
    std::uint64_t h = key(k, a, b);
    if (auto it = index.find(h); it != index.end()) return it->second;
    std::int32_t id = static_cast<std::int32_t>(nodes.size());
    nodes.push_back({k, a, b});
    bool chain = false, normal = false;
    using K = Formula::Kind;
    switch (k) {
      case K::Atom:
        chain = normal = true;
        break;
      case K::Bottom:
        normal = true;
        break;
      case K::Next:
        chain = xchain[static_cast<std::size_t>(a)];
        normal = chain;
        break;
      case K::Eventually:
      case K::Henceforth:
        normal = normalish[static_cast<std::size_t>(a)];
        break;
      default:
        normal = normalish[static_cast<std::size_t>(a)] && normalish[static_cast<std::size_t>(b)];
        break;
    }
    xchain.push_back(chain);
    normalish.push_back(normal);
    index.emplace(h, id);
    return id;
  }

  std::int32_t atom_id(std::int32_t atom_index) { return make(Formula::Kind::Atom, atom_index, -1); }
  std::int32_t bottom_id() { return make(Formula::Kind::Bottom, -1, -1); }

  Formula to_formula(std::int32_t id) const {
    const Node& n = nodes[static_cast<std::size_t>(id)];
    using K = Formula::Kind;
    switch (n.kind) {
      case K::Atom: return Formula::atom(atoms[static_cast<std::size_t>(n.a)]);
      case K::Bottom: return Formula::bottom();
      case K::Next: return Formula::next(to_formula(n.a));
      case K::Eventually: return Formula::eventually(to_formula(n.a));
      case K::Henceforth: return Formula::henceforth(to_formula(n.a));
      case K::And: return Formula::conj(to_formula(n.a), to_formula(n.b));
      case K::Or: return Formula::disj(to_formula(n.a), to_formula(n.b));
      case K::Implies: return Formula::implies(to_formula(n.a), to_formula(n.b));
      case K::Until: return Formula::until(to_formula(n.a), to_formula(n.b));
      case K::Release: return Formula::release(to_formula(n.a), to_formula(n.b));
    }
    throw std::logic_error("to_formula: bad kind");
  }

  std::int32_t from_formula(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Atom: {
        for (std::size_t i = 0; i < atoms.size(); ++i)
          if (atoms[i] == f.atom_name()) return atom_id(static_cast<std::int32_t>(i));
        throw std::logic_error("from_formula: unknown atom " + f.atom_name());
      }
      case K::Bottom: return bottom_id();
      default:
        if (is_binary(f.kind())) return make(f.kind(), from_formula(f.left()), from_formula(f.right()));
        return make(f.kind(), from_formula(f.child()), -1);
    }
  }
};

/* Evaluate every table node's extension on one model, ids ascending. */
inline void evaluate_table(const FormulaTable& table, const Model& m,
                           const std::vector<std::uint64_t>& atom_masks, std::vector<std::uint64_t>& ext) {
  const int n = m.size();
  std::vector<std::vector<int>> steps(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> reach(static_cast<std::size_t>(n), 0);
  for (int w = 0; w < n; ++w) {
    Orbit o = orbit(m, w);
    for (int k = 0; k < o.size(); ++k) {
      int x = o.at(static_cast<std::uint64_t>(k));
      steps[static_cast<std::size_t>(w)].push_back(x);
      reach[static_cast<std::size_t>(w)] |= world_bit(x);
    }
  }
  ext.resize(table.nodes.size());
  using K = Formula::Kind;
  for (std::size_t id = 0; id < table.nodes.size(); ++id) {
    const auto& node = table.nodes[id];
    std::uint64_t r = 0;
    switch (node.kind) {
      case K::Atom: r = atom_masks[static_cast<std::size_t>(node.a)]; break;
      case K::Bottom: r = 0; break;
      case K::And: r = ext[static_cast<std::size_t>(node.a)] & ext[static_cast<std::size_t>(node.b)]; break;
      case K::Or: r = ext[static_cast<std::size_t>(node.a)] | ext[static_cast<std::size_t>(node.b)]; break;
      case K::Implies: {
        std::uint64_t bad = ext[static_cast<std::size_t>(node.a)] & ~ext[static_cast<std::size_t>(node.b)];
        for (int w = 0; w < n; ++w)
          if ((m.up_set(w) & bad) == 0) r |= world_bit(w);
        break;
      }
      case K::Next: {
        std::uint64_t sub = ext[static_cast<std::size_t>(node.a)];
        for (int w = 0; w < n; ++w)
          if ((sub >> m.succ(w)) & 1) r |= world_bit(w);
        break;
      }
      case K::Eventually: {
        std::uint64_t sub = ext[static_cast<std::size_t>(node.a)];
        for (int w = 0; w < n; ++w)
          if (reach[static_cast<std::size_t>(w)] & sub) r |= world_bit(w);
        break;
      }
      case K::Henceforth: {
        std::uint64_t sub = ext[static_cast<std::size_t>(node.a)];
        for (int w = 0; w < n; ++w)
          if ((reach[static_cast<std::size_t>(w)] & ~sub) == 0) r |= world_bit(w);
        break;
      }
      case K::Until: {
        std::uint64_t lhs = ext[static_cast<std::size_t>(node.a)], rhs = ext[static_cast<std::size_t>(node.b)];
        for (int w = 0; w < n; ++w) {
          for (int x : steps[static_cast<std::size_t>(w)]) {
            if ((rhs >> x) & 1) {
              r |= world_bit(w);
              break;
            }
            if (!((lhs >> x) & 1)) break;
          }
        }
        break;
      }
      case K::Release: {
        std::uint64_t lhs = ext[static_cast<std::size_t>(node.a)], rhs = ext[static_cast<std::size_t>(node.b)];
        for (int w = 0; w < n; ++w) {
          bool ok = true, released = false;
          for (int x : steps[static_cast<std::size_t>(w)]) {
            if (!((rhs >> x) & 1)) {
              ok = false;
              break;
            }
            if ((lhs >> x) & 1) {
              released = true;
              break;
            }
          }
          (void)released;
          if (ok) r |= world_bit(w);
        }
        break;
      }
    }
    ext[id] = r;
  }
}

}  // namespace detail

/*
 * Lazily shares the two expensive enumeration passes between items so
 * a full run enumerates expanding models once and persistent models
 * once. Construct per run; not thread safe across items.
 */
class Suite {
public:
  explicit Suite(const Options& opt) : opt_(opt) {}

  std::vector<ItemResult> run() {
    std::vector<ItemResult> out;
    bool matched = false;
    for (const auto& [id, fn] : items()) {
      if (opt_.only && *opt_.only != id) continue;
      matched = true;
      auto start = std::chrono::steady_clock::now();
      ItemResult r = (this->*fn)();
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.push_back(std::move(r));
    }
    if (opt_.only && !matched) {
      std::string known;
      for (const auto& [id, fn] : items()) known += (known.empty() ? "" : ", ") + id;
      throw std::invalid_argument("unknown item '" + *opt_.only + "' (known: " + known + ")");
    }
    return out;
  }

  static std::vector<std::string> item_ids() {
    std::vector<std::string> out;
    for (const auto& [id, fn] : items()) out.push_back(id);
    return out;
  }

private:
  using ItemFn = ItemResult (Suite::*)();

  static const std::vector<std::pair<std::string, ItemFn>>& items() {
    static const std::vector<std::pair<std::string, ItemFn>> table = {
        {"prop1", &Suite::item_prop1},
        {"prop2", &Suite::item_prop2},
        {"prop3", &Suite::item_prop3},
        {"prop4", &Suite::item_prop4},
        {"lemma1", &Suite::item_lemma1},
        {"orbit-oracle", &Suite::item_orbit_oracle},
        {"preservation", &Suite::item_preservation},
        {"box-undefinable", &Suite::item_box_undefinable},
        {"diam-undefinable", &Suite::item_diam_undefinable},
        {"diamond-from-box", &Suite::item_diamond_from_box},
        {"until-from-release", &Suite::item_until_from_release},
        {"next-normal-form", &Suite::item_next_normal_form},
    };
    return table;
  }

  unsigned thread_count() const {
    unsigned t = opt_.threads ? opt_.threads : std::thread::hardware_concurrency();
    return t ? t : 1;
  }

  std::mt19937_64 item_rng(std::uint64_t salt) const { return std::mt19937_64(opt_.seed ^ (salt * 0x9E3779B97F4A7C15ull)); }

  static SearchBounds bounds4pq(FrameClass c) { return {4, {"p", "q"}, c, std::nullopt, 0}; }

  const detail::ExpandingPass& expanding_pass() {
    if (expanding_) return *expanding_;
    auto suite = detail::expanding_law_suite();
    detail::ExpandingPass pass;
    pass.counterexample.resize(suite.size());
    Formula until_pq = parse_formula("p U q");
    Formula until_unf = parse_formula("q | (p & X(p U q))");
    Formula release_pq = parse_formula("p R q");
    Formula release_unf = parse_formula("q & (p | X(p R q))");
    EnumerationStats stats = enumerate_models(bounds4pq(FrameClass::Expanding), [&](const Model& m) {
      Evaluator ev(m);
      std::uint64_t all = m.all_worlds();
      for (std::size_t i = 0; i < suite.size(); ++i) {
        if (pass.counterexample[i]) continue;
        std::uint64_t ext = ev.extension(suite[i].formula);
        if (ext != all)
          pass.counterexample[i] =
              detail::describe_counterexample(m, std::countr_zero(all & ~ext), suite[i].text);
      }
      if (!pass.fixpoint_failure) {
        if (ev.extension(until_pq) != ev.extension(until_unf))
          pass.fixpoint_failure = "U fixpoint extension mismatch on:\n" + serialize_model(m);
        else if (ev.extension(release_pq) != ev.extension(release_unf))
          pass.fixpoint_failure = "R fixpoint extension mismatch on:\n" + serialize_model(m);
      }
      return true;
    });
    pass.visited = stats.visited;
    expanding_ = std::move(pass);
    return *expanding_;
  }

  const detail::PersistentPass& persistent_pass() {
    if (persistent_) return *persistent_;
    detail::PersistentPass pass;
    EnumerationStats stats = enumerate_models(bounds4pq(FrameClass::Persistent), [&](const Model& m) {
      pass.models.push_back(m);
      return true;
    });
    pass.visited = stats.visited;
    persistent_ = std::move(pass);
    return *persistent_;
  }

  /* ---- items -------------------------------------------------------- */

  ItemResult item_prop1() {
    ItemResult r{"prop1", "interaction and induction laws valid over expanding models", false, "", 0};
    const auto& pass = expanding_pass();
    int ok = 0;
    for (int i = 0; i < detail::expanding_suite_split; ++i) {
      if (pass.counterexample[static_cast<std::size_t>(i)]) {
        r.detail = *pass.counterexample[static_cast<std::size_t>(i)];
        return r;
      }
      ++ok;
    }
    r.pass = true;
    r.detail = std::to_string(ok) + "/11 formulas exhausted over expanding models, max 4 worlds (" +
               std::to_string(pass.visited) + " models)";
    return r;
  }

  ItemResult item_prop2() {
    ItemResult r{"prop2", "Fisher-Servi laws: refuted at 3 worlds, valid over persistent models", false, "", 0};
    Model fs = fisher_servi_model();
    Formula fs1 = parse_formula("(X p -> X q) -> X(p -> q)");
    Formula fs2 = parse_formula("(F p -> G q) -> G(p -> q)");
    if (satisfies(fs, "w", fs1) || satisfies(fs, "w", fs2)) {
      r.detail = "the three-world countermodel fails to refute a Fisher-Servi law at w";
      return r;
    }
    const auto& pass = persistent_pass();
    for (const Model& m : pass.models) {
      Evaluator ev(m);
      for (const Formula* f : {&fs1, &fs2})
        if (ev.extension(*f) != m.all_worlds()) {
          Validity v = valid_in_model(m, *f);
          r.detail = detail::describe_counterexample(m, v.counter_world, print_formula(*f));
          return r;
        }
    }
    r.pass = true;
    r.detail = "both refuted at w of the named countermodel; both exhausted over persistent models, max 4 worlds (" +
               std::to_string(pass.models.size()) + " models)";
    return r;
  }

  ItemResult item_prop3() {
    ItemResult r{"prop3", "weak connectedness fails over here-and-there models", false, "", 0};
    Model wc = weak_connectedness_model();
    auto ht = check_here_and_there(wc);
    if (!ht.holds) {
      r.detail = "countermodel not classified here-and-there: " + ht.reason;
      return r;
    }
    Formula schema = parse_formula("G(G p -> q) | G(G q -> p)");
    if (satisfies(wc, "w", schema)) {
      r.detail = "schema not refuted at w";
      return r;
    }
    r.pass = true;
    r.detail = "model is here-and-there with " + std::to_string(ht.chains.size()) +
               " chains and refutes G(G p -> q) | G(G q -> p) at w";
    return r;
  }

  ItemResult item_prop4() {
    ItemResult r{"prop4", "until/release laws valid over expanding models", false, "", 0};
    const auto& pass = expanding_pass();
    auto suite_size = pass.counterexample.size();
    int ok = 0;
    for (std::size_t i = detail::expanding_suite_split; i < suite_size; ++i) {
      if (pass.counterexample[i]) {
        r.detail = *pass.counterexample[i];
        return r;
      }
      ++ok;
    }
    if (pass.fixpoint_failure) {
      r.detail = *pass.fixpoint_failure;
      return r;
    }
    r.pass = true;
    r.detail = std::to_string(ok) + "/8 formulas exhausted and U/R fixpoint extensions equal over expanding models, max 4 worlds (" +
               std::to_string(pass.visited) + " models)";
    return r;
  }

  ItemResult item_lemma1() {
    ItemResult r{"lemma1", "extensions are upward closed", false, "", 0};
    auto rng = item_rng(5);
    RandomModelOptions mopt{5, {"p", "q"}, 0.35};
    RandomFormulaOptions fopt{Fragment::Full, 6, {"p", "q"}};
    for (int i = 0; i < 1000; ++i) {
      Model m = random_model(rng, mopt);
      Formula f = random_formula(rng, fopt);
      auto rep = check_monotone_extension(m, f);
      if (!rep.monotone) {
        r.detail = "extension of " + print_formula(f) + " not upward closed between " +
                   m.world_name(rep.low) + " and " + m.world_name(rep.high) + " of:\n" + serialize_model(m);
        return r;
      }
    }
    r.pass = true;
    r.detail = "1000 seeded random (model, formula) pairs, all extensions upward closed";
    return r;
  }

  ItemResult item_orbit_oracle() {
    ItemResult r{"orbit-oracle", "orbit evaluation agrees with the unrolled reference evaluator", false, "", 0};
    auto rng = item_rng(6);
    RandomModelOptions mopt{5, {"p", "q"}, 0.35};
    RandomFormulaOptions fopt{Fragment::Full, 6, {"p", "q"}};
    for (int i = 0; i < 1000; ++i) {
      Model m = random_model(rng, mopt);
      Formula f = random_formula(rng, fopt);
      std::uint64_t ext = extension(m, f);
      for (int w = 0; w < m.size(); ++w)
        if (static_cast<bool>((ext >> w) & 1) != naive_satisfies(m, w, f)) {
          r.detail = "disagreement on " + print_formula(f) + " at " + m.world_name(w) + " of:\n" + serialize_model(m);
          return r;
        }
    }
    r.pass = true;
    r.detail = "1000 seeded random pairs, exact agreement at every world";
    return r;
  }

  ItemResult item_preservation() {
    ItemResult r{"preservation", "greatest families verify and preserve fragment formulas", false, "", 0};
    auto rng = item_rng(7);
    const BisimKind kinds[] = {BisimKind::Next, BisimKind::Diam, BisimKind::Box, BisimKind::Until,
                               BisimKind::Release};
    std::uint64_t families = 0, formulas_checked = 0;
    for (BisimKind kind : kinds)
      for (int n = 1; n <= 3; ++n)
        for (bool use_h : {true, false}) {
          Model m = use_h ? ht_family_h(n) : expanding_family_e(n);
          BisimFamily fam = max_family(kind, m, m, n);
          auto violations = verify_family(kind, fam);
          if (!violations.empty()) {
            const auto& v = violations.front();
            r.detail = std::string("greatest ") + to_string(kind) + " family on " + (use_h ? "H" : "E") +
                       std::to_string(n) + " violates " + v.clause + " at level " + std::to_string(v.level) +
                       " pair (" + m.world_name(v.w1) + "," + m.world_name(v.w2) + "): " + v.detail;
            return r;
          }
          std::vector<Formula> formulas = enumerate_formulas(bisim_fragment(kind), 2, {"p"});
          RandomFormulaOptions fopt{bisim_fragment(kind), n, {"p"}};
          for (int i = 0; i < 200; ++i) formulas.push_back(random_formula(rng, fopt));
          auto disagreements = preservation_check(kind, fam, formulas);
          if (!disagreements.empty()) {
            const auto& d = disagreements.front();
            r.detail = std::string("pair (") + m.world_name(d.w1) + "," + m.world_name(d.w2) + ") in level " +
                       std::to_string(d.level) + " of the " + to_string(kind) + " family on " +
                       (use_h ? "H" : "E") + std::to_string(n) + " disagrees on " + print_formula(d.formula);
            return r;
          }
          ++families;
          formulas_checked += formulas.size();
        }
    r.pass = true;
    r.detail = std::to_string(families) + " greatest families verified, " + std::to_string(formulas_checked) +
               " fragment formulas preserved with zero disagreements";
    return r;
  }

  ItemResult undefinability_item(const char* id, const char* title, BisimKind kind, bool use_h,
                                 const char* separator) {
    ItemResult r{id, title, false, "", 0};
    Formula sep = parse_formula(separator);
    for (int n = 1; n <= 4; ++n) {
      Model m = use_h ? ht_family_h(n) : expanding_family_e(n);
      BisimFamily fam = max_family(kind, m, m, n);
      int a = m.world_index("0_0"), b = m.world_index("0_1");
      if (!fam.chain[static_cast<std::size_t>(n)].contains(a, b)) {
        r.detail = std::string("pair (0_0,0_1) missing from level ") + std::to_string(n) + " of the greatest " +
                   to_string(kind) + " family at n=" + std::to_string(n);
        return r;
      }
      if (satisfies(m, a, sep) == satisfies(m, b, sep)) {
        r.detail = std::string(separator) + " does not separate 0_0 from 0_1 at n=" + std::to_string(n);
        return r;
      }
    }
    r.pass = true;
    r.detail = std::string("n=1..4: (0_0,0_1) ") + to_string(kind) + "-bisimilar to depth n yet separated by " +
               separator;
    return r;
  }

  ItemResult item_box_undefinable() {
    return undefinability_item("box-undefinable", "G is not definable with U (family H)", BisimKind::Until,
                               true, "G p");
  }

  ItemResult item_diam_undefinable() {
    return undefinability_item("diam-undefinable", "F is not definable with G (family E)", BisimKind::Box,
                               false, "F p");
  }

  ItemResult item_diamond_from_box() {
    ItemResult r{"diamond-from-box", "F p is box-definable over here-and-there models only", false, "", 0};
    Formula fp = parse_formula("F p");
    Formula dfb = diamond_from_box("p");
    SearchBounds ht{6, {"p"}, FrameClass::HereAndThere, std::nullopt, 0};
    SearchResult on_ht = check_equivalence(fp, dfb, ht);
    if (on_ht.verdict != SearchVerdict::Exhausted) {
      r.detail = std::string("expected exhaustion over here-and-there models, got ") + to_string(on_ht.verdict);
      if (on_ht.model) r.detail += " at " + on_ht.model->world_name(on_ht.world) + " of:\n" + serialize_model(*on_ht.model);
      return r;
    }
    SearchBounds expanding{8, {"p"}, FrameClass::Expanding, std::nullopt, 0};
    SearchResult on_exp = check_equivalence(fp, dfb, expanding);
    if (on_exp.verdict != SearchVerdict::Found) {
      r.detail = std::string("expected an expanding witness, got ") + to_string(on_exp.verdict);
      return r;
    }
    bool fp_holds = satisfies(*on_exp.model, on_exp.world, fp);
    bool dfb_holds = satisfies(*on_exp.model, on_exp.world, dfb);
    if (fp_holds == dfb_holds) {
      r.detail = "reported witness does not separate the formulas";
      return r;
    }
    r.pass = true;
    r.detail = "equivalent over here-and-there models to 6 worlds (" + std::to_string(on_ht.visited) +
               " models); separated over expanding models at " + std::to_string(on_exp.model->size()) +
               " worlds (F p " + (fp_holds ? "true" : "false") + ", definition " +
               (dfb_holds ? "true" : "false") + " at " + on_exp.model->world_name(on_exp.world) + ")";
    return r;
  }

  ItemResult item_until_from_release() {
    ItemResult r{"until-from-release", "p U q is release-definable over here-and-there models", false, "", 0};
    Formula puq = parse_formula("p U q");
    SearchBounds ht{6, {"p", "q"}, FrameClass::HereAndThere, std::nullopt, 0};
    SearchResult left = check_equivalence(puq, until_from_release("p", "q", UntilDiamondConjunct::LeftAtom), ht);
    SearchResult right = check_equivalence(puq, until_from_release("p", "q", UntilDiamondConjunct::RightAtom), ht);
    std::ostringstream detail;
    detail << "conjunct F p: " << to_string(left.verdict);
    if (left.model) detail << " (e.g. at " << left.model->world_name(left.world) << " of a "
                           << left.model->size() << "-world model)";
    detail << "; conjunct F q: " << to_string(right.verdict);
    if (right.model) detail << " (e.g. at " << right.model->world_name(right.world) << " of a "
                            << right.model->size() << "-world model)";
    r.detail = detail.str();
    r.pass = left.verdict == SearchVerdict::Exhausted || right.verdict == SearchVerdict::Exhausted;
    return r;
  }

  ItemResult item_next_normal_form() {
    ItemResult r{"next-normal-form", "X-normal form preserves extensions over persistent models", false, "", 0};
    const auto& pass = persistent_pass();

    /* confirm each push law by exhaustive search over the same models */
    const std::pair<const char*, const char*> laws[] = {
        {"X false", "false"},
        {"X(p & q)", "X p & X q"},
        {"X(p | q)", "X p | X q"},
        {"X(p -> q)", "X p -> X q"},
        {"X F p", "F X p"},
        {"X G p", "G X p"},
        {"X(p U q)", "X p U X q"},
        {"X(p R q)", "X p R X q"},
    };
    for (const auto& [a, b] : laws) {
      Formula law = detail::iff(a, b);
      for (const Model& m : pass.models) {
        Validity v = valid_in_model(m, law);
        if (!v.valid) {
          r.detail = std::string("push law ") + a + " <-> " + b + " fails: " +
                     detail::describe_counterexample(m, v.counter_world, a);
          return r;
        }
      }
    }

    /* enumerate all formulas of length <= 4 over {p, q}; for the ones the
       rewrite changes, compare extensions on every persistent model */
    detail::FormulaTable table({"p", "q"});
    std::vector<std::vector<std::int32_t>> by_len(4);
    by_len[0] = {table.atom_id(0), table.atom_id(1), table.bottom_id()};
    using K = Formula::Kind;
    const K unary[] = {K::Next, K::Eventually, K::Henceforth};
    const K binary[] = {K::And, K::Or, K::Implies, K::Until, K::Release};
    for (int len = 1; len <= 3; ++len) {
      for (K k : unary)
        for (std::int32_t a : by_len[static_cast<std::size_t>(len - 1)])
          by_len[static_cast<std::size_t>(len)].push_back(table.make(k, a, -1));
      for (K k : binary)
        for (int la = 0; la <= len - 1; ++la)
          for (std::int32_t a : by_len[static_cast<std::size_t>(la)])
            for (std::int32_t b : by_len[static_cast<std::size_t>(len - 1 - la)])
              by_len[static_cast<std::size_t>(len)].push_back(table.make(k, a, b));
    }

    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;  // (formula, its normal form)
    std::uint64_t total_formulas = by_len[0].size(), skipped_normal = by_len[0].size();
    auto add_root = [&](std::int32_t id) {
      Formula nf = next_normal_form(table.to_formula(id));
      if (!in_next_normal_form(nf)) {
        if (r.detail.empty())
          r.detail = "rewrite output fails the syntactic check: " + print_formula(nf);
        return;
      }
      pairs.emplace_back(id, table.from_formula(nf));
    };
    for (int len = 1; len <= 3; ++len)
      for (std::int32_t id : by_len[static_cast<std::size_t>(len)]) {
        ++total_formulas;
        if (table.normalish[static_cast<std::size_t>(id)]) { ++skipped_normal; continue; }
        add_root(id);
      }
    /* length-4 candidates are filtered by flags before materialising */
    for (K k : unary)
      for (std::int32_t a : by_len[3]) {
        ++total_formulas;
        bool normal = k == K::Next ? static_cast<bool>(table.xchain[static_cast<std::size_t>(a)])
                                   : static_cast<bool>(table.normalish[static_cast<std::size_t>(a)]);
        if (normal) { ++skipped_normal; continue; }
        add_root(table.make(k, a, -1));
      }
    for (K k : binary)
      for (int la = 0; la <= 3; ++la)
        for (std::int32_t a : by_len[static_cast<std::size_t>(la)])
          for (std::int32_t b : by_len[static_cast<std::size_t>(3 - la)]) {
            ++total_formulas;
            if (table.normalish[static_cast<std::size_t>(a)] && table.normalish[static_cast<std::size_t>(b)]) {
              ++skipped_normal;
              continue;
            }
            add_root(table.make(k, a, b));
          }
    if (!r.detail.empty()) return r;

    /* parallel sweep over the persistent model list */
    const unsigned threads = thread_count();
    const std::size_t chunk = (pass.models.size() + threads - 1) / std::max<unsigned>(threads, 1);
    struct ChunkResult {
      std::optional<std::pair<std::size_t, std::int32_t>> failure;  // (model index, formula id)
    };
    std::vector<std::future<ChunkResult>> futures;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t lo = t * chunk, hi = std::min(pass.models.size(), lo + chunk);
      if (lo >= hi) break;
      futures.push_back(std::async(std::launch::async, [&, lo, hi]() {
        ChunkResult res;
        std::vector<std::uint64_t> ext;
        for (std::size_t mi = lo; mi < hi && !res.failure; ++mi) {
          const Model& m = pass.models[mi];
          std::vector<std::uint64_t> atom_masks = {m.atom_set("p"), m.atom_set("q")};
          detail::evaluate_table(table, m, atom_masks, ext);
          for (const auto& [f, nf] : pairs)
            if (ext[static_cast<std::size_t>(f)] != ext[static_cast<std::size_t>(nf)]) {
              res.failure = {mi, f};
              break;
            }
        }
        return res;
      }));
    }
    std::optional<std::pair<std::size_t, std::int32_t>> failure;
    for (auto& fut : futures) {
      ChunkResult res = fut.get();
      if (res.failure && (!failure || res.failure->first < failure->first)) failure = res.failure;
    }
    if (failure) {
      Formula f = table.to_formula(failure->second);
      const Model& m = pass.models[failure->first];
      Validity v = valid_in_model(m, detail::iff(f, next_normal_form(f)));
      r.detail = detail::describe_counterexample(m, v.counter_world,
                                                 print_formula(f) + "  <->  " + print_formula(next_normal_form(f)));
      return r;
    }
    r.pass = true;
    r.detail = "8/8 push laws confirmed; " + std::to_string(pairs.size()) + " rewritten formulas (of " +
               std::to_string(total_formulas) + " with length <= 4, " + std::to_string(skipped_normal) +
               " already normal) keep their extensions on all " + std::to_string(pass.models.size()) +
               " persistent models with <= 4 worlds";
    return r;
  }

  Options opt_;
  std::optional<detail::ExpandingPass> expanding_;
  std::optional<detail::PersistentPass> persistent_;
};

inline std::vector<ItemResult> run(const Options& opt = {}) { return Suite(opt).run(); }

}  // namespace itle::acceptance
