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
  \file bisim.hpp
  \brief Bounded bisimulations between dynamic-poset models.

  A bounded bisimulation is a descending chain Z_n ⊆ … ⊆ Z_0 of world
  relations. Every kind shares the base clauses (atom agreement, the
  forth/back order clauses, and the succ clause); the diam/box/until/
  release kinds add forth/back clauses quantifying over succ iterates.
  Pairs in Z_i then agree on all fragment formulas of length <= i.

  Unbounded "for all k >= 0" quantifiers over iterates are decided over
  k < prefix + 2*cycle of the base world's orbit: a clause instance at k
  depends only on the world at step k and the set of worlds visited
  before k, and both repeat with period `cycle` once k >= prefix+cycle.
*/

#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "itle/checker.hpp"
#include "itle/formula.hpp"
#include "itle/model.hpp"

namespace itle {

class FamilyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class BisimKind : std::uint8_t { Next, Diam, Box, Until, Release };

inline const char* to_string(BisimKind k) {
  switch (k) {
    case BisimKind::Next: return "next";
    case BisimKind::Diam: return "diam";
    case BisimKind::Box: return "box";
    case BisimKind::Until: return "until";
    case BisimKind::Release: return "release";
  }
  return "?";
}

inline std::optional<BisimKind> bisim_kind_from_string(std::string_view s) {
  if (s == "next") return BisimKind::Next;
  if (s == "diam") return BisimKind::Diam;
  if (s == "box") return BisimKind::Box;
  if (s == "until") return BisimKind::Until;
  if (s == "release") return BisimKind::Release;
  return std::nullopt;
}

/* Fragment whose formulas a kind preserves. */
inline Fragment bisim_fragment(BisimKind k) {
  switch (k) {
    case BisimKind::Next: return Fragment::NextOnly;
    case BisimKind::Diam: return Fragment::Diam;
    case BisimKind::Box: return Fragment::Box;
    case BisimKind::Until: return Fragment::Until;
    case BisimKind::Release: return Fragment::Release;
  }
  return Fragment::Full;
}

/* Relation between the worlds of two models, one bitmask row per left world. */
class PairRel {
public:
  PairRel() = default;
  PairRel(int n1, int n2) : n1_(n1), n2_(n2), rows_(static_cast<std::size_t>(n1), 0) {}

  int left_size() const { return n1_; }
  int right_size() const { return n2_; }

  bool contains(int a, int b) const { return (rows_[static_cast<std::size_t>(a)] >> b) & 1; }
  void insert(int a, int b) { rows_[static_cast<std::size_t>(a)] |= world_bit(b); }
  void erase(int a, int b) { rows_[static_cast<std::size_t>(a)] &= ~world_bit(b); }
  std::uint64_t row(int a) const { return rows_[static_cast<std::size_t>(a)]; }

  bool subset_of(const PairRel& other) const {
    for (int a = 0; a < n1_; ++a)
      if (rows_[static_cast<std::size_t>(a)] & ~other.rows_[static_cast<std::size_t>(a)]) return false;
    return true;
  }

  bool empty() const {
    for (auto r : rows_)
      if (r) return false;
    return true;
  }

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n1_; ++a) {
      std::uint64_t r = rows_[static_cast<std::size_t>(a)];
      while (r) {
        out.emplace_back(a, std::countr_zero(r));
        r &= r - 1;
      }
    }
    return out;
  }

  bool operator==(const PairRel&) const = default;

private:
  int n1_ = 0, n2_ = 0;
  std::vector<std::uint64_t> rows_;
};

struct BisimFamily {
  Model left;
  Model right;
  std::vector<PairRel> chain;  // chain[i] = Z_i, Z_{i+1} ⊆ Z_i

  int depth() const { return static_cast<int>(chain.size()) - 1; }
};

struct ClauseViolation {
  std::string clause;  // "Atoms", "Forth ->", "Back ->", "Forth X", "Forth F", ..., "Back R"
  int level = 0;       // index of the relation the pair belongs to
  int w1 = -1, w2 = -1;
  std::string detail;  // the unmatched iterate or world
};

namespace detail {

/* Per-model data reused across clause checks. */
struct OrbitTable {
  std::vector<std::vector<int>> steps;  // steps[w][k] = succ^k(w), k < prefix + 2*cycle

  explicit OrbitTable(const Model& m) {
    steps.reserve(static_cast<std::size_t>(m.size()));
    for (int w = 0; w < m.size(); ++w) {
      Orbit o = orbit(m, w);
      std::size_t bound = o.prefix.size() + 2 * o.cycle.size();
      std::vector<int> row;
      row.reserve(bound);
      for (std::size_t k = 0; k < bound; ++k) row.push_back(o.at(k));
      steps.push_back(std::move(row));
    }
  }
};

/*
 * Match tables against a target relation Z:
 *   up_match[a] has bit b set iff some v1 >= a, v2 <= b with v1 Z v2,
 *   down_match[a] has bit b iff some v1 <= a, v2 >= b with v1 Z v2.
 * These are exactly the one-pair obligations of the temporal clauses.
 */
struct MatchTables {
  std::vector<std::uint64_t> up_match, down_match;

  MatchTables(const Model& m1, const Model& m2, const PairRel& z) {
    const int n1 = m1.size(), n2 = m2.size();
    std::vector<std::uint64_t> z_up(static_cast<std::size_t>(n1), 0);    // bit b: some v2 <= b with a Z v2
    std::vector<std::uint64_t> z_down(static_cast<std::size_t>(n1), 0);  // bit b: some v2 >= b with a Z v2
    for (int a = 0; a < n1; ++a) {
      std::uint64_t r = z.row(a);
      while (r) {
        int b = std::countr_zero(r);
        r &= r - 1;
        z_up[static_cast<std::size_t>(a)] |= m2.up_set(b);
        z_down[static_cast<std::size_t>(a)] |= m2.down_set(b);
      }
    }
    up_match.assign(static_cast<std::size_t>(n1), 0);
    down_match.assign(static_cast<std::size_t>(n1), 0);
    for (int a = 0; a < n1; ++a) {
      std::uint64_t ups = m1.up_set(a);
      while (ups) {
        up_match[static_cast<std::size_t>(a)] |= z_up[static_cast<std::size_t>(std::countr_zero(ups))];
        ups &= ups - 1;
      }
      std::uint64_t downs = m1.down_set(a);
      while (downs) {
        down_match[static_cast<std::size_t>(a)] |= z_down[static_cast<std::size_t>(std::countr_zero(downs))];
        downs &= downs - 1;
      }
    }
  }

  bool up(int a, int b) const { return (up_match[static_cast<std::size_t>(a)] >> b) & 1; }
  bool down(int a, int b) const { return (down_match[static_cast<std::size_t>(a)] >> b) & 1; }
};

struct ClauseContext {
  const Model& m1;
  const Model& m2;
  const OrbitTable& orbits1;
  const OrbitTable& orbits2;
  const PairRel& target;  // Z_i, the relation clauses land in
  const MatchTables& match;
};

/*
 * Temporal clause schema. The outer quantifier runs over iterates of
 * one side, the witness over iterates of the other; `side_cond` adds
 * the intermediate-step obligation of the until/release clauses.
 * Returns the failing outer k on violation.
 */
enum class MatchDir { Up, Down };

template <bool OuterLeft, bool WithSide, MatchDir Dir>
std::optional<int> temporal_clause(const ClauseContext& c, int w1, int w2) {
  const auto& outer = OuterLeft ? c.orbits1.steps[static_cast<std::size_t>(w1)]
                                : c.orbits2.steps[static_cast<std::size_t>(w2)];
  const auto& inner = OuterLeft ? c.orbits2.steps[static_cast<std::size_t>(w2)]
                                : c.orbits1.steps[static_cast<std::size_t>(w1)];
  auto matches = [&](int a, int b) {
    return Dir == MatchDir::Up ? c.match.up(a, b) : c.match.down(a, b);
  };
  auto pair_match = [&](int ko, int ki) {
    int a = OuterLeft ? outer[static_cast<std::size_t>(ko)] : inner[static_cast<std::size_t>(ki)];
    int b = OuterLeft ? inner[static_cast<std::size_t>(ki)] : outer[static_cast<std::size_t>(ko)];
    return matches(a, b);
  };
  for (int ko = 0; ko < static_cast<int>(outer.size()); ++ko) {
    bool found = false;
    for (int ki = 0; ki < static_cast<int>(inner.size()) && !found; ++ki) {
      if (!pair_match(ko, ki)) continue;
      if constexpr (WithSide) {
        /* every inner step j < ki must be matched by some outer step j' < ko */
        bool side_ok = true;
        for (int j = 0; j < ki && side_ok; ++j) {
          bool hit = false;
          for (int jo = 0; jo < ko && !hit; ++jo) hit = pair_match(jo, j);
          side_ok = hit;
        }
        found = side_ok;
      } else {
        found = true;
      }
    }
    if (!found) return ko;
  }
  return std::nullopt;
}

inline bool atoms_agree(const Model& m1, const Model& m2, int w1, int w2, std::string* atom_out = nullptr) {
  for (const auto& [atom, mask] : m1.valuation())
    if (((mask >> w1) & 1) != ((m2.atom_set(atom) >> w2) & 1)) {
      if (atom_out) *atom_out = atom;
      return false;
    }
  for (const auto& [atom, mask] : m2.valuation()) {
    if (m1.atom_set(atom) != 0) continue;  // already compared
    if ((mask >> w2) & 1) {
      if (atom_out) *atom_out = atom;
      return false;
    }
  }
  return true;
}

/*
 * Check all clauses of `kind` for the pair (w1, w2) against the target
 * relation. When `sink` is null the check stops at the first failure
 * and reports via the return value only.
 */
inline bool pair_clauses_hold(BisimKind kind, const ClauseContext& c, int w1, int w2, int level,
                              std::vector<ClauseViolation>* sink) {
  bool ok = true;
  auto report = [&](const std::string& clause, const std::string& detail) {
    ok = false;
    if (sink) sink->push_back({clause, level, w1, w2, detail});
  };

  /* Forth -> : every v1 >= w1 matches some v2 >= w2 in the target. */
  {
    std::uint64_t ups = c.m1.up_set(w1);
    while (ups) {
      int v1 = std::countr_zero(ups);
      ups &= ups - 1;
      if ((c.target.row(v1) & c.m2.up_set(w2)) == 0) {
        report("Forth ->", "unmatched " + c.m1.world_name(v1));
        if (!sink) return false;
      }
    }
  }
  /* Back -> */
  {
    std::uint64_t ups = c.m2.up_set(w2);
    while (ups) {
      int v2 = std::countr_zero(ups);
      ups &= ups - 1;
      bool hit = false;
      std::uint64_t ups1 = c.m1.up_set(w1);
      while (ups1 && !hit) {
        int v1 = std::countr_zero(ups1);
        ups1 &= ups1 - 1;
        hit = c.target.contains(v1, v2);
      }
      if (!hit) {
        report("Back ->", "unmatched " + c.m2.world_name(v2));
        if (!sink) return false;
      }
    }
  }
  /* Forth X : successors stay related. */
  if (!c.target.contains(c.m1.succ(w1), c.m2.succ(w2))) {
    report("Forth X", "succ pair (" + c.m1.world_name(c.m1.succ(w1)) + "," + c.m2.world_name(c.m2.succ(w2)) + ")");
    if (!sink) return false;
  }

  using D = MatchDir;
  auto run = [&](const char* name, std::optional<int> fail, bool left_iterate) {
    if (!fail) return;
    report(name, std::string("no witness for k=") + std::to_string(*fail) + " on the " +
                     (left_iterate ? "left" : "right"));
  };

  switch (kind) {
    case BisimKind::Next:
      break;
    case BisimKind::Diam:
      run("Forth F", temporal_clause<true, false, D::Up>(c, w1, w2), true);
      if (!ok && !sink) return false;
      run("Back F", temporal_clause<false, false, D::Down>(c, w1, w2), false);
      break;
    case BisimKind::Box:
      run("Forth G", temporal_clause<false, false, D::Up>(c, w1, w2), false);
      if (!ok && !sink) return false;
      run("Back G", temporal_clause<true, false, D::Down>(c, w1, w2), true);
      break;
    case BisimKind::Until:
      run("Forth U", temporal_clause<true, true, D::Up>(c, w1, w2), true);
      if (!ok && !sink) return false;
      run("Back U", temporal_clause<false, true, D::Down>(c, w1, w2), false);
      break;
    case BisimKind::Release:
      run("Forth R", temporal_clause<false, true, D::Up>(c, w1, w2), false);
      if (!ok && !sink) return false;
      run("Back R", temporal_clause<true, true, D::Down>(c, w1, w2), true);
      break;
  }
  return ok;
}

}  // namespace detail

/* Z_0 of the greatest family: all atom-agreeing pairs. */
inline PairRel atom_agreement(const Model& m1, const Model& m2) {
  PairRel z(m1.size(), m2.size());
  for (int a = 0; a < m1.size(); ++a)
    for (int b = 0; b < m2.size(); ++b)
      if (detail::atoms_agree(m1, m2, a, b)) z.insert(a, b);
  return z;
}

/*
 * Greatest bounded kind-bisimulation of the given depth: Z_0 is atom
 * agreement and each Z_{i+1} keeps the pairs of Z_i whose clauses hold
 * with Z_i as target. Levels are filter passes, not inner fixpoints,
 * because the clauses at i+1 refer only to Z_i.
 */
inline BisimFamily max_family(BisimKind kind, const Model& m1, const Model& m2, int depth) {
  if (depth < 0) throw std::invalid_argument("max_family: negative depth");
  BisimFamily fam{m1, m2, {}};
  detail::OrbitTable orbits1(m1), orbits2(m2);
  fam.chain.push_back(atom_agreement(m1, m2));
  for (int i = 0; i < depth; ++i) {
    const PairRel& z = fam.chain.back();
    detail::MatchTables match(m1, m2, z);
    detail::ClauseContext ctx{m1, m2, orbits1, orbits2, z, match};
    PairRel next(m1.size(), m2.size());
    for (const auto& [a, b] : z.pairs())
      if (detail::pair_clauses_hold(kind, ctx, a, b, i + 1, nullptr)) next.insert(a, b);
    fam.chain.push_back(std::move(next));
  }
  return fam;
}

/*
 * All clause violations of a candidate family. Atom agreement is
 * required at every level; the order/succ/temporal clauses bind each
 * level to the one below. Throws FamilyError if the chain is empty,
 * sized wrong, or not descending.
 */
inline std::vector<ClauseViolation> verify_family(BisimKind kind, const BisimFamily& fam) {
  if (fam.chain.empty()) throw FamilyError("family has no levels");
  for (std::size_t i = 0; i < fam.chain.size(); ++i) {
    if (fam.chain[i].left_size() != fam.left.size() || fam.chain[i].right_size() != fam.right.size())
      throw FamilyError("level " + std::to_string(i) + " does not match the models' world counts");
    if (i > 0 && !fam.chain[i].subset_of(fam.chain[i - 1]))
      throw FamilyError("chain is not descending at level " + std::to_string(i));
  }

  std::vector<ClauseViolation> out;
  for (std::size_t i = 0; i < fam.chain.size(); ++i)
    for (const auto& [a, b] : fam.chain[i].pairs()) {
      std::string atom;
      if (!detail::atoms_agree(fam.left, fam.right, a, b, &atom))
        out.push_back({"Atoms", static_cast<int>(i), a, b, "disagree on " + atom});
    }

  detail::OrbitTable orbits1(fam.left), orbits2(fam.right);
  for (std::size_t i = 1; i < fam.chain.size(); ++i) {
    detail::MatchTables match(fam.left, fam.right, fam.chain[i - 1]);
    detail::ClauseContext ctx{fam.left, fam.right, orbits1, orbits2, fam.chain[i - 1], match};
    for (const auto& [a, b] : fam.chain[i].pairs())
      detail::pair_clauses_hold(kind, ctx, a, b, static_cast<int>(i), &out);
  }
  return out;
}

struct Disagreement {
  Formula formula;
  int level = 0;
  int w1 = -1, w2 = -1;
  bool sat_left = false, sat_right = false;
};

/*
 * Preservation test for the bounded-bisimulation lemmas: every pair in
 * Z_i must agree on fragment formulas of length <= i. The caller
 * supplies a family that already verifies; formulas outside the kind's
 * fragment are rejected.
 */
inline std::vector<Disagreement> preservation_check(BisimKind kind, const BisimFamily& fam,
                                                    const std::vector<Formula>& formulas) {
  std::vector<Disagreement> out;
  Evaluator left(fam.left), right(fam.right);
  for (const Formula& f : formulas) {
    if (!fragment_leq(fragment_of(f), bisim_fragment(kind)))
      throw std::invalid_argument(std::string("formula outside the ") + to_string(kind) + " fragment");
    int len = length(f);
    std::uint64_t ext1 = left.extension(f);
    std::uint64_t ext2 = right.extension(f);
    for (int i = len; i < static_cast<int>(fam.chain.size()); ++i)
      for (const auto& [a, b] : fam.chain[static_cast<std::size_t>(i)].pairs()) {
        bool s1 = (ext1 >> a) & 1, s2 = (ext2 >> b) & 1;
        if (s1 != s2) out.push_back({f, i, a, b, s1, s2});
      }
  }
  return out;
}

/* --- family text format ------------------------------------------------
 *
 *   level 0: (w,w) (w,v)
 *   level 1: (w,w)
 *
 * One line per level, ascending and contiguous from 0.
 */

inline std::string serialize_family(const BisimFamily& fam) {
  std::ostringstream out;
  for (std::size_t i = 0; i < fam.chain.size(); ++i) {
    out << "level " << i << ":";
    for (const auto& [a, b] : fam.chain[i].pairs())
      out << " (" << fam.left.world_name(a) << "," << fam.right.world_name(b) << ")";
    out << '\n';
  }
  return out.str();
}

inline BisimFamily parse_family(const Model& m1, const Model& m2, const std::string& text) {
  BisimFamily fam{m1, m2, {}};
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    auto fail = [&](const std::string& msg) -> void {
      throw FamilyError("line " + std::to_string(lineno) + ": " + msg);
    };
    if (word != "level") fail("expected 'level i: ...'");
    int level = -1;
    std::string colon;
    ls >> level;
    if (level != static_cast<int>(fam.chain.size())) fail("levels must be contiguous from 0");
    ls >> colon;
    if (colon != ":") {
      /* allow "level 0:" without a space before the colon */
      if (colon.empty() || colon.back() != ':') fail("expected ':' after the level index");
    }
    PairRel z(m1.size(), m2.size());
    while (ls >> word) {
      if (word.size() < 5 || word.front() != '(' || word.back() != ')') fail("expected '(a,b)', got '" + word + "'");
      auto comma = word.find(',');
      if (comma == std::string::npos) fail("expected '(a,b)', got '" + word + "'");
      std::string a = word.substr(1, comma - 1);
      std::string b = word.substr(comma + 1, word.size() - comma - 2);
      auto ia = m1.find_world(a);
      auto ib = m2.find_world(b);
      if (!ia) fail("unknown world '" + a + "' in the left model");
      if (!ib) fail("unknown world '" + b + "' in the right model");
      z.insert(*ia, *ib);
    }
    fam.chain.push_back(std::move(z));
  }
  if (fam.chain.empty()) throw FamilyError("family has no levels");
  return fam;
}

}  // namespace itle
