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
  \file countermodels.hpp
  \brief Named models and formulas that witness the separation results:
         the Fisher-Servi countermodel, the weak-connectedness
         countermodel, the families H_n and E_n, and the explicit
         definability formulas.
*/

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "itle/formula.hpp"
#include "itle/formula_text.hpp"
#include "itle/model.hpp"

namespace itle {

/*
 * Three worlds w, v, u with succ(w) = v, v and u fixed points, v <= u,
 * and p true exactly at u. Falsifies both Fisher-Servi schemas at w;
 * not backward confluent.
 */
inline Model fisher_servi_model() {
  return build_model({"w", "v", "u"}, {{"v", "u"}},
                     {{"w", "v"}, {"v", "v"}, {"u", "u"}},
                     {{"p", {"u"}}});
}

/*
 * Four worlds in two chains w < t and v < u with succ acting chain-wise
 * (w -> v, t -> u, v and u fixed). A here-and-there model falsifying
 * the weak-connectedness schema G(G p -> q) | G(G q -> p) at w.
 */
inline Model weak_connectedness_model() {
  return build_model({"w", "t", "u", "v"}, {{"v", "u"}, {"w", "t"}},
                     {{"w", "v"}, {"v", "v"}, {"t", "u"}, {"u", "u"}},
                     {{"p", {"v", "u"}}, {"q", {"t", "u"}}});
}

namespace detail {

inline std::string grid_world_name(int i, int j) { return std::to_string(i) + "_" + std::to_string(j); }

}  // namespace detail

/*
 * H_n: two rows of n+2 columns; each column i is a two-chain
 * i_0 < i_1, succ advances the column cyclically within its row, and p
 * holds everywhere except at (n+1)_0. A here-and-there model whose
 * bottom corner pair (0_0, 0_1) stays until-bisimilar to depth n yet is
 * separated by G p.
 */
inline Model ht_family_h(int n) {
  if (n < 1) throw std::invalid_argument("ht_family_h: n must be >= 1");
  const int cols = n + 2;
  std::vector<std::string> worlds;
  std::vector<std::pair<std::string, std::string>> order, succ;
  std::vector<std::string> p_worlds;
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j <= 1; ++j) {
      std::string name = detail::grid_world_name(i, j);
      worlds.push_back(name);
      succ.emplace_back(name, detail::grid_world_name((i + 1) % cols, j));
      if (!(i == cols - 1 && j == 0)) p_worlds.push_back(name);
    }
  for (int i = 0; i < cols; ++i) order.emplace_back(detail::grid_world_name(i, 0), detail::grid_world_name(i, 1));
  return build_model(worlds, order, succ, {{"p", p_worlds}});
}

/*
 * E_n: same grid, but succ moves right within each row and both ends
 * wrap to 0_0, with p true only at (n+1)_1. Expanding but not backward
 * confluent; the pair (0_0, 0_1) stays box-bisimilar to depth n yet is
 * separated by F p.
 */
inline Model expanding_family_e(int n) {
  if (n < 1) throw std::invalid_argument("expanding_family_e: n must be >= 1");
  const int cols = n + 2;
  std::vector<std::string> worlds;
  std::vector<std::pair<std::string, std::string>> order, succ;
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j <= 1; ++j) {
      std::string name = detail::grid_world_name(i, j);
      worlds.push_back(name);
      succ.emplace_back(name, i < cols - 1 ? detail::grid_world_name(i + 1, j) : detail::grid_world_name(0, 0));
    }
  for (int i = 0; i < cols; ++i) order.emplace_back(detail::grid_world_name(i, 0), detail::grid_world_name(i, 1));
  return build_model(worlds, order, succ, {{"p", {detail::grid_world_name(n + 1, 1)}}});
}

/*
 * A box-fragment formula equivalent to F p over here-and-there models
 * (and strictly weaker over expanding models):
 *
 *   (G(p -> G(p | ~p)) & G(X G(p | ~p) -> p | ~p | X G ~p))
 *     -> (G(p | ~p) & ~G ~p)
 */
inline Formula diamond_from_box(const std::string& atom) {
  static const Formula schema = parse_formula(
      "(G(a -> G(a | ~a)) & G(X G(a | ~a) -> a | ~a | X G ~a)) -> (G(a | ~a) & ~G ~a)");
  return instantiate(schema, {{"a", Formula::atom(atom)}});
}

/* Which atom the eventually-conjunct of until_from_release applies to. */
enum class UntilDiamondConjunct {
  LeftAtom,   // F p: the printed reading
  RightAtom,  // F q: the reading with the witness atom of U
};

namespace detail {

/* Replace every G sub by (false R sub); G x and false R x are equivalent. */
inline Formula box_as_release(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::Bottom:
      return f;
    case K::Henceforth:
      return Formula::release(Formula::bottom(), box_as_release(f.child()));
    case K::Next:
      return Formula::next(box_as_release(f.child()));
    case K::Eventually:
      return Formula::eventually(box_as_release(f.child()));
    case K::And:
      return Formula::conj(box_as_release(f.left()), box_as_release(f.right()));
    case K::Or:
      return Formula::disj(box_as_release(f.left()), box_as_release(f.right()));
    case K::Implies:
      return Formula::implies(box_as_release(f.left()), box_as_release(f.right()));
    case K::Until:
      return Formula::until(box_as_release(f.left()), box_as_release(f.right()));
    case K::Release:
      return Formula::release(box_as_release(f.left()), box_as_release(f.right()));
  }
  throw std::logic_error("box_as_release: bad kind");
}

}  // namespace detail

/*
 * Release-fragment candidate for p U q over here-and-there models:
 * (q R (p | q)) & D, where D expresses the eventually-conjunct through
 * diamond_from_box with every G rewritten as false R. Both readings of
 * the conjunct atom are constructible; the acceptance suite records
 * which one is actually equivalent.
 */
inline Formula until_from_release(const std::string& p, const std::string& q,
                                  UntilDiamondConjunct conjunct = UntilDiamondConjunct::RightAtom) {
  Formula weak = Formula::release(Formula::atom(q), Formula::disj(Formula::atom(p), Formula::atom(q)));
  const std::string& c = conjunct == UntilDiamondConjunct::LeftAtom ? p : q;
  return Formula::conj(std::move(weak), detail::box_as_release(diamond_from_box(c)));
}

/* --- named artifact registry ---------------------------------------- */

struct NamedArtifact {
  std::string name;
  std::variant<Model, Formula> payload;
  std::string provenance;

  bool is_model() const { return std::holds_alternative<Model>(payload); }
  const Model& model() const { return std::get<Model>(payload); }
  const Formula& formula() const { return std::get<Formula>(payload); }
};

/*
 * Resolve fisher-servi, weak-connected, H<n>, E<n>, diamond-from-box,
 * until-from-release. Returns nothing for unknown names.
 */
inline std::optional<NamedArtifact> named_artifact(std::string_view name) {
  auto parse_index = [](std::string_view s) -> std::optional<int> {
    if (s.empty() || s.size() > 2) return std::nullopt;
    int n = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return std::nullopt;
      n = n * 10 + (c - '0');
    }
    return n >= 1 ? std::optional<int>(n) : std::nullopt;
  };

  if (name == "fisher-servi")
    return NamedArtifact{std::string(name), fisher_servi_model(),
                         "three-world countermodel to the Fisher-Servi schemas over expanding frames"};
  if (name == "weak-connected")
    return NamedArtifact{std::string(name), weak_connectedness_model(),
                         "here-and-there countermodel to the weak-connectedness schema"};
  if (name.size() > 1 && name.front() == 'H') {
    if (auto n = parse_index(name.substr(1)))
      return NamedArtifact{std::string(name), ht_family_h(*n),
                           "here-and-there family member showing G is not definable with U"};
  }
  if (name.size() > 1 && name.front() == 'E') {
    if (auto n = parse_index(name.substr(1)))
      return NamedArtifact{std::string(name), expanding_family_e(*n),
                           "expanding family member showing F is not definable with G"};
  }
  if (name == "diamond-from-box")
    return NamedArtifact{std::string(name), diamond_from_box("p"),
                         "box-fragment definition of F p over here-and-there models"};
  if (name == "until-from-release")
    return NamedArtifact{std::string(name), until_from_release("p", "q"),
                         "release-fragment definition of p U q over here-and-there models"};
  return std::nullopt;
}

inline std::vector<std::string> named_artifact_names() {
  return {"fisher-servi", "weak-connected", "H<n>", "E<n>", "diamond-from-box", "until-from-release"};
}

}  // namespace itle
