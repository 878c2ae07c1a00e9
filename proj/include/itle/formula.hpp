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
  \file formula.hpp
  \brief Syntax trees for the temporal language with intuitionistic
         implication: atoms, falsum, and/or/implies, X, F, G, U, R.

  Negation and verum are not tree nodes: ~f is sugar for (f -> false)
  and true is sugar for (false -> false). Trees are immutable and
  cheaply shareable; all operations below are pure.
*/

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace itle {

class Formula {
public:
  enum class Kind : std::uint8_t {
    Atom,
    Bottom,
    And,
    Or,
    Implies,
    Next,
    Eventually,
    Henceforth,
    Until,
    Release,
  };

  static Formula atom(std::string name) {
    return Formula(std::make_shared<Node>(Node{Kind::Atom, std::move(name), nullptr, nullptr}));
  }
  static Formula bottom() {
    return Formula(std::make_shared<Node>(Node{Kind::Bottom, {}, nullptr, nullptr}));
  }
  static Formula conj(Formula lhs, Formula rhs) { return binary(Kind::And, std::move(lhs), std::move(rhs)); }
  static Formula disj(Formula lhs, Formula rhs) { return binary(Kind::Or, std::move(lhs), std::move(rhs)); }
  static Formula implies(Formula lhs, Formula rhs) { return binary(Kind::Implies, std::move(lhs), std::move(rhs)); }
  static Formula until(Formula lhs, Formula rhs) { return binary(Kind::Until, std::move(lhs), std::move(rhs)); }
  static Formula release(Formula lhs, Formula rhs) { return binary(Kind::Release, std::move(lhs), std::move(rhs)); }
  static Formula next(Formula sub) { return unary(Kind::Next, std::move(sub)); }
  static Formula eventually(Formula sub) { return unary(Kind::Eventually, std::move(sub)); }
  static Formula henceforth(Formula sub) { return unary(Kind::Henceforth, std::move(sub)); }

  /* Desugaring constructors. */
  static Formula negation(Formula sub) { return implies(std::move(sub), bottom()); }
  static Formula top() { return implies(bottom(), bottom()); }

  Kind kind() const { return node_->kind; }

  const std::string& atom_name() const {
    if (kind() != Kind::Atom) throw std::logic_error("atom_name on non-atom formula");
    return node_->atom;
  }

  /* left() is the only child of a unary node. */
  Formula left() const {
    if (!node_->lhs) throw std::logic_error("formula node has no subformula");
    return Formula(node_->lhs);
  }
  Formula right() const {
    if (!node_->rhs) throw std::logic_error("formula node has no right subformula");
    return Formula(node_->rhs);
  }
  Formula child() const { return left(); }

  bool operator==(const Formula& other) const { return equal(node_.get(), other.node_.get()); }
  bool operator!=(const Formula& other) const { return !(*this == other); }

  /* Stable address of the root node; used as a memoisation key. */
  const void* id() const { return node_.get(); }

private:
  struct Node {
    Kind kind;
    std::string atom;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Formula binary(Kind k, Formula lhs, Formula rhs) {
    return Formula(std::make_shared<Node>(Node{k, {}, std::move(lhs.node_), std::move(rhs.node_)}));
  }
  static Formula unary(Kind k, Formula sub) {
    return Formula(std::make_shared<Node>(Node{k, {}, std::move(sub.node_), nullptr}));
  }

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case Kind::Atom: return a->atom == b->atom;
      case Kind::Bottom: return true;
      default:
        if (!equal(a->lhs.get(), b->lhs.get())) return false;
        return a->rhs ? equal(a->rhs.get(), b->rhs.get()) : true;
    }
  }

  std::shared_ptr<const Node> node_;
};

inline bool is_unary(Formula::Kind k) {
  return k == Formula::Kind::Next || k == Formula::Kind::Eventually || k == Formula::Kind::Henceforth;
}

inline bool is_binary(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Until:
    case Formula::Kind::Release:
      return true;
    default:
      return false;
  }
}

/* Number of connectives: atoms and false count 0, every other node 1. */
inline int length(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom:
      return 0;
    default:
      return is_binary(f.kind()) ? 1 + length(f.left()) + length(f.right()) : 1 + length(f.child());
  }
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom: out.insert(f.atom_name()); return;
    case Formula::Kind::Bottom: return;
    default:
      collect_atoms(f.left(), out);
      if (is_binary(f.kind())) collect_atoms(f.right(), out);
  }
}

inline std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

/*
 * Sublanguage classification. Every fragment contains the Boolean
 * connectives and X; the subscript names the extra connectives.
 */
enum class Fragment : std::uint8_t {
  NextOnly,
  Diam,
  Box,
  DiamBox,
  Until,
  Release,
  Full,
};

namespace fragment_bits {
constexpr unsigned diam = 1u << 0;
constexpr unsigned box = 1u << 1;
constexpr unsigned until = 1u << 2;
constexpr unsigned release = 1u << 3;
}  // namespace fragment_bits

inline unsigned fragment_mask(Fragment f) {
  using namespace fragment_bits;
  switch (f) {
    case Fragment::NextOnly: return 0;
    case Fragment::Diam: return diam;
    case Fragment::Box: return box;
    case Fragment::DiamBox: return diam | box;
    case Fragment::Until: return until;
    case Fragment::Release: return release;
    case Fragment::Full: return diam | box | until | release;
  }
  return 0;
}

/* Least named fragment whose connective set includes the mask. */
inline Fragment fragment_from_mask(unsigned mask) {
  using namespace fragment_bits;
  switch (mask) {
    case 0: return Fragment::NextOnly;
    case diam: return Fragment::Diam;
    case box: return Fragment::Box;
    case diam | box: return Fragment::DiamBox;
    case until: return Fragment::Until;
    case release: return Fragment::Release;
    default: return Fragment::Full;
  }
}

inline bool fragment_leq(Fragment a, Fragment b) {
  return (fragment_mask(a) & ~fragment_mask(b)) == 0;
}

inline unsigned connective_mask(const Formula& f) {
  using namespace fragment_bits;
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom:
      return 0;
    case Formula::Kind::Eventually: return diam | connective_mask(f.child());
    case Formula::Kind::Henceforth: return box | connective_mask(f.child());
    case Formula::Kind::Next: return connective_mask(f.child());
    case Formula::Kind::Until: return until | connective_mask(f.left()) | connective_mask(f.right());
    case Formula::Kind::Release: return release | connective_mask(f.left()) | connective_mask(f.right());
    default:
      return connective_mask(f.left()) | connective_mask(f.right());
  }
}

inline Fragment fragment_of(const Formula& f) { return fragment_from_mask(connective_mask(f)); }

inline const char* to_string(Fragment f) {
  switch (f) {
    case Fragment::NextOnly: return "next-only";
    case Fragment::Diam: return "diam";
    case Fragment::Box: return "box";
    case Fragment::DiamBox: return "diam-box";
    case Fragment::Until: return "until";
    case Fragment::Release: return "release";
    case Fragment::Full: return "full";
  }
  return "?";
}

/* Uniform substitution of formulas for atoms; unmapped atoms stay. */
inline Formula instantiate(const Formula& schema, const std::map<std::string, Formula>& assignment) {
  switch (schema.kind()) {
    case Formula::Kind::Atom: {
      auto it = assignment.find(schema.atom_name());
      return it == assignment.end() ? schema : it->second;
    }
    case Formula::Kind::Bottom:
      return schema;
    case Formula::Kind::And:
      return Formula::conj(instantiate(schema.left(), assignment), instantiate(schema.right(), assignment));
    case Formula::Kind::Or:
      return Formula::disj(instantiate(schema.left(), assignment), instantiate(schema.right(), assignment));
    case Formula::Kind::Implies:
      return Formula::implies(instantiate(schema.left(), assignment), instantiate(schema.right(), assignment));
    case Formula::Kind::Until:
      return Formula::until(instantiate(schema.left(), assignment), instantiate(schema.right(), assignment));
    case Formula::Kind::Release:
      return Formula::release(instantiate(schema.left(), assignment), instantiate(schema.right(), assignment));
    case Formula::Kind::Next:
      return Formula::next(instantiate(schema.child(), assignment));
    case Formula::Kind::Eventually:
      return Formula::eventually(instantiate(schema.child(), assignment));
    case Formula::Kind::Henceforth:
      return Formula::henceforth(instantiate(schema.child(), assignment));
  }
  throw std::logic_error("instantiate: bad kind");
}

/*
 * X-pushing rewrites for the persistent-class normal form. Each flag
 * enables one distribution law; a disabled law leaves that X in place.
 * Every law is an equivalence over persistent models (the implication
 * law is the only one that needs persistence); the test suite
 * re-confirms each one by exhaustive search before the set is relied
 * on, so a law that failed the search could be switched off here.
 */
enum NextRewrite : unsigned {
  rewrite_bottom = 1u << 0,
  rewrite_and = 1u << 1,
  rewrite_or = 1u << 2,
  rewrite_implies = 1u << 3,
  rewrite_eventually = 1u << 4,
  rewrite_henceforth = 1u << 5,
  rewrite_until = 1u << 6,
  rewrite_release = 1u << 7,
};

constexpr unsigned all_next_rewrites = 0xFFu;

namespace detail {

/* Push one X over an already-normalised formula. */
inline Formula push_next(const Formula& f, unsigned rewrites) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::Next:
      return Formula::next(f);
    case K::Bottom:
      return (rewrites & rewrite_bottom) ? f : Formula::next(f);
    case K::And:
      if (rewrites & rewrite_and)
        return Formula::conj(push_next(f.left(), rewrites), push_next(f.right(), rewrites));
      return Formula::next(f);
    case K::Or:
      if (rewrites & rewrite_or)
        return Formula::disj(push_next(f.left(), rewrites), push_next(f.right(), rewrites));
      return Formula::next(f);
    case K::Implies:
      if (rewrites & rewrite_implies)
        return Formula::implies(push_next(f.left(), rewrites), push_next(f.right(), rewrites));
      return Formula::next(f);
    case K::Eventually:
      if (rewrites & rewrite_eventually) return Formula::eventually(push_next(f.child(), rewrites));
      return Formula::next(f);
    case K::Henceforth:
      if (rewrites & rewrite_henceforth) return Formula::henceforth(push_next(f.child(), rewrites));
      return Formula::next(f);
    case K::Until:
      if (rewrites & rewrite_until)
        return Formula::until(push_next(f.left(), rewrites), push_next(f.right(), rewrites));
      return Formula::next(f);
    case K::Release:
      if (rewrites & rewrite_release)
        return Formula::release(push_next(f.left(), rewrites), push_next(f.right(), rewrites));
      return Formula::next(f);
  }
  throw std::logic_error("push_next: bad kind");
}

}  // namespace detail

/* Equivalent form (over persistent models) with X applied to atoms only. */
inline Formula next_normal_form(const Formula& f, unsigned rewrites = all_next_rewrites) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::Bottom:
      return f;
    case K::Next:
      return detail::push_next(next_normal_form(f.child(), rewrites), rewrites);
    case K::Eventually:
      return Formula::eventually(next_normal_form(f.child(), rewrites));
    case K::Henceforth:
      return Formula::henceforth(next_normal_form(f.child(), rewrites));
    case K::And:
      return Formula::conj(next_normal_form(f.left(), rewrites), next_normal_form(f.right(), rewrites));
    case K::Or:
      return Formula::disj(next_normal_form(f.left(), rewrites), next_normal_form(f.right(), rewrites));
    case K::Implies:
      return Formula::implies(next_normal_form(f.left(), rewrites), next_normal_form(f.right(), rewrites));
    case K::Until:
      return Formula::until(next_normal_form(f.left(), rewrites), next_normal_form(f.right(), rewrites));
    case K::Release:
      return Formula::release(next_normal_form(f.left(), rewrites), next_normal_form(f.right(), rewrites));
  }
  throw std::logic_error("next_normal_form: bad kind");
}

/* Syntactic check: every X sits on an atom or on another X. */
inline bool in_next_normal_form(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom:
      return true;
    case Formula::Kind::Next: {
      Formula c = f.child();
      if (c.kind() != Formula::Kind::Atom && c.kind() != Formula::Kind::Next) return false;
      return in_next_normal_form(c);
    }
    default:
      if (!in_next_normal_form(f.left())) return false;
      return is_binary(f.kind()) ? in_next_normal_form(f.right()) : true;
  }
}

}  // namespace itle
