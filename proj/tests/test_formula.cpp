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

#include <doctest.h>

#include <random>

#include "itle/formula.hpp"
#include "itle/formula_text.hpp"
#include "itle/generators.hpp"

using namespace itle;

TEST_CASE("parser follows the precedence table") {
  Formula f = parse_formula("F p -> G q");
  CHECK(f == Formula::implies(Formula::eventually(Formula::atom("p")),
                              Formula::henceforth(Formula::atom("q"))));

  CHECK(parse_formula("~p") == Formula::implies(Formula::atom("p"), Formula::bottom()));

  /* binary temporal operators associate right */
  CHECK(parse_formula("p U q U r") ==
        Formula::until(Formula::atom("p"), Formula::until(Formula::atom("q"), Formula::atom("r"))));
  CHECK(parse_formula("p -> q -> r") ==
        Formula::implies(Formula::atom("p"), Formula::implies(Formula::atom("q"), Formula::atom("r"))));

  CHECK(parse_formula("p U q & r") ==
        Formula::conj(Formula::until(Formula::atom("p"), Formula::atom("q")), Formula::atom("r")));
  CHECK(parse_formula("a & b U c") ==
        Formula::conj(Formula::atom("a"), Formula::until(Formula::atom("b"), Formula::atom("c"))));
  CHECK(parse_formula("X p | q") ==
        Formula::disj(Formula::next(Formula::atom("p")), Formula::atom("q")));
  CHECK(parse_formula("true") == Formula::top());
  CHECK(parse_formula("X X p") == Formula::next(Formula::next(Formula::atom("p"))));
  CHECK(parse_formula("p U q R r") ==
        Formula::until(Formula::atom("p"), Formula::release(Formula::atom("q"), Formula::atom("r"))));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("   "), ParseError);
  CHECK_THROWS_AS(parse_formula("p &"), ParseError);
  CHECK_THROWS_AS(parse_formula("(p -> q"), ParseError);
  CHECK_THROWS_AS(parse_formula("p q"), ParseError);
  CHECK_THROWS_AS(parse_formula("p - q"), ParseError);
  CHECK_THROWS_AS(parse_formula("Y p"), ParseError);
  try {
    parse_formula("p & & q");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("printer re-sugars and uses minimal parentheses") {
  CHECK(print_formula(Formula::implies(Formula::atom("p"), Formula::bottom())) == "~p");
  CHECK(print_formula(Formula::until(Formula::atom("p"), Formula::atom("q"))) == "p U q");
  CHECK(print_formula(Formula::next(Formula::implies(Formula::atom("p"), Formula::atom("q")))) ==
        "X(p -> q)");
  CHECK(print_formula(Formula::top()) == "true");
  CHECK(print_formula(parse_formula("(p U q) U r")) == "(p U q) U r");
  CHECK(print_formula(parse_formula("p U (q U r)")) == "p U q U r");
  CHECK(print_formula(parse_formula("~(p & q)")) == "~(p & q)");
  CHECK(print_formula(parse_formula("~p -> q")) == "~p -> q");
}

TEST_CASE("print/parse round trip on random formulas") {
  std::mt19937_64 rng(42);
  RandomFormulaOptions opt;
  opt.max_length = 8;
  opt.atoms = {"p", "q", "r"};
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, opt);
    CAPTURE(print_formula(f));
    CHECK(parse_formula(print_formula(f)) == f);
  }
}

TEST_CASE("formula files: one per line with comments") {
  auto formulas = parse_formula_lines("# header\np -> q\n\nF p   # trailing\n");
  REQUIRE(formulas.size() == 2);
  CHECK(formulas[0] == parse_formula("p -> q"));
  CHECK(formulas[1] == parse_formula("F p"));
  CHECK_THROWS_AS(parse_formula_lines("p\n& q\n"), ParseError);
}

TEST_CASE("length counts connectives") {
  CHECK(length(Formula::atom("p")) == 0);
  CHECK(length(parse_formula("false")) == 0);
  CHECK(length(parse_formula("~p")) == 1);  // desugared negation keeps the unary count
  CHECK(length(parse_formula("G(p -> X p) -> (p -> G p)")) == 6);
  CHECK(length(parse_formula("p U q")) == 1);
  CHECK(length(parse_formula("true")) == 1);
}

TEST_CASE("fragment classification is the least containing fragment") {
  CHECK(fragment_of(parse_formula("X p & q")) == Fragment::NextOnly);
  CHECK(fragment_of(parse_formula("F p")) == Fragment::Diam);
  CHECK(fragment_of(parse_formula("G p")) == Fragment::Box);
  CHECK(fragment_of(parse_formula("F p -> G p")) == Fragment::DiamBox);
  CHECK(fragment_of(parse_formula("p U q")) == Fragment::Until);
  CHECK(fragment_of(parse_formula("p R q")) == Fragment::Release);
  CHECK(fragment_of(parse_formula("p U (G q)")) == Fragment::Full);
  CHECK(fragment_of(parse_formula("p U (q R r)")) == Fragment::Full);

  /* containment lattice */
  for (Fragment f : {Fragment::NextOnly, Fragment::Diam, Fragment::Box, Fragment::DiamBox, Fragment::Until,
                     Fragment::Release, Fragment::Full}) {
    CHECK(fragment_leq(Fragment::NextOnly, f));
    CHECK(fragment_leq(f, Fragment::Full));
    CHECK(fragment_leq(f, f));
  }
  CHECK(fragment_leq(Fragment::Diam, Fragment::DiamBox));
  CHECK(fragment_leq(Fragment::Box, Fragment::DiamBox));
  CHECK(!fragment_leq(Fragment::Until, Fragment::DiamBox));
  CHECK(!fragment_leq(Fragment::DiamBox, Fragment::Until));
  CHECK(!fragment_leq(Fragment::Release, Fragment::Until));
}

TEST_CASE("instantiate substitutes uniformly") {
  Formula schema = parse_formula("G(G a -> b)");
  Formula expected = parse_formula("G(G p -> q)");
  CHECK(instantiate(schema, {{"a", Formula::atom("p")}, {"b", Formula::atom("q")}}) == expected);

  CHECK(instantiate(Formula::atom("a"), {}) == Formula::atom("a"));

  CHECK(instantiate(parse_formula("F a"), {{"a", parse_formula("p & q")}}) == parse_formula("F(p & q)"));

  /* atom-for-atom substitution preserves length; general substitution grows it */
  std::mt19937_64 rng(7);
  RandomFormulaOptions opt;
  for (int i = 0; i < 200; ++i) {
    Formula f = random_formula(rng, opt);
    CHECK(length(instantiate(f, {{"p", Formula::atom("r")}, {"q", Formula::atom("p")}})) == length(f));
    CHECK(length(instantiate(f, {{"p", parse_formula("p & p")}})) >= length(f));
  }
}

TEST_CASE("next normal form pushes X onto atoms") {
  CHECK(next_normal_form(parse_formula("X(p & q)")) == parse_formula("X p & X q"));
  CHECK(next_normal_form(parse_formula("p")) == parse_formula("p"));
  CHECK(next_normal_form(parse_formula("X(p -> q)")) == parse_formula("X p -> X q"));
  CHECK(next_normal_form(parse_formula("X false")) == parse_formula("false"));
  CHECK(next_normal_form(parse_formula("X X(p | q)")) == parse_formula("X X p | X X q"));
  CHECK(next_normal_form(parse_formula("X F p")) == parse_formula("F X p"));
  CHECK(next_normal_form(parse_formula("X(p U q)")) == parse_formula("X p U X q"));

  /* a disabled law leaves that X alone */
  unsigned no_and = all_next_rewrites & ~rewrite_and;
  CHECK(next_normal_form(parse_formula("X(p & q)"), no_and) == parse_formula("X(p & q)"));
  CHECK(next_normal_form(parse_formula("X(p & q) | X F p"), no_and) == parse_formula("X(p & q) | F X p"));

  std::mt19937_64 rng(11);
  RandomFormulaOptions opt;
  opt.max_length = 7;
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, opt);
    Formula nf = next_normal_form(f);
    CAPTURE(print_formula(f));
    CHECK(in_next_normal_form(nf));
    CHECK(next_normal_form(nf) == nf);  // idempotent
  }
  CHECK(!in_next_normal_form(parse_formula("X(p & q)")));
  CHECK(in_next_normal_form(parse_formula("X X p & X q")));
}
