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
#include <set>

#include "itle/acceptance.hpp"
#include "itle/checker.hpp"
#include "itle/countermodels.hpp"
#include "itle/formula_text.hpp"
#include "itle/generators.hpp"

using namespace itle;

TEST_CASE("orbit decomposition: prefix then cycle") {
  Model fs = fisher_servi_model();
  Orbit o = orbit(fs, fs.world_index("w"));
  REQUIRE(o.prefix.size() == 1);
  REQUIRE(o.cycle.size() == 1);
  CHECK(fs.world_name(o.prefix[0]) == "w");
  CHECK(fs.world_name(o.cycle[0]) == "v");

  Model one = build_model({"w"}, {}, {{"w", "w"}}, {});
  Orbit o1 = orbit(one, 0);
  CHECK(o1.prefix.empty());
  REQUIRE(o1.cycle.size() == 1);

  Model e2 = expanding_family_e(2);
  Orbit oe = orbit(e2, e2.world_index("0_1"));
  std::vector<std::string> prefix, cycle;
  for (int w : oe.prefix) prefix.push_back(e2.world_name(w));
  for (int w : oe.cycle) cycle.push_back(e2.world_name(w));
  CHECK(prefix == std::vector<std::string>{"0_1", "1_1", "2_1", "3_1"});
  CHECK(cycle == std::vector<std::string>{"0_0", "1_0", "2_0", "3_0"});
}

TEST_CASE("orbit indexing is sound") {
  std::mt19937_64 rng(23);
  RandomModelOptions opt;
  opt.max_worlds = 6;
  for (int i = 0; i < 200; ++i) {
    Model m = random_model(rng, opt);
    for (int w = 0; w < m.size(); ++w) {
      Orbit o = orbit(m, w);
      CHECK(o.size() <= m.size());
      int x = w;
      for (int k = 0; k < 3 * m.size(); ++k) {
        CHECK(o.at(static_cast<std::uint64_t>(k)) == x);
        x = m.succ(x);
      }
      /* prefix is minimal: its head never recurs in the cycle */
      std::set<int> cycle_worlds(o.cycle.begin(), o.cycle.end());
      for (int p : o.prefix) CHECK(!cycle_worlds.count(p));
    }
  }
}

TEST_CASE("satisfaction on the named countermodels") {
  Model fs = fisher_servi_model();
  CHECK(!satisfies(fs, "u", parse_formula("p -> q")));
  CHECK(satisfies(fs, "w", parse_formula("X p -> X q")));
  CHECK(satisfies(fs, "w", parse_formula("false -> false")));
  CHECK(satisfies(fs, "w", parse_formula("F p -> G q")));
  CHECK(!satisfies(fs, "w", parse_formula("X(p -> q)")));

  Model wc = weak_connectedness_model();
  CHECK(!satisfies(wc, "v", parse_formula("G p -> q")));
  CHECK(!satisfies(wc, "t", parse_formula("G q -> p")));
  CHECK(!satisfies(wc, "w", parse_formula("G(G p -> q) | G(G q -> p)")));

  CHECK_THROWS_AS(satisfies(fs, "nope", parse_formula("p")), ModelError);
}

TEST_CASE("extensions") {
  Model fs = fisher_servi_model();
  CHECK(extension(fs, Formula::atom("p")) == world_bit(fs.world_index("u")));
  CHECK(extension(fs, Formula::bottom()) == 0);

  Model h2 = ht_family_h(2);
  std::uint64_t row1 = 0;
  for (int i = 0; i <= 3; ++i) row1 |= world_bit(h2.world_index(std::to_string(i) + "_1"));
  CHECK(extension(h2, parse_formula("G p")) == row1);
  CHECK(satisfies(h2, "0_1", parse_formula("G p")));
  CHECK(!satisfies(h2, "0_0", parse_formula("G p")));
  CHECK(satisfies(h2, "0_0", parse_formula("F p")));
}

TEST_CASE("per-model validity with counter-world") {
  Model fs = fisher_servi_model();
  Validity v1 = valid_in_model(fs, parse_formula("(X p -> X q) -> X(p -> q)"));
  CHECK(!v1.valid);
  CHECK(fs.world_name(v1.counter_world) == "w");
  Validity v2 = valid_in_model(fs, parse_formula("(F p -> G q) -> G(p -> q)"));
  CHECK(!v2.valid);
  CHECK(fs.world_name(v2.counter_world) == "w");
  CHECK(valid_in_model(fs, parse_formula("p -> p")).valid);
}

TEST_CASE("monotone extensions (upward closure)") {
  Model fs = fisher_servi_model();
  CHECK(check_monotone_extension(fs, parse_formula("p -> q")).monotone);
  CHECK(check_monotone_extension(fs, Formula::atom("p")).monotone);
  CHECK(check_monotone_extension(ht_family_h(3), parse_formula("p U q")).monotone);

  std::mt19937_64 rng(31);
  RandomModelOptions mopt;
  RandomFormulaOptions fopt;
  for (int i = 0; i < 300; ++i) {
    Model m = random_model(rng, mopt);
    Formula f = random_formula(rng, fopt);
    CAPTURE(print_formula(f));
    CHECK(check_monotone_extension(m, f).monotone);
  }
}

TEST_CASE("fixpoint unfoldings as extension equalities") {
  std::mt19937_64 rng(37);
  RandomModelOptions mopt;
  Formula u = parse_formula("p U q");
  Formula u_unfold = parse_formula("q | (p & X(p U q))");
  Formula r = parse_formula("p R q");
  Formula r_unfold = parse_formula("q & (p | X(p R q))");
  for (int i = 0; i < 300; ++i) {
    Model m = random_model(rng, mopt);
    Evaluator ev(m);
    CHECK(ev.extension(u) == ev.extension(u_unfold));
    CHECK(ev.extension(r) == ev.extension(r_unfold));
  }
}

TEST_CASE("orbit evaluation agrees with the unrolled reference evaluator") {
  std::mt19937_64 rng(41);
  RandomModelOptions mopt;
  RandomFormulaOptions fopt;
  fopt.max_length = 5;
  for (int i = 0; i < 300; ++i) {
    Model m = random_model(rng, mopt);
    Formula f = random_formula(rng, fopt);
    std::uint64_t ext = extension(m, f);
    CAPTURE(print_formula(f));
    CAPTURE(serialize_model(m));
    for (int w = 0; w < m.size(); ++w)
      CHECK(static_cast<bool>((ext >> w) & 1) == acceptance::naive_satisfies(m, w, f));
  }
}
