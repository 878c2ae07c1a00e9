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

#include "itle/bisim.hpp"
#include "itle/countermodels.hpp"
#include "itle/formula_text.hpp"
#include "itle/generators.hpp"

using namespace itle;

namespace {

const BisimKind all_kinds[] = {BisimKind::Next, BisimKind::Diam, BisimKind::Box, BisimKind::Until,
                               BisimKind::Release};

BisimFamily identity_family(const Model& m, int depth) {
  BisimFamily fam{m, m, {}};
  PairRel id(m.size(), m.size());
  for (int w = 0; w < m.size(); ++w) id.insert(w, w);
  for (int i = 0; i <= depth; ++i) fam.chain.push_back(id);
  return fam;
}

}  // namespace

TEST_CASE("the identity family is a bisimulation of every kind") {
  Model fs = fisher_servi_model();
  for (BisimKind kind : all_kinds) {
    auto violations = verify_family(kind, identity_family(fs, 2));
    CHECK(violations.empty());
  }
}

TEST_CASE("depth zero: Z_0 is atom agreement") {
  Model fs = fisher_servi_model();
  for (BisimKind kind : all_kinds) {
    BisimFamily fam = max_family(kind, fs, fs, 0);
    REQUIRE(fam.chain.size() == 1);
    CHECK(fam.chain[0] == atom_agreement(fs, fs));
  }
  /* p splits {w,v} from {u} */
  PairRel z0 = atom_agreement(fs, fs);
  CHECK(z0.contains(fs.world_index("w"), fs.world_index("v")));
  CHECK(!z0.contains(fs.world_index("w"), fs.world_index("u")));
  CHECK(z0.contains(fs.world_index("u"), fs.world_index("u")));
}

TEST_CASE("greatest families on the parametric models verify cleanly") {
  Model h2 = ht_family_h(2);
  BisimFamily hu = max_family(BisimKind::Until, h2, h2, 2);
  CHECK(verify_family(BisimKind::Until, hu).empty());
  CHECK(hu.chain[2].contains(h2.world_index("0_0"), h2.world_index("0_1")));

  Model e2 = expanding_family_e(2);
  BisimFamily eb = max_family(BisimKind::Box, e2, e2, 2);
  CHECK(verify_family(BisimKind::Box, eb).empty());
  CHECK(eb.chain[2].contains(e2.world_index("0_0"), e2.world_index("0_1")));
}

TEST_CASE("max_family is maximal: any extra pair breaks a clause") {
  for (BisimKind kind : all_kinds)
    for (int n = 1; n <= 2; ++n) {
      Model h = ht_family_h(1);
      BisimFamily fam = max_family(kind, h, h, n);
      for (int level = 1; level <= n; ++level)
        for (int a = 0; a < h.size(); ++a)
          for (int b = 0; b < h.size(); ++b) {
            if (fam.chain[static_cast<std::size_t>(level)].contains(a, b)) continue;
            if (!fam.chain[static_cast<std::size_t>(level - 1)].contains(a, b)) continue;
            BisimFamily extended = fam;
            extended.chain[static_cast<std::size_t>(level)].insert(a, b);
            CAPTURE(to_string(kind));
            CHECK(!verify_family(kind, extended).empty());
          }
    }
}

TEST_CASE("monotone refinement and kind ordering") {
  for (int n = 1; n <= 3; ++n) {
    Model h = ht_family_h(n);
    Model e = expanding_family_e(n);
    for (const Model* m : {&h, &e}) {
      BisimFamily diam = max_family(BisimKind::Diam, *m, *m, n);
      BisimFamily box = max_family(BisimKind::Box, *m, *m, n);
      BisimFamily until = max_family(BisimKind::Until, *m, *m, n);
      BisimFamily release = max_family(BisimKind::Release, *m, *m, n);
      for (int i = 0; i <= n; ++i) {
        if (i > 0) {
          CHECK(diam.chain[static_cast<std::size_t>(i)].subset_of(diam.chain[static_cast<std::size_t>(i - 1)]));
          CHECK(until.chain[static_cast<std::size_t>(i)].subset_of(until.chain[static_cast<std::size_t>(i - 1)]));
        }
        /* until clauses strengthen diam clauses; release strengthens box */
        CHECK(until.chain[static_cast<std::size_t>(i)].subset_of(diam.chain[static_cast<std::size_t>(i)]));
        CHECK(release.chain[static_cast<std::size_t>(i)].subset_of(box.chain[static_cast<std::size_t>(i)]));
      }
    }
  }
}

TEST_CASE("verify_family rejects bad chains before clause checking") {
  Model fs = fisher_servi_model();
  BisimFamily fam{fs, fs, {}};
  CHECK_THROWS_AS(verify_family(BisimKind::Next, fam), FamilyError);

  fam.chain.emplace_back(fs.size(), fs.size());
  fam.chain.emplace_back(fs.size(), fs.size());
  fam.chain[1].insert(0, 1);  // larger than the empty Z_0
  CHECK_THROWS_WITH_AS(verify_family(BisimKind::Next, fam), doctest::Contains("descending"), FamilyError);
}

TEST_CASE("violations name the clause and replay") {
  /* relate atom-disagreeing worlds at Z_0 */
  Model fs = fisher_servi_model();
  BisimFamily fam{fs, fs, {PairRel(fs.size(), fs.size())}};
  fam.chain[0].insert(fs.world_index("w"), fs.world_index("u"));
  auto violations = verify_family(BisimKind::Next, fam);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].clause == "Atoms");
  CHECK(violations[0].level == 0);

  /* succ clause: w steps to v but u stays, and (v,u) is unrelated */
  BisimFamily fam2{fs, fs, {atom_agreement(fs, fs), PairRel(fs.size(), fs.size())}};
  fam2.chain[0].erase(fs.world_index("v"), fs.world_index("u"));
  fam2.chain[0].erase(fs.world_index("w"), fs.world_index("u"));
  fam2.chain[0].erase(fs.world_index("u"), fs.world_index("v"));
  fam2.chain[0].erase(fs.world_index("u"), fs.world_index("w"));
  fam2.chain[1].insert(fs.world_index("w"), fs.world_index("u"));
  auto violations2 = verify_family(BisimKind::Next, fam2);
  bool saw_atoms_or_succ = false;
  for (const auto& v : violations2)
    if (v.clause == "Atoms" || v.clause == "Forth X") saw_atoms_or_succ = true;
  CHECK(saw_atoms_or_succ);
}

TEST_CASE("preservation on countermodel families") {
  Model h2 = ht_family_h(2);
  BisimFamily fam = max_family(BisimKind::Until, h2, h2, 2);
  auto formulas = enumerate_formulas(Fragment::Until, 2, {"p"});
  CHECK(preservation_check(BisimKind::Until, fam, formulas).empty());

  /* atoms agree on every level-0 pair by construction */
  CHECK(preservation_check(BisimKind::Until, fam, {Formula::atom("p")}).empty());

  Model e3 = expanding_family_e(3);
  BisimFamily famb = max_family(BisimKind::Box, e3, e3, 3);
  std::mt19937_64 rng(1234);
  RandomFormulaOptions fopt{Fragment::Box, 3, {"p"}};
  std::vector<Formula> random;
  for (int i = 0; i < 200; ++i) random.push_back(random_formula(rng, fopt));
  CHECK(preservation_check(BisimKind::Box, famb, random).empty());

  CHECK_THROWS_AS(preservation_check(BisimKind::Box, famb, {parse_formula("F p")}), std::invalid_argument);
  CHECK_THROWS_AS(preservation_check(BisimKind::Until, fam, {parse_formula("p R q")}), std::invalid_argument);
}

TEST_CASE("family text format round trips") {
  Model h1 = ht_family_h(1);
  BisimFamily fam = max_family(BisimKind::Diam, h1, h1, 2);
  std::string text = serialize_family(fam);
  BisimFamily back = parse_family(h1, h1, text);
  REQUIRE(back.chain.size() == fam.chain.size());
  for (std::size_t i = 0; i < fam.chain.size(); ++i) CHECK(back.chain[i] == fam.chain[i]);

  CHECK_THROWS_WITH_AS(parse_family(h1, h1, "level 1: (0_0,0_0)\n"), doctest::Contains("contiguous"),
                       FamilyError);
  CHECK_THROWS_WITH_AS(parse_family(h1, h1, "level 0: (zap,0_0)\n"), doctest::Contains("unknown world"),
                       FamilyError);
  CHECK_THROWS_AS(parse_family(h1, h1, ""), FamilyError);
  CHECK_THROWS_AS(parse_family(h1, h1, "level 0: 0_0/0_0\n"), FamilyError);
}

TEST_CASE("preservation property on random self-families") {
  std::mt19937_64 rng(77);
  RandomModelOptions mopt;
  mopt.max_worlds = 4;
  for (BisimKind kind : all_kinds) {
    RandomFormulaOptions fopt{bisim_fragment(kind), 3, {"p", "q"}};
    for (int iter = 0; iter < 40; ++iter) {
      Model m = random_model(rng, mopt);
      BisimFamily fam = max_family(kind, m, m, 3);
      CHECK(verify_family(kind, fam).empty());
      std::vector<Formula> formulas;
      for (int i = 0; i < 25; ++i) formulas.push_back(random_formula(rng, fopt));
      auto disagreements = preservation_check(kind, fam, formulas);
      if (!disagreements.empty()) {
        CAPTURE(serialize_model(m));
        CAPTURE(print_formula(disagreements.front().formula));
        CHECK(disagreements.empty());
      }
    }
  }
}
