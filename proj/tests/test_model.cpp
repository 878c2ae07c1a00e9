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
#include <string>

#include "itle/countermodels.hpp"
#include "itle/generators.hpp"
#include "itle/model.hpp"

using namespace itle;

namespace {

Model three_world_model() {
  return build_model({"w", "v", "u"}, {{"v", "u"}}, {{"w", "v"}, {"v", "v"}, {"u", "u"}}, {{"p", {"u"}}});
}

}  // namespace

TEST_CASE("build_model closes the order and validates") {
  Model m = three_world_model();
  CHECK(m.size() == 3);
  CHECK(m.leq(m.world_index("v"), m.world_index("u")));
  CHECK(!m.leq(m.world_index("u"), m.world_index("v")));
  CHECK(m.leq(m.world_index("w"), m.world_index("w")));
  CHECK(m.succ(m.world_index("w")) == m.world_index("v"));
  CHECK(m.atom_true("p", m.world_index("u")));
  CHECK(!m.atom_true("p", m.world_index("v")));
  CHECK(m.atom_set("absent") == 0);

  Model one = build_model({"w"}, {}, {{"w", "w"}}, {});
  CHECK(one.size() == 1);

  /* generators whose closure adds a pair */
  Model chain = build_model({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}},
                            {{"a", "a"}, {"b", "b"}, {"c", "c"}}, {});
  CHECK(chain.leq(0, 2));
}

TEST_CASE("build_model rejects invariant violations with witnesses") {
  CHECK_THROWS_WITH_AS(build_model({"a", "b"}, {{"a", "b"}}, {{"a", "b"}, {"b", "a"}}, {}),
                       doctest::Contains("forward confluence"), ModelError);
  CHECK_THROWS_WITH_AS(build_model({"a", "b"}, {{"a", "b"}, {"b", "a"}},
                                   {{"a", "a"}, {"b", "b"}}, {}),
                       doctest::Contains("antisymmetric"), ModelError);
  CHECK_THROWS_WITH_AS(build_model({"a", "b"}, {{"a", "b"}}, {{"a", "a"}, {"b", "b"}}, {{"p", {"a"}}}),
                       doctest::Contains("not monotone"), ModelError);
  CHECK_THROWS_WITH_AS(build_model({"a"}, {}, {{"a", "z"}}, {}), doctest::Contains("unknown world"),
                       ModelError);
  CHECK_THROWS_WITH_AS(build_model({"a"}, {}, {}, {}), doctest::Contains("no successor"), ModelError);
  CHECK_THROWS_WITH_AS(build_model({"a"}, {}, {{"a", "a"}, {"a", "a"}}, {}),
                       doctest::Contains("two successors"), ModelError);
  CHECK_THROWS_AS(build_model({}, {}, {}, {}), ModelError);
}

TEST_CASE("backward confluence classification") {
  Model m = three_world_model();
  auto report = check_backward_confluence(m);
  CHECK(!report.holds);
  /* u is above succ(w) = v but nothing above w maps onto u */
  CHECK(m.world_name(report.w) == "w");
  CHECK(m.world_name(report.v) == "u");

  CHECK(is_backward_confluent(build_model({"w"}, {}, {{"w", "w"}}, {})));
  CHECK(!is_backward_confluent(expanding_family_e(2)));
  CHECK(is_backward_confluent(ht_family_h(2)));
}

TEST_CASE("here-and-there classification") {
  auto h2 = check_here_and_there(ht_family_h(2));
  CHECK(h2.holds);
  CHECK(h2.chains.size() == 4);

  CHECK(!is_here_and_there(build_model({"w"}, {}, {{"w", "w"}}, {})));
  CHECK(!is_here_and_there(three_world_model()));
  CHECK(is_here_and_there(weak_connectedness_model()));
  CHECK(!is_here_and_there(expanding_family_e(1)));

  /* two-chain order but succ crosses roles */
  Model crossed = build_model({"a0", "a1", "b0", "b1"}, {{"a0", "a1"}, {"b0", "b1"}},
                              {{"a0", "b0"}, {"a1", "b1"}, {"b0", "b0"}, {"b1", "b1"}}, {});
  CHECK(is_here_and_there(crossed));
  Model collapsed = build_model({"a0", "a1", "b0", "b1"}, {{"a0", "a1"}, {"b0", "b1"}},
                                {{"a0", "b0"}, {"a1", "b0"}, {"b0", "b0"}, {"b1", "b1"}}, {});
  CHECK(!is_here_and_there(collapsed));

  CHECK(frame_class_of(ht_family_h(1)) == FrameClass::HereAndThere);
  CHECK(frame_class_of(three_world_model()) == FrameClass::Expanding);
}

TEST_CASE("class chain: here-and-there implies backward confluent") {
  std::mt19937_64 rng(3);
  RandomModelOptions opt;
  opt.max_worlds = 6;
  for (int i = 0; i < 300; ++i) {
    Model m = random_model(rng, opt);
    if (is_here_and_there(m)) CHECK(is_backward_confluent(m));
  }
}

TEST_CASE("serialization matches the documented format") {
  std::string expected =
      "worlds: w v u\n"
      "order: v <= u\n"
      "succ: w -> v ; v -> v ; u -> u\n"
      "val: p @ u\n";
  CHECK(serialize_model(three_world_model()) == expected);
  CHECK(parse_model(expected) == three_world_model());
}

TEST_CASE("parse_model reports line numbers and missing pieces") {
  CHECK_THROWS_WITH_AS(parse_model("worlds: a\nsucc: a -> a\nsucc: a -> a\n"),
                       doctest::Contains("two successors"), ModelError);
  CHECK_THROWS_WITH_AS(parse_model("worlds: a b\nsucc: a -> a\n"), doctest::Contains("'b' has no successor"),
                       ModelError);
  CHECK_THROWS_WITH_AS(parse_model("order: a <= b\nworlds: a b\n"), doctest::Contains("line 1"), ModelError);
  CHECK_THROWS_WITH_AS(parse_model("worlds: a\nsuc: a -> a\n"), doctest::Contains("unknown key"), ModelError);
  CHECK_THROWS_AS(parse_model(""), ModelError);
  CHECK_THROWS_AS(parse_model("worlds: a\nsucc: a => a\n"), ModelError);

  /* comments and the empty valuation list */
  Model m = parse_model("# file\nworlds: a  # two\nsucc: a -> a\nval: p @\n");
  CHECK(m.size() == 1);
  CHECK(m.atom_set("p") == 0);
}

TEST_CASE("serialize/parse round trip on random and named models") {
  std::mt19937_64 rng(9);
  RandomModelOptions opt;
  opt.max_worlds = 6;
  for (int i = 0; i < 300; ++i) {
    Model m = random_model(rng, opt);
    CHECK(parse_model(serialize_model(m)) == m);
  }
  for (const char* name : {"fisher-servi", "weak-connected", "H3", "E2"}) {
    Model m = named_artifact(name)->model();
    CHECK(parse_model(serialize_model(m)) == m);
  }
}

TEST_CASE("closure agrees with an independent computation") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> size(1, 6);
  std::bernoulli_distribution edge(0.4);
  for (int iter = 0; iter < 200; ++iter) {
    int n = size(rng);
    std::vector<std::string> worlds;
    for (int i = 0; i < n; ++i) worlds.push_back("n" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> gens;
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (edge(rng)) {
          gens.emplace_back(worlds[i], worlds[j]);
          reach[i][j] = true;
        }
    for (int i = 0; i < n; ++i) reach[i][i] = true;
    for (int k = 0; k < n; ++k)  // Floyd-Warshall oracle
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;

    std::vector<std::pair<std::string, std::string>> succ;
    for (int i = 0; i < n; ++i) succ.emplace_back(worlds[i], worlds[i]);
    Model m = build_model(worlds, gens, succ, {});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(m.leq(i, j) == reach[i][j]);
  }
}

TEST_CASE("build limits") {
  std::vector<std::string> worlds;
  std::vector<std::pair<std::string, std::string>> succ;
  for (int i = 0; i < 65; ++i) {
    worlds.push_back("x" + std::to_string(i));
    succ.emplace_back(worlds.back(), worlds.back());
  }
  CHECK_THROWS_WITH_AS(build_model(worlds, {}, succ, {}), doctest::Contains("too many worlds"), ModelError);
  CHECK_THROWS_WITH_AS(build_model({"a", "a"}, {}, {{"a", "a"}}, {}), doctest::Contains("duplicate world"),
                       ModelError);
  CHECK_THROWS_WITH_AS(build_model({"a"}, {}, {{"a", "a"}}, {{"P", {"a"}}}),
                       doctest::Contains("bad atom name"), ModelError);
}
