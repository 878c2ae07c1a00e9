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
  \file generators.hpp
  \brief Seeded random models/formulas and exhaustive formula
         enumeration for the property suites. std::mt19937_64 keeps the
         streams reproducible across platforms.
*/

#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "itle/formula.hpp"
#include "itle/model.hpp"

namespace itle {

struct RandomModelOptions {
  int max_worlds = 5;
  std::vector<std::string> atoms = {"p", "q"};
  double edge_prob = 0.35;
};

/*
 * Random valid model: a random strict order on topologically ordered
 * worlds, a forward-confluent successor (rejection sampled, with the
 * identity as a last resort), and upward-closed random valuations.
 */
inline Model random_model(std::mt19937_64& rng, const RandomModelOptions& opt = {}) {
  const int n = std::uniform_int_distribution<int>(1, opt.max_worlds)(rng);
  std::bernoulli_distribution edge(opt.edge_prob);
  std::uniform_int_distribution<int> world(0, n - 1);

  std::vector<std::uint64_t> up(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(rng)) up[static_cast<std::size_t>(i)] |= world_bit(j);
  detail::close_order(up);

  std::vector<int> succ(static_cast<std::size_t>(n));
  bool confluent = false;
  for (int attempt = 0; attempt < 64 && !confluent; ++attempt) {
    for (int w = 0; w < n; ++w) succ[static_cast<std::size_t>(w)] = world(rng);
    confluent = true;
    for (int w = 0; w < n && confluent; ++w)
      for (int v = 0; v < n && confluent; ++v)
        if ((up[static_cast<std::size_t>(w)] >> v) & 1)
          confluent = (up[static_cast<std::size_t>(succ[static_cast<std::size_t>(w)])] >>
                       succ[static_cast<std::size_t>(v)]) & 1;
  }
  if (!confluent)
    for (int w = 0; w < n; ++w) succ[static_cast<std::size_t>(w)] = w;

  std::vector<std::pair<std::string, std::uint64_t>> valuation;
  std::bernoulli_distribution half(0.5);
  for (const auto& atom : opt.atoms) {
    std::uint64_t mask = 0;
    for (int w = 0; w < n; ++w)
      if (half(rng)) mask |= up[static_cast<std::size_t>(w)];  // upward closure
    valuation.emplace_back(atom, mask);
  }

  std::vector<std::string> names;
  for (int w = 0; w < n; ++w) names.push_back("w" + std::to_string(w));
  return build_model_indexed(std::move(names), std::move(up), std::move(succ), std::move(valuation));
}

struct RandomFormulaOptions {
  Fragment fragment = Fragment::Full;
  int max_length = 6;
  std::vector<std::string> atoms = {"p", "q"};
};

namespace detail {

inline std::vector<Formula::Kind> unary_kinds(Fragment frag) {
  using namespace fragment_bits;
  std::vector<Formula::Kind> out{Formula::Kind::Next};
  unsigned mask = fragment_mask(frag);
  if (mask & diam) out.push_back(Formula::Kind::Eventually);
  if (mask & box) out.push_back(Formula::Kind::Henceforth);
  return out;
}

inline std::vector<Formula::Kind> binary_kinds(Fragment frag) {
  using namespace fragment_bits;
  std::vector<Formula::Kind> out{Formula::Kind::And, Formula::Kind::Or, Formula::Kind::Implies};
  unsigned mask = fragment_mask(frag);
  if (mask & until) out.push_back(Formula::Kind::Until);
  if (mask & release) out.push_back(Formula::Kind::Release);
  return out;
}

inline Formula make_node(Formula::Kind k, Formula lhs, std::optional<Formula> rhs = std::nullopt) {
  using K = Formula::Kind;
  switch (k) {
    case K::And: return Formula::conj(std::move(lhs), std::move(*rhs));
    case K::Or: return Formula::disj(std::move(lhs), std::move(*rhs));
    case K::Implies: return Formula::implies(std::move(lhs), std::move(*rhs));
    case K::Until: return Formula::until(std::move(lhs), std::move(*rhs));
    case K::Release: return Formula::release(std::move(lhs), std::move(*rhs));
    case K::Next: return Formula::next(std::move(lhs));
    case K::Eventually: return Formula::eventually(std::move(lhs));
    case K::Henceforth: return Formula::henceforth(std::move(lhs));
    default: throw std::logic_error("make_node: not a connective");
  }
}

inline Formula random_formula_exact(std::mt19937_64& rng, const RandomFormulaOptions& opt, int len) {
  if (len == 0) {
    std::uniform_int_distribution<std::size_t> pick(0, opt.atoms.size());
    std::size_t i = pick(rng);
    return i == opt.atoms.size() ? Formula::bottom() : Formula::atom(opt.atoms[i]);
  }
  auto unary = unary_kinds(opt.fragment);
  auto binary = binary_kinds(opt.fragment);
  std::uniform_int_distribution<std::size_t> pick(0, unary.size() + binary.size() - 1);
  std::size_t i = pick(rng);
  if (i < unary.size()) return make_node(unary[i], random_formula_exact(rng, opt, len - 1));
  Formula::Kind k = binary[i - unary.size()];
  std::uniform_int_distribution<int> split(0, len - 1);
  int left_len = split(rng);
  Formula lhs = random_formula_exact(rng, opt, left_len);
  Formula rhs = random_formula_exact(rng, opt, len - 1 - left_len);
  return make_node(k, std::move(lhs), std::move(rhs));
}

}  // namespace detail

inline Formula random_formula(std::mt19937_64& rng, const RandomFormulaOptions& opt = {}) {
  int len = std::uniform_int_distribution<int>(0, opt.max_length)(rng);
  return detail::random_formula_exact(rng, opt, len);
}

/* Every fragment formula with length <= max_length, smallest first. */
inline std::vector<Formula> enumerate_formulas(Fragment frag, int max_length,
                                               const std::vector<std::string>& atoms) {
  std::vector<std::vector<Formula>> by_len(static_cast<std::size_t>(max_length) + 1);
  for (const auto& a : atoms) by_len[0].push_back(Formula::atom(a));
  by_len[0].push_back(Formula::bottom());
  auto unary = detail::unary_kinds(frag);
  auto binary = detail::binary_kinds(frag);
  for (int len = 1; len <= max_length; ++len) {
    for (auto k : unary)
      for (const Formula& sub : by_len[static_cast<std::size_t>(len - 1)])
        by_len[static_cast<std::size_t>(len)].push_back(detail::make_node(k, sub));
    for (auto k : binary)
      for (int left = 0; left <= len - 1; ++left)
        for (const Formula& lhs : by_len[static_cast<std::size_t>(left)])
          for (const Formula& rhs : by_len[static_cast<std::size_t>(len - 1 - left)])
            by_len[static_cast<std::size_t>(len)].push_back(detail::make_node(k, lhs, rhs));
  }
  std::vector<Formula> out;
  for (auto& bucket : by_len)
    for (auto& f : bucket) out.push_back(std::move(f));
  return out;
}

}  // namespace itle
