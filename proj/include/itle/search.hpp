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
  \file search.hpp
  \brief Exhaustive enumeration of small models and countermodel search.

  Models are generated size-ascending, one isomorphism class each:
  posets come from topologically-labelled strict orders, then every
  forward-confluent successor function, then every monotone valuation;
  candidates are deduplicated by a canonical (minimum-over-relabelings)
  encoding. Here-and-there models have their own generator over chain
  count, chain map, and per-chain valuation states.

  Exhaustion is relative to the bounds: an "exhausted" verdict means no
  countermodel up to max_worlds, never validity over all models.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "itle/checker.hpp"
#include "itle/formula.hpp"
#include "itle/model.hpp"

namespace itle {

constexpr std::uint64_t default_search_limit = 10'000'000;

struct SearchBounds {
  int max_worlds = 3;
  std::vector<std::string> atoms;
  FrameClass frame_class = FrameClass::Expanding;
  std::optional<std::uint64_t> limit;  // default_search_limit when unset
  std::uint64_t seed = 0;              // consumed by the randomized suites only
};

struct EnumerationStats {
  std::uint64_t visited = 0;
  bool truncated = false;  // stopped by the visit limit, not by the consumer
};

enum class SearchVerdict : std::uint8_t { Found, Exhausted, LimitReached };

inline const char* to_string(SearchVerdict v) {
  switch (v) {
    case SearchVerdict::Found: return "found";
    case SearchVerdict::Exhausted: return "exhausted";
    case SearchVerdict::LimitReached: return "limit-reached";
  }
  return "?";
}

struct SearchResult {
  SearchVerdict verdict = SearchVerdict::Exhausted;
  std::optional<Model> model;  // witness when verdict == Found
  int world = -1;
  std::uint64_t visited = 0;
};

namespace detail {

/* Canonical byte encoding of (order, succ, valuation) under one labelling. */
inline void encode_model(int n, const std::vector<std::uint64_t>& up, const std::vector<int>& succ,
                         const std::vector<std::uint64_t>& val_masks, const std::vector<int>& perm,
                         const std::vector<int>& inv, std::string& out) {
  out.clear();
  auto permute_mask = [&](std::uint64_t mask) {
    std::uint64_t p = 0;
    while (mask) {
      int w = std::countr_zero(mask);
      mask &= mask - 1;
      p |= world_bit(inv[static_cast<std::size_t>(w)]);
    }
    return p;
  };
  for (int a = 0; a < n; ++a) {
    int old = perm[static_cast<std::size_t>(a)];
    std::uint64_t row = permute_mask(up[static_cast<std::size_t>(old)]);
    for (int byte = 0; byte < 8; ++byte) out.push_back(static_cast<char>((row >> (8 * byte)) & 0xFF));
    out.push_back(static_cast<char>(inv[static_cast<std::size_t>(succ[static_cast<std::size_t>(old)])]));
  }
  for (std::uint64_t mask : val_masks) {
    std::uint64_t row = permute_mask(mask);
    for (int byte = 0; byte < 8; ++byte) out.push_back(static_cast<char>((row >> (8 * byte)) & 0xFF));
  }
}

inline std::string canonical_key(int n, const std::vector<std::uint64_t>& up, const std::vector<int>& succ,
                                 const std::vector<std::uint64_t>& val_masks) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<int> inv(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::string best, cur;
  do {
    for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
    encode_model(n, up, succ, val_masks, perm, inv, cur);
    if (best.empty() || cur < best) best = cur;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/* All upward-closed masks of the closed order. */
inline std::vector<std::uint64_t> upward_closed_sets(int n, const std::vector<std::uint64_t>& up) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    bool closed = true;
    std::uint64_t rest = s;
    while (rest && closed) {
      int w = std::countr_zero(rest);
      rest &= rest - 1;
      closed = (up[static_cast<std::size_t>(w)] & ~s) == 0;
    }
    if (closed) out.push_back(s);
  }
  return out;
}

struct EnumSink {
  const std::function<bool(const Model&)>& yield;
  std::uint64_t limit;
  EnumerationStats stats;
  bool stop = false;

  /* Returns false once enumeration should halt. */
  bool emit(Model&& m) {
    if (stats.visited >= limit) {
      stats.truncated = true;
      stop = true;
      return false;
    }
    ++stats.visited;
    if (!yield(m)) {
      stop = true;
      return false;
    }
    return true;
  }
};

inline void enumerate_generic(int n, const std::vector<std::string>& atoms, bool persistent_only, EnumSink& sink) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const int npairs = static_cast<int>(pairs.size());

  std::unordered_set<std::string> seen;
  std::vector<std::uint64_t> strict(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> up(static_cast<std::size_t>(n));
  std::vector<int> succ(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> val(atoms.size());
  std::vector<std::string> names;
  for (int w = 0; w < n; ++w) names.push_back("w" + std::to_string(w));

  for (std::uint64_t edges = 0; edges < (std::uint64_t{1} << npairs); ++edges) {
    if (sink.stop) return;
    std::fill(strict.begin(), strict.end(), 0);
    for (int e = 0; e < npairs; ++e)
      if ((edges >> e) & 1) strict[static_cast<std::size_t>(pairs[static_cast<std::size_t>(e)].first)] |=
          world_bit(pairs[static_cast<std::size_t>(e)].second);
    bool closed = true;
    for (int i = 0; i < n && closed; ++i) {
      std::uint64_t row = strict[static_cast<std::size_t>(i)];
      while (row && closed) {
        int j = std::countr_zero(row);
        row &= row - 1;
        closed = (strict[static_cast<std::size_t>(j)] & ~strict[static_cast<std::size_t>(i)]) == 0;
      }
    }
    if (!closed) continue;
    for (int i = 0; i < n; ++i) up[static_cast<std::size_t>(i)] = strict[static_cast<std::size_t>(i)] | world_bit(i);

    auto upsets = upward_closed_sets(n, up);

    /* odometer over successor functions, filtered by forward confluence */
    std::fill(succ.begin(), succ.end(), 0);
    for (;;) {
      if (sink.stop) return;
      bool confluent = true;
      for (int i = 0; i < n && confluent; ++i) {
        std::uint64_t row = strict[static_cast<std::size_t>(i)];
        while (row && confluent) {
          int j = std::countr_zero(row);
          row &= row - 1;
          confluent = (up[static_cast<std::size_t>(succ[static_cast<std::size_t>(i)])] >>
                       succ[static_cast<std::size_t>(j)]) & 1;
        }
      }
      if (confluent && persistent_only) {
        for (int w = 0; w < n && confluent; ++w) {
          std::uint64_t reachable = 0;
          std::uint64_t ups = up[static_cast<std::size_t>(w)];
          while (ups) {
            reachable |= world_bit(succ[static_cast<std::size_t>(std::countr_zero(ups))]);
            ups &= ups - 1;
          }
          confluent = (up[static_cast<std::size_t>(succ[static_cast<std::size_t>(w)])] & ~reachable) == 0;
        }
      }
      if (confluent) {
        /* odometer over valuations: one upward-closed set per atom */
        std::vector<std::size_t> which(atoms.size(), 0);
        for (;;) {
          if (sink.stop) return;
          for (std::size_t a = 0; a < atoms.size(); ++a) val[a] = upsets[which[a]];
          std::string key = canonical_key(n, up, succ, val);
          if (seen.insert(std::move(key)).second) {
            std::vector<std::pair<std::string, std::uint64_t>> valuation;
            for (std::size_t a = 0; a < atoms.size(); ++a) valuation.emplace_back(atoms[a], val[a]);
            if (!sink.emit(build_model_indexed(names, up, succ, valuation))) return;
          }
          std::size_t d = 0;
          while (d < atoms.size() && ++which[d] == upsets.size()) which[d++] = 0;
          if (d == atoms.size()) break;  // atoms.empty() yields exactly one valuation
        }
      }
      int d = 0;
      while (d < n && ++succ[static_cast<std::size_t>(d)] == n) succ[static_cast<std::size_t>(d++)] = 0;
      if (d == n) break;
    }
  }
}

/*
 * Here-and-there generator: chains 0..t-1 with worlds i_0 < i_1, a
 * chain map f, and per-chain valuation states 0 (false), 1 (upper
 * only), 2 (both). Canonicalisation permutes chains; chain structure
 * is rigid under model isomorphism, so this matches the generic
 * deduplication.
 */
inline void enumerate_here_and_there(int max_worlds, const std::vector<std::string>& atoms, EnumSink& sink) {
  for (int t = 1; 2 * t <= max_worlds; ++t) {
    if (sink.stop) return;
    std::unordered_set<std::string> seen;
    std::vector<int> f(static_cast<std::size_t>(t), 0);
    std::vector<int> states(static_cast<std::size_t>(t) * atoms.size(), 0);

    std::vector<std::string> names;
    std::vector<std::uint64_t> up(static_cast<std::size_t>(2 * t));
    std::vector<int> succ(static_cast<std::size_t>(2 * t));
    for (int i = 0; i < t; ++i) {
      names.push_back(std::to_string(i) + "_0");
      names.push_back(std::to_string(i) + "_1");
    }

    std::vector<int> perm(static_cast<std::size_t>(t)), inv(static_cast<std::size_t>(t));

    for (;;) {
      if (sink.stop) return;
      /* canonical key over chain relabelings */
      for (int i = 0; i < t; ++i) perm[static_cast<std::size_t>(i)] = i;
      std::string best, cur;
      do {
        for (int i = 0; i < t; ++i) inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
        cur.clear();
        for (int a = 0; a < t; ++a) {
          int old = perm[static_cast<std::size_t>(a)];
          cur.push_back(static_cast<char>(inv[static_cast<std::size_t>(f[static_cast<std::size_t>(old)])]));
          for (std::size_t at = 0; at < atoms.size(); ++at)
            cur.push_back(static_cast<char>(states[at * static_cast<std::size_t>(t) + static_cast<std::size_t>(old)]));
        }
        if (best.empty() || cur < best) best = cur;
      } while (std::next_permutation(perm.begin(), perm.end()));

      if (seen.insert(std::move(best)).second) {
        for (int i = 0; i < t; ++i) {
          int lo = 2 * i, hi = 2 * i + 1;
          up[static_cast<std::size_t>(lo)] = world_bit(lo) | world_bit(hi);
          up[static_cast<std::size_t>(hi)] = world_bit(hi);
          succ[static_cast<std::size_t>(lo)] = 2 * f[static_cast<std::size_t>(i)];
          succ[static_cast<std::size_t>(hi)] = 2 * f[static_cast<std::size_t>(i)] + 1;
        }
        std::vector<std::pair<std::string, std::uint64_t>> valuation;
        for (std::size_t at = 0; at < atoms.size(); ++at) {
          std::uint64_t mask = 0;
          for (int i = 0; i < t; ++i) {
            int s = states[at * static_cast<std::size_t>(t) + static_cast<std::size_t>(i)];
            if (s >= 1) mask |= world_bit(2 * i + 1);
            if (s == 2) mask |= world_bit(2 * i);
          }
          valuation.emplace_back(atoms[at], mask);
        }
        if (!sink.emit(build_model_indexed(names, up, succ, valuation))) return;
      }

      /* advance (f, states) odometer */
      std::size_t d = 0;
      for (; d < f.size(); ++d) {
        if (++f[d] < t) break;
        f[d] = 0;
      }
      if (d < f.size()) continue;
      for (d = 0; d < states.size(); ++d) {
        if (++states[d] < 3) break;
        states[d] = 0;
      }
      if (d == states.size()) break;
    }
  }
}

}  // namespace detail

/*
 * Stream every model of the class, one per isomorphism class, sizes
 * ascending. The consumer returns false to stop early.
 */
inline EnumerationStats enumerate_models(const SearchBounds& bounds,
                                         const std::function<bool(const Model&)>& yield) {
  if (bounds.max_worlds < 1) throw std::invalid_argument("enumerate_models: max_worlds must be >= 1");
  std::vector<std::string> atoms = bounds.atoms;
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  for (const auto& a : atoms)
    if (!detail::valid_atom_name(a)) throw std::invalid_argument("bad atom name '" + a + "'");

  detail::EnumSink sink{yield, bounds.limit.value_or(default_search_limit), {}, false};
  if (bounds.frame_class == FrameClass::HereAndThere) {
    detail::enumerate_here_and_there(bounds.max_worlds, atoms, sink);
  } else {
    for (int n = 1; n <= bounds.max_worlds && !sink.stop; ++n)
      detail::enumerate_generic(n, atoms, bounds.frame_class == FrameClass::Persistent, sink);
  }
  return sink.stats;
}

/*
 * Search the bounded class for a world falsifying f. "Exhausted" means
 * every enumerated model satisfies f everywhere.
 */
inline SearchResult find_countermodel(const Formula& f, const SearchBounds& bounds) {
  for (const auto& atom : atoms_of(f))
    if (std::find(bounds.atoms.begin(), bounds.atoms.end(), atom) == bounds.atoms.end())
      throw std::invalid_argument("formula atom '" + atom + "' is missing from the search bounds");

  SearchResult result;
  EnumerationStats stats = enumerate_models(bounds, [&](const Model& m) {
    Validity v = valid_in_model(m, f);
    if (v.valid) return true;
    result.verdict = SearchVerdict::Found;
    result.model = m;
    result.world = v.counter_world;
    return false;
  });
  result.visited = stats.visited;
  if (result.verdict != SearchVerdict::Found && stats.truncated) result.verdict = SearchVerdict::LimitReached;
  return result;
}

/* Search for a world where f and g disagree. */
inline SearchResult check_equivalence(const Formula& f, const Formula& g, const SearchBounds& bounds) {
  Formula both = Formula::conj(Formula::implies(f, g), Formula::implies(g, f));
  return find_countermodel(both, bounds);
}

}  // namespace itle
