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
  \file checker.hpp
  \brief Satisfaction over finite models via orbit analysis.

  The trajectory of a world under iterated succ is eventually periodic;
  temporal quantifiers range over one prefix+cycle traversal, which is
  complete on finite models: F/G see every reachable world, the least U
  witness occurs before the orbit repeats, and an R counterexample
  occurs within the first traversal. Evaluation is bottom-up per
  subformula, so each connective is a few bitmask operations.
*/

#pragma once

#include <bit>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "itle/formula.hpp"
#include "itle/model.hpp"

namespace itle {

struct Orbit {
  std::vector<int> prefix;
  std::vector<int> cycle;

  int size() const { return static_cast<int>(prefix.size() + cycle.size()); }

  /* World at step k of the trajectory, for any k >= 0. */
  int at(std::uint64_t k) const {
    if (k < prefix.size()) return prefix[static_cast<std::size_t>(k)];
    return cycle[static_cast<std::size_t>((k - prefix.size()) % cycle.size())];
  }
};

inline Orbit orbit(const Model& m, int w) {
  std::vector<int> seen_at(static_cast<std::size_t>(m.size()), -1);
  std::vector<int> seq;
  int x = w;
  while (seen_at[static_cast<std::size_t>(x)] == -1) {
    seen_at[static_cast<std::size_t>(x)] = static_cast<int>(seq.size());
    seq.push_back(x);
    x = m.succ(x);
  }
  int entry = seen_at[static_cast<std::size_t>(x)];
  Orbit o;
  o.prefix.assign(seq.begin(), seq.begin() + entry);
  o.cycle.assign(seq.begin() + entry, seq.end());
  return o;
}

/*
 * Extension computer for one model. Memoises per subformula node, so a
 * fresh Evaluator per call keeps the free functions pure while repeated
 * queries against one model can share a single instance.
 */
class Evaluator {
public:
  explicit Evaluator(const Model& m) : m_(m) {
    orbits_.reserve(static_cast<std::size_t>(m.size()));
    reach_.reserve(static_cast<std::size_t>(m.size()));
    for (int w = 0; w < m.size(); ++w) {
      orbits_.push_back(orbit(m, w));
      std::uint64_t r = 0;
      for (int x : orbits_.back().prefix) r |= world_bit(x);
      for (int x : orbits_.back().cycle) r |= world_bit(x);
      reach_.push_back(r);
    }
  }

  const Model& model() const { return m_; }
  const Orbit& orbit_of(int w) const { return orbits_[static_cast<std::size_t>(w)]; }

  std::uint64_t extension(const Formula& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
    std::uint64_t result = compute(f);
    memo_.emplace(f.id(), result);
    return result;
  }

  bool satisfies(int w, const Formula& f) { return (extension(f) >> w) & 1; }

private:
  std::uint64_t compute(const Formula& f) {
    using K = Formula::Kind;
    const int n = m_.size();
    switch (f.kind()) {
      case K::Atom:
        return m_.atom_set(f.atom_name());
      case K::Bottom:
        return 0;
      case K::And:
        return extension(f.left()) & extension(f.right());
      case K::Or:
        return extension(f.left()) | extension(f.right());
      case K::Implies: {
        std::uint64_t bad = extension(f.left()) & ~extension(f.right());
        std::uint64_t out = 0;
        for (int w = 0; w < n; ++w)
          if ((m_.up_set(w) & bad) == 0) out |= world_bit(w);
        return out;
      }
      case K::Next: {
        std::uint64_t sub = extension(f.child());
        std::uint64_t out = 0;
        for (int w = 0; w < n; ++w)
          if ((sub >> m_.succ(w)) & 1) out |= world_bit(w);
        return out;
      }
      case K::Eventually: {
        std::uint64_t sub = extension(f.child());
        std::uint64_t out = 0;
        for (int w = 0; w < n; ++w)
          if (reach_[static_cast<std::size_t>(w)] & sub) out |= world_bit(w);
        return out;
      }
      case K::Henceforth: {
        std::uint64_t sub = extension(f.child());
        std::uint64_t out = 0;
        for (int w = 0; w < n; ++w)
          if ((reach_[static_cast<std::size_t>(w)] & ~sub) == 0) out |= world_bit(w);
        return out;
      }
      case K::Until: {
        std::uint64_t lhs = extension(f.left());
        std::uint64_t rhs = extension(f.right());
        std::uint64_t out = 0;
        for (int w = 0; w < n; ++w) {
          const Orbit& o = orbits_[static_cast<std::size_t>(w)];
          bool all_lhs = true;
          for (int k = 0; k < o.size(); ++k) {
            int x = o.at(static_cast<std::uint64_t>(k));
            if ((rhs >> x) & 1) {
              if (all_lhs) out |= world_bit(w);
              break;
            }
            if (!((lhs >> x) & 1)) {
              all_lhs = false;
              break;
            }
          }
        }
        return out;
      }
      case K::Release: {
        std::uint64_t lhs = extension(f.left());
        std::uint64_t rhs = extension(f.right());
        std::uint64_t out = 0;
        for (int w = 0; w < n; ++w) {
          const Orbit& o = orbits_[static_cast<std::size_t>(w)];
          bool released = false;
          bool ok = true;
          for (int k = 0; k < o.size() && !released; ++k) {
            int x = o.at(static_cast<std::uint64_t>(k));
            if (!((rhs >> x) & 1)) {
              ok = false;
              break;
            }
            released = (lhs >> x) & 1;
          }
          if (ok) out |= world_bit(w);
        }
        return out;
      }
    }
    throw std::logic_error("extension: bad kind");
  }

  const Model& m_;
  std::vector<Orbit> orbits_;
  std::vector<std::uint64_t> reach_;
  std::unordered_map<const void*, std::uint64_t> memo_;
};

inline std::uint64_t extension(const Model& m, const Formula& f) { return Evaluator(m).extension(f); }

inline bool satisfies(const Model& m, int w, const Formula& f) {
  if (w < 0 || w >= m.size()) throw ModelError("world index out of range");
  return (extension(m, f) >> w) & 1;
}

inline bool satisfies(const Model& m, std::string_view world, const Formula& f) {
  return satisfies(m, m.world_index(world), f);
}

struct Validity {
  bool valid = true;
  int counter_world = -1;
};

inline Validity valid_in_model(const Model& m, const Formula& f) {
  std::uint64_t ext = extension(m, f);
  std::uint64_t missing = m.all_worlds() & ~ext;
  if (missing == 0) return {};
  return {false, std::countr_zero(missing)};
}

struct MonotonicityReport {
  bool monotone = true;
  int low = -1;   // witness on failure: low <= high,
  int high = -1;  // formula true at low, false at high
};

/* Executable form of the upward-closure lemma for extensions. */
inline MonotonicityReport check_monotone_extension(const Model& m, const Formula& f) {
  std::uint64_t ext = extension(m, f);
  for (int w = 0; w < m.size(); ++w) {
    if (!((ext >> w) & 1)) continue;
    if (std::uint64_t bad = m.up_set(w) & ~ext) return {false, w, std::countr_zero(bad)};
  }
  return {};
}

inline std::vector<int> worlds_of_mask(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    int w = std::countr_zero(mask);
    out.push_back(w);
    mask &= mask - 1;
  }
  return out;
}

}  // namespace itle
