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
  \file model.hpp
  \brief Finite dynamic posets with monotone valuations.

  A model is (W, <=, S, V): a partial order on at most 64 worlds, a
  successor function with S(w) <= S(v) whenever w <= v (forward
  confluence), and an upward-closed valuation per atom. The order is
  stored as its full reflexive-transitive closure so every lookup is a
  bitmask test. World sets are std::uint64_t masks over world indices.
*/

#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace itle {

class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

constexpr int max_model_worlds = 64;

inline std::uint64_t world_bit(int w) { return std::uint64_t{1} << w; }

enum class FrameClass : std::uint8_t { Expanding, Persistent, HereAndThere };

inline const char* to_string(FrameClass c) {
  switch (c) {
    case FrameClass::Expanding: return "expanding";
    case FrameClass::Persistent: return "persistent";
    case FrameClass::HereAndThere: return "here-and-there";
  }
  return "?";
}

class Model {
public:
  int size() const { return static_cast<int>(names_.size()); }
  std::uint64_t all_worlds() const { return size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size()) - 1; }

  const std::string& world_name(int w) const { return names_[static_cast<std::size_t>(w)]; }
  const std::vector<std::string>& world_names() const { return names_; }

  std::optional<int> find_world(std::string_view name) const {
    for (int w = 0; w < size(); ++w)
      if (names_[static_cast<std::size_t>(w)] == name) return w;
    return std::nullopt;
  }

  int world_index(std::string_view name) const {
    if (auto w = find_world(name)) return *w;
    throw ModelError("unknown world '" + std::string(name) + "'");
  }

  bool leq(int w, int v) const { return (up_[static_cast<std::size_t>(w)] >> v) & 1; }
  std::uint64_t up_set(int w) const { return up_[static_cast<std::size_t>(w)]; }
  std::uint64_t down_set(int w) const { return down_[static_cast<std::size_t>(w)]; }
  int succ(int w) const { return succ_[static_cast<std::size_t>(w)]; }
  const std::vector<int>& succ_all() const { return succ_; }

  const std::vector<std::pair<std::string, std::uint64_t>>& valuation() const { return valuation_; }

  /* Atoms missing from the valuation are false everywhere. */
  std::uint64_t atom_set(std::string_view atom) const {
    for (const auto& [name, mask] : valuation_)
      if (name == atom) return mask;
    return 0;
  }

  bool atom_true(std::string_view atom, int w) const { return (atom_set(atom) >> w) & 1; }

  bool operator==(const Model& other) const = default;

  friend Model build_model_indexed(std::vector<std::string> names, std::vector<std::uint64_t> up,
                                   std::vector<int> succ,
                                   std::vector<std::pair<std::string, std::uint64_t>> valuation);

private:
  Model() = default;

  std::vector<std::string> names_;
  std::vector<std::uint64_t> up_;    // up_[w] = { v : w <= v }, closed, reflexive
  std::vector<std::uint64_t> down_;  // derived transpose
  std::vector<int> succ_;
  std::vector<std::pair<std::string, std::uint64_t>> valuation_;  // sorted by atom
};

namespace detail {

inline bool valid_world_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline bool valid_atom_name(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

/* Reflexive-transitive closure of generator rows, in place. */
inline void close_order(std::vector<std::uint64_t>& up) {
  const int n = static_cast<int>(up.size());
  for (int w = 0; w < n; ++w) up[static_cast<std::size_t>(w)] |= world_bit(w);
  for (int k = 0; k < n; ++k)
    for (int w = 0; w < n; ++w)
      if ((up[static_cast<std::size_t>(w)] >> k) & 1) up[static_cast<std::size_t>(w)] |= up[static_cast<std::size_t>(k)];
}

inline bool order_is_closed(const std::vector<std::uint64_t>& up) {
  const int n = static_cast<int>(up.size());
  for (int w = 0; w < n; ++w) {
    if (!((up[static_cast<std::size_t>(w)] >> w) & 1)) return false;
    for (int v = 0; v < n; ++v)
      if ((up[static_cast<std::size_t>(w)] >> v) & 1)
        if ((up[static_cast<std::size_t>(v)] & ~up[static_cast<std::size_t>(w)]) != 0) return false;
  }
  return true;
}

}  // namespace detail

/*
 * Index-based builder. `up` must be the closed order (reflexive bits may
 * be omitted; they are added). Validates every model invariant and
 * throws ModelError with a witness on the first violation.
 */
inline Model build_model_indexed(std::vector<std::string> names, std::vector<std::uint64_t> up,
                                 std::vector<int> succ,
                                 std::vector<std::pair<std::string, std::uint64_t>> valuation) {
  const int n = static_cast<int>(names.size());
  if (n == 0) throw ModelError("a model needs at least one world");
  if (n > max_model_worlds) throw ModelError("too many worlds (limit is 64)");
  if (static_cast<int>(up.size()) != n || static_cast<int>(succ.size()) != n)
    throw ModelError("order/succ size does not match world count");

  for (int w = 0; w < n; ++w) {
    if (!detail::valid_world_name(names[static_cast<std::size_t>(w)]))
      throw ModelError("bad world name '" + names[static_cast<std::size_t>(w)] + "'");
    for (int v = w + 1; v < n; ++v)
      if (names[static_cast<std::size_t>(w)] == names[static_cast<std::size_t>(v)])
        throw ModelError("duplicate world '" + names[static_cast<std::size_t>(w)] + "'");
  }

  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  for (int w = 0; w < n; ++w) {
    up[static_cast<std::size_t>(w)] |= world_bit(w);
    if (up[static_cast<std::size_t>(w)] & ~all) throw ModelError("order mentions a world index out of range");
    if (succ[static_cast<std::size_t>(w)] < 0 || succ[static_cast<std::size_t>(w)] >= n)
      throw ModelError("succ of '" + names[static_cast<std::size_t>(w)] + "' is out of range");
  }
  if (!detail::order_is_closed(up)) throw ModelError("order is not transitively closed");

  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      if (v != w && ((up[static_cast<std::size_t>(w)] >> v) & 1) && ((up[static_cast<std::size_t>(v)] >> w) & 1))
        throw ModelError("order is not antisymmetric: " + names[static_cast<std::size_t>(w)] + " <= " +
                         names[static_cast<std::size_t>(v)] + " <= " + names[static_cast<std::size_t>(w)]);

  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      if (((up[static_cast<std::size_t>(w)] >> v) & 1) &&
          !((up[static_cast<std::size_t>(succ[static_cast<std::size_t>(w)])] >> succ[static_cast<std::size_t>(v)]) & 1))
        throw ModelError("forward confluence fails: " + names[static_cast<std::size_t>(w)] + " <= " +
                         names[static_cast<std::size_t>(v)] + " but succ(" + names[static_cast<std::size_t>(w)] +
                         ") = " + names[static_cast<std::size_t>(succ[static_cast<std::size_t>(w)])] +
                         " is not <= succ(" + names[static_cast<std::size_t>(v)] + ") = " +
                         names[static_cast<std::size_t>(succ[static_cast<std::size_t>(v)])]);

  std::sort(valuation.begin(), valuation.end());
  for (std::size_t i = 0; i + 1 < valuation.size(); ++i)
    if (valuation[i].first == valuation[i + 1].first)
      throw ModelError("duplicate valuation entry for atom '" + valuation[i].first + "'");
  for (const auto& [atom, mask] : valuation) {
    if (!detail::valid_atom_name(atom)) throw ModelError("bad atom name '" + atom + "'");
    if (mask & ~all) throw ModelError("valuation of '" + atom + "' mentions a world index out of range");
    for (int w = 0; w < n; ++w)
      if ((mask >> w) & 1)
        for (int v = 0; v < n; ++v)
          if (((up[static_cast<std::size_t>(w)] >> v) & 1) && !((mask >> v) & 1))
            throw ModelError("valuation of '" + atom + "' is not monotone: true at " +
                             names[static_cast<std::size_t>(w)] + " but false at " + names[static_cast<std::size_t>(v)]);
  }

  Model m;
  m.names_ = std::move(names);
  m.up_ = std::move(up);
  m.succ_ = std::move(succ);
  m.valuation_ = std::move(valuation);
  m.down_.assign(static_cast<std::size_t>(n), 0);
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      if ((m.up_[static_cast<std::size_t>(w)] >> v) & 1) m.down_[static_cast<std::size_t>(v)] |= world_bit(w);
  return m;
}

/* Name-based builder: closes the generators, then validates. */
inline Model build_model(const std::vector<std::string>& worlds,
                         const std::vector<std::pair<std::string, std::string>>& order_generators,
                         const std::vector<std::pair<std::string, std::string>>& succ,
                         const std::vector<std::pair<std::string, std::vector<std::string>>>& valuation) {
  const int n = static_cast<int>(worlds.size());
  if (n == 0) throw ModelError("a model needs at least one world");
  if (n > max_model_worlds) throw ModelError("too many worlds (limit is 64)");

  auto index_of = [&](const std::string& name) -> int {
    for (int w = 0; w < n; ++w)
      if (worlds[static_cast<std::size_t>(w)] == name) return w;
    throw ModelError("unknown world '" + name + "'");
  };

  std::vector<std::uint64_t> up(static_cast<std::size_t>(n), 0);
  for (const auto& [a, b] : order_generators) up[static_cast<std::size_t>(index_of(a))] |= world_bit(index_of(b));
  detail::close_order(up);

  std::vector<int> succ_idx(static_cast<std::size_t>(n), -1);
  for (const auto& [a, b] : succ) {
    int w = index_of(a);
    if (succ_idx[static_cast<std::size_t>(w)] != -1) throw ModelError("world '" + a + "' has two successors");
    succ_idx[static_cast<std::size_t>(w)] = index_of(b);
  }
  for (int w = 0; w < n; ++w)
    if (succ_idx[static_cast<std::size_t>(w)] == -1)
      throw ModelError("world '" + worlds[static_cast<std::size_t>(w)] + "' has no successor");

  std::vector<std::pair<std::string, std::uint64_t>> val;
  val.reserve(valuation.size());
  for (const auto& [atom, list] : valuation) {
    std::uint64_t mask = 0;
    for (const auto& name : list) mask |= world_bit(index_of(name));
    val.emplace_back(atom, mask);
  }

  return build_model_indexed(worlds, std::move(up), std::move(succ_idx), std::move(val));
}

/* --- frame classification ------------------------------------------- */

struct BackwardConfluenceReport {
  bool holds = true;
  int w = -1;  // witness on failure: v >= succ(w) with no u >= w, succ(u) = v
  int v = -1;
};

inline BackwardConfluenceReport check_backward_confluence(const Model& m) {
  for (int w = 0; w < m.size(); ++w) {
    std::uint64_t above = m.up_set(m.succ(w));
    std::uint64_t reachable = 0;
    std::uint64_t ups = m.up_set(w);
    for (int u = 0; u < m.size(); ++u)
      if ((ups >> u) & 1) reachable |= world_bit(m.succ(u));
    if (std::uint64_t bad = above & ~reachable) {
      BackwardConfluenceReport r;
      r.holds = false;
      r.w = w;
      r.v = std::countr_zero(bad);
      return r;
    }
  }
  return {};
}

inline bool is_backward_confluent(const Model& m) { return check_backward_confluence(m).holds; }

struct HereAndThereReport {
  bool holds = false;
  std::string reason;
  std::vector<std::pair<int, int>> chains;  // (lower, upper) per two-chain
};

/*
 * True iff the order splits into disjoint two-chains lower < upper and
 * S maps each chain to a single chain, lower to lower and upper to
 * upper. Returns the chain decomposition on success.
 */
inline HereAndThereReport check_here_and_there(const Model& m) {
  HereAndThereReport r;
  const int n = m.size();
  if (n % 2 != 0) {
    r.reason = "odd number of worlds";
    return r;
  }
  std::vector<int> chain_of(static_cast<std::size_t>(n), -1);
  std::vector<int> role(static_cast<std::size_t>(n), -1);  // 0 lower, 1 upper
  for (int w = 0; w < n; ++w) {
    std::uint64_t strict_up = m.up_set(w) & ~world_bit(w);
    std::uint64_t strict_down = m.down_set(w) & ~world_bit(w);
    if (strict_down == 0) {
      if (std::popcount(strict_up) != 1) {
        r.reason = "world " + m.world_name(w) + " is not the bottom of a two-chain";
        return r;
      }
      int top = std::countr_zero(strict_up);
      if ((m.up_set(top) & ~world_bit(top)) != 0 || m.down_set(top) != (world_bit(w) | world_bit(top))) {
        r.reason = "worlds " + m.world_name(w) + ", " + m.world_name(top) + " do not form a two-chain";
        return r;
      }
      chain_of[static_cast<std::size_t>(w)] = chain_of[static_cast<std::size_t>(top)] = static_cast<int>(r.chains.size());
      role[static_cast<std::size_t>(w)] = 0;
      role[static_cast<std::size_t>(top)] = 1;
      r.chains.emplace_back(w, top);
    }
  }
  for (int w = 0; w < n; ++w)
    if (chain_of[static_cast<std::size_t>(w)] == -1) {
      r.reason = "world " + m.world_name(w) + " is not part of a two-chain";
      r.chains.clear();
      return r;
    }
  for (const auto& [lo, hi] : r.chains) {
    int slo = m.succ(lo), shi = m.succ(hi);
    if (role[static_cast<std::size_t>(slo)] != 0 || role[static_cast<std::size_t>(shi)] != 1 ||
        chain_of[static_cast<std::size_t>(slo)] != chain_of[static_cast<std::size_t>(shi)]) {
      r.reason = "succ does not act chain-wise on (" + m.world_name(lo) + ", " + m.world_name(hi) + ")";
      r.chains.clear();
      return r;
    }
  }
  r.holds = true;
  return r;
}

inline bool is_here_and_there(const Model& m) { return check_here_and_there(m).holds; }

/* Finest class the model belongs to. */
inline FrameClass frame_class_of(const Model& m) {
  if (is_here_and_there(m)) return FrameClass::HereAndThere;
  if (is_backward_confluent(m)) return FrameClass::Persistent;
  return FrameClass::Expanding;
}

inline bool in_frame_class(const Model& m, FrameClass c) {
  switch (c) {
    case FrameClass::Expanding: return true;
    case FrameClass::Persistent: return is_backward_confluent(m);
    case FrameClass::HereAndThere: return is_here_and_there(m);
  }
  return false;
}

/* --- text format ------------------------------------------------------
 *
 *   worlds: w v u
 *   order: v <= u
 *   succ: w -> v ; v -> v ; u -> u
 *   val: p @ u
 *
 * Line-oriented; '#' starts a comment. `order:` lines list generator
 * pairs (closure implied, `;`-separated); `val:` one line per atom with
 * a possibly-empty world list after '@'.
 */

inline std::string serialize_model(const Model& m) {
  std::ostringstream out;
  out << "worlds:";
  for (int w = 0; w < m.size(); ++w) out << ' ' << m.world_name(w);
  out << "\norder:";
  bool first = true;
  for (int w = 0; w < m.size(); ++w)
    for (int v = 0; v < m.size(); ++v) {
      if (w == v || !m.leq(w, v)) continue;
      bool covered = false;  // emit the transitive reduction only
      for (int x = 0; x < m.size() && !covered; ++x)
        if (x != w && x != v && m.leq(w, x) && m.leq(x, v)) covered = true;
      if (covered) continue;
      out << (first ? " " : " ; ") << m.world_name(w) << " <= " << m.world_name(v);
      first = false;
    }
  out << "\nsucc:";
  for (int w = 0; w < m.size(); ++w)
    out << (w == 0 ? " " : " ; ") << m.world_name(w) << " -> " << m.world_name(m.succ(w));
  out << '\n';
  for (const auto& [atom, mask] : m.valuation()) {
    out << "val: " << atom << " @";
    for (int w = 0; w < m.size(); ++w)
      if ((mask >> w) & 1) out << ' ' << m.world_name(w);
    out << '\n';
  }
  return out.str();
}

namespace detail {

inline std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline Model parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  std::vector<std::string> worlds;
  std::vector<std::pair<std::string, std::string>> order, succ;
  std::vector<std::pair<std::string, std::vector<std::string>>> valuation;
  bool have_worlds = false;

  auto fail = [&](const std::string& msg) -> void {
    throw ModelError("line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto words = detail::split_words(line);
    if (words.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) fail("expected 'key: ...'");
    std::string key = words.front();
    if (!key.empty() && key.back() == ':') key.pop_back();
    std::string rest = line.substr(colon + 1);

    if (key == "worlds") {
      if (have_worlds) fail("duplicate worlds line");
      worlds = detail::split_words(rest);
      if (worlds.empty()) fail("empty worlds line");
      have_worlds = true;
    } else if (key == "order") {
      for (const auto& part : detail::split_on(rest, ';')) {
        auto w = detail::split_words(part);
        if (w.empty()) continue;
        if (w.size() != 3 || w[1] != "<=") fail("expected 'a <= b' in order line");
        order.emplace_back(w[0], w[2]);
      }
    } else if (key == "succ") {
      for (const auto& part : detail::split_on(rest, ';')) {
        auto w = detail::split_words(part);
        if (w.empty()) continue;
        if (w.size() != 3 || w[1] != "->") fail("expected 'a -> b' in succ line");
        succ.emplace_back(w[0], w[2]);
      }
    } else if (key == "val") {
      auto w = detail::split_words(rest);
      if (w.size() < 2 || w[1] != "@") fail("expected 'val: atom @ worlds...'");
      valuation.emplace_back(w[0], std::vector<std::string>(w.begin() + 2, w.end()));
    } else {
      fail("unknown key '" + key + "'");
    }
    if (!have_worlds) fail("worlds line must come first");
  }

  if (!have_worlds) throw ModelError("missing worlds line");
  return build_model(worlds, order, succ, valuation);
}

}  // namespace itle
