/*
 * Copyright 2026 The wshap authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WSHAP_GAME_HPP
#define WSHAP_GAME_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "wshap/coalition.hpp"

namespace wshap {

/// A deterministic value function v: coalitions -> real with a memo table.
/// lookup_count() counts value() calls; eval_count() counts invocations of
/// the underlying function (cache hits never re-invoke it). Copies share
/// the memo table and counters. Nothing is synchronized: use a game from
/// one thread at a time, or construct independent games per thread.
class Game {
 public:
  Game(int n, std::string name, std::function<double(const Coalition&)> fn);

  int players() const { return n_; }
  const std::string& name() const { return name_; }

  double value(const Coalition& s) const;
  double value_mask(std::uint64_t bits) const { return value(Coalition(bits, n_)); }

  std::uint64_t eval_count() const { return state_->evals; }
  std::uint64_t lookup_count() const { return state_->lookups; }
  void reset_counters() const { state_->evals = state_->lookups = 0; }

 private:
  struct State {
    std::unordered_map<std::uint64_t, double> cache;
    std::uint64_t evals = 0;
    std::uint64_t lookups = 0;
  };

  int n_;
  std::string name_;
  std::function<double(const Coalition&)> fn_;
  std::shared_ptr<State> state_;  // shared so Game copies share the memo
};

// Oracle fixtures.
Game additive_game(int n);                                        // v(s) = |s|
Game unanimity_game(int n, Coalition target);                     // v(s) = [target subset of s]
Game majority_game(int n, std::vector<double> weights, double quota);
Game random_game(int n, std::uint64_t seed);                      // iid U[0,1) per subset
Game constant_game(int n, double c);
Game scaled_game(const Game& base, double factor);                // factor * v(s)

/// Parses "additive" | "unanimity:i,j,..." (1-based players) |
/// "majority:w1,w2,...;quota" | "random:seed" | "constant:c".
Game make_synthetic_game(const std::string& kind, int n);

}  // namespace wshap

#endif  // WSHAP_GAME_HPP
