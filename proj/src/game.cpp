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

#include "wshap/game.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "wshap/rng.hpp"

namespace wshap {

Game::Game(int n, std::string name, std::function<double(const Coalition&)> fn)
    : n_(n), name_(std::move(name)), fn_(std::move(fn)), state_(std::make_shared<State>()) {
  if (n < 1 || n > kMaxCoalitionPlayers) {
    throw std::invalid_argument("Game: player count must be in [1,64]");
  }
}

double Game::value(const Coalition& s) const {
  if (s.players() != n_) throw std::invalid_argument("Game::value: coalition size mismatch");
  ++state_->lookups;
  auto it = state_->cache.find(s.bits());
  if (it != state_->cache.end()) return it->second;
  ++state_->evals;
  const double v = fn_(s);
  if (!std::isfinite(v)) {
    throw std::runtime_error("Game '" + name_ + "': non-finite value for coalition mask " +
                             std::to_string(s.bits()));
  }
  state_->cache.emplace(s.bits(), v);
  return v;
}

Game additive_game(int n) {
  return Game(n, "additive", [](const Coalition& s) { return static_cast<double>(s.size()); });
}

Game unanimity_game(int n, Coalition target) {
  if (target.players() != n || target.empty_set()) {
    throw std::invalid_argument("unanimity_game: target must be a nonempty coalition over n");
  }
  const std::uint64_t t = target.bits();
  return Game(n, "unanimity",
              [t](const Coalition& s) { return ((s.bits() & t) == t) ? 1.0 : 0.0; });
}

Game majority_game(int n, std::vector<double> weights, double quota) {
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("majority_game: need one weight per player");
  }
  return Game(n, "majority", [w = std::move(weights), quota](const Coalition& s) {
    double total = 0.0;
    for (int i : s.members()) total += w[static_cast<std::size_t>(i)];
    return total >= quota ? 1.0 : 0.0;
  });
}

Game random_game(int n, std::uint64_t seed) {
  return Game(n, "random", [seed](const Coalition& s) {
    return u64_to_unit_double(splitmix64(splitmix64(seed) ^ s.bits()));
  });
}

Game constant_game(int n, double c) {
  return Game(n, "constant", [c](const Coalition&) { return c; });
}

Game scaled_game(const Game& base, double factor) {
  return Game(base.players(), base.name() + "_scaled",
              [base, factor](const Coalition& s) { return factor * base.value(s); });
}

namespace {

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

Game make_synthetic_game(const std::string& kind, int n) {
  const auto colon = kind.find(':');
  const std::string head = kind.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : kind.substr(colon + 1);
  if (head == "additive") return additive_game(n);
  if (head == "constant") return constant_game(n, args.empty() ? 0.0 : std::stod(args));
  if (head == "random") {
    if (args.empty()) throw std::invalid_argument("random game needs a seed: random:<seed>");
    return random_game(n, std::stoull(args));
  }
  if (head == "unanimity") {
    std::uint64_t bits = 0;
    for (double p : parse_reals(args)) {
      const int i = static_cast<int>(p) - 1;  // players are 1-based on the CLI
      if (i < 0 || i >= n) throw std::invalid_argument("unanimity: player id out of range");
      bits |= 1ULL << i;
    }
    if (bits == 0) throw std::invalid_argument("unanimity: target set must be nonempty");
    return unanimity_game(n, Coalition(bits, n));
  }
  if (head == "majority") {
    const auto semi = args.find(';');
    if (semi == std::string::npos) {
      throw std::invalid_argument("majority game: expected majority:w1,...,wn;quota");
    }
    auto weights = parse_reals(args.substr(0, semi));
    const double quota = std::stod(args.substr(semi + 1));
    return majority_game(n, std::move(weights), quota);
  }
  throw std::invalid_argument("unknown game kind: " + kind);
}

}  // namespace wshap
