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

#ifndef WSHAP_COALITION_HPP
#define WSHAP_COALITION_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace wshap {

// Hard cap for exhaustive 2^n enumeration.
inline constexpr int kMaxEnumerationPlayers = 25;
// Coalitions are stored in a single 64-bit mask.
inline constexpr int kMaxCoalitionPlayers = 64;

/// A subset of the n players of a cooperative game, stored as a bit mask.
/// Player indices are 0-based; bit i set means player i is a member.
class Coalition {
 public:
  Coalition(std::uint64_t bits, int n) : bits_(bits), n_(n) {
    if (n < 0 || n > kMaxCoalitionPlayers) {
      throw std::invalid_argument("Coalition: player count " + std::to_string(n) +
                                  " outside [0," + std::to_string(kMaxCoalitionPlayers) + "]");
    }
    if (n < kMaxCoalitionPlayers && (bits >> n) != 0) {
      throw std::invalid_argument("Coalition: mask has bits beyond player count");
    }
  }

  static Coalition empty(int n) { return Coalition(0, n); }
  static Coalition full(int n) {
    return Coalition(n == kMaxCoalitionPlayers ? ~0ULL : ((1ULL << n) - 1), n);
  }
  static Coalition of(std::initializer_list<int> members, int n) {
    std::uint64_t bits = 0;
    for (int i : members) {
      if (i < 0 || i >= n) throw std::invalid_argument("Coalition: member out of range");
      bits |= (1ULL << i);
    }
    return Coalition(bits, n);
  }

  int players() const { return n_; }
  int size() const { return std::popcount(bits_); }
  bool empty_set() const { return bits_ == 0; }
  bool contains(int i) const { return (bits_ >> i) & 1ULL; }
  std::uint64_t bits() const { return bits_; }

  Coalition with(int i) const { return Coalition(bits_ | (1ULL << i), n_); }
  Coalition without(int i) const { return Coalition(bits_ & ~(1ULL << i), n_); }

  bool operator==(const Coalition& o) const { return bits_ == o.bits_ && n_ == o.n_; }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(std::countr_zero(b));
    }
    return out;
  }

  // 0/1 indicator vector of length n.
  std::vector<double> indicator() const {
    std::vector<double> s(static_cast<std::size_t>(n_), 0.0);
    for (int i : members()) s[static_cast<std::size_t>(i)] = 1.0;
    return s;
  }

 private:
  std::uint64_t bits_;
  int n_;
};

// Guard for full 2^n sweeps; throws for n > kMaxEnumerationPlayers.
inline std::uint64_t enumeration_count(int n) {
  if (n < 0 || n > kMaxEnumerationPlayers) {
    throw std::invalid_argument("exhaustive enumeration limited to n <= " +
                                std::to_string(kMaxEnumerationPlayers) + ", got n = " +
                                std::to_string(n));
  }
  return 1ULL << n;
}

}  // namespace wshap

#endif  // WSHAP_COALITION_HPP
