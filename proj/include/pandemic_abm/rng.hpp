// Copyright 2026 The Pandemic ABM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PANDEMIC_ABM_RNG_HPP_
#define PANDEMIC_ABM_RNG_HPP_

#include <array>
#include <concepts>
#include <cstdint>
#include <limits>
#include <type_traits>

namespace pabm {

template <typename T>
concept StreamId = std::integral<T> || std::is_enum_v<T>;

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3").
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based random stream.
///
/// A stream is identified by a 64-bit key. Child streams are derived with
/// `split(ids...)`, so any tuple such as (run, step, purpose, agent) names an
/// independent stream and the draws seen by one unit of work never depend on
/// how other units were scheduled. Sequential draws satisfy
/// UniformRandomBitGenerator; `uniform_at(i)` gives random access into a
/// separate counter space of the same key.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed) : key_(splitmix64(seed)) {}

  template <StreamId... Ts>
  RngStream split(Ts... ids) const {
    RngStream child = *this;
    ((child.key_ = derive(child.key_, static_cast<std::uint64_t>(ids))), ...);
    child.counter_ = 0;
    child.has_spare_ = false;
    return child;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return to_unit((*this)()); }

  /// Uniform double in [0, 1) at position `index`; does not advance.
  double uniform_at(std::uint64_t index) const;

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t key() const { return key_; }

  static double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t derive(std::uint64_t key, std::uint64_t id) {
    return splitmix64(key ^ splitmix64(id + 0x632be59bd9b4e019ULL));
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::uint64_t spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace pabm

#endif  // PANDEMIC_ABM_RNG_HPP_
