// Copyright 2026 The diffrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace diffrl {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// 64-bit FNV-1a; used to derive stream identifiers from names.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Deterministic random stream addressed by (seed, stream, substream).
///
/// The output is a pure function of the address and the number of values
/// drawn so far, so any number of streams can be consumed concurrently and
/// in any order without changing their contents.
///
/// Counter layout: word 0 is the block index, word 1 the substream, words 2
/// and 3 the stream identifier. The key is the master seed.
class CounterRng {
 public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream,
             std::uint32_t substream) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1); never returns an endpoint.
  double uniform_open() noexcept;
  /// Unbiased integer in [0, n); n must be positive.
  std::uint32_t uniform_index(std::uint32_t n) noexcept;
  /// Standard normal by inverse-CDF transform of uniform_open().
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  std::size_t used_ = 4;
};

}  // namespace diffrl
