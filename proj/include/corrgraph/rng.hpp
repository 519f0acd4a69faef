// Copyright 2026 The corrgraph Authors.
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

// Counter-based random numbers.
//
// Philox4x32-10 (Salmon et al., SC'11) maps a 128-bit counter and a 64-bit
// key to 128 random bits. A RandomStream fixes the key from a seed and the
// upper 96 counter bits from a (stream, substream) pair, so any draw can be
// regenerated from its coordinates without touching other draws. This is
// what makes parallel work bit-identical for every thread count.
//
// Seed derivation used throughout the library:
//   replicate seed  = derive_seed(master, {cell, replicate})
//   draw b of a purpose P under that seed = RandomStream(seed, P, b)
// where P is one of the StreamPurpose tags below.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace corrgraph {

/// One Philox4x32-10 block.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to spread user seeds over the key space.
std::uint64_t mix64(std::uint64_t x);

/// Hash of a seed and a path of integer coordinates.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

enum class StreamPurpose : std::uint64_t {
  Adjacency = 1,
  GaussianSample = 2,
  ParametricDraws = 3,
  BootstrapResample = 4,
  Generic = 5,
};

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream = 0);
  RandomStream(std::uint64_t seed, StreamPurpose purpose, std::uint32_t substream = 0)
      : RandomStream(seed, static_cast<std::uint64_t>(purpose), substream) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift
  /// with rejection, so exactly unbiased.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Standard normal via Box-Muller; draws come in pairs.
  double normal();

  void fill_normal(std::span<double> out);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;  // 32-bit words consumed from block_
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace corrgraph
