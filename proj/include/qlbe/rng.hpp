// Copyright 2026 The qlbe-sim Authors
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

#ifndef QLBE_RNG_HPP
#define QLBE_RNG_HPP

#include <cstdint>
#include <random>

namespace qlbe {

/// splitmix64 finalizer (Steele/Lea/Flood). Used to derive decorrelated
/// per-trajectory seeds from (global seed, trajectory index) so that
/// trajectories are reproducible independently of scheduling order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of trajectory `index` under global seed `seed`:
/// splitmix64 applied to seed + (index+1)·golden-ratio increment.
inline std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

} // namespace qlbe

#endif
