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

#ifndef QLBE_PARALLEL_HPP
#define QLBE_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qlbe {

/// Worker count: min(QLBE_THREADS, hardware_concurrency), at least 1.
inline int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw == 0 ? 1 : static_cast<int>(hw);
    if (const char* env = std::getenv("QLBE_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

/// Static-partition parallel loop over [0, n). Each index is processed exactly
/// once; results must be written to per-index slots so the outcome does not
/// depend on scheduling.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&fn, w, workers, n] {
            for (int i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace qlbe

#endif
