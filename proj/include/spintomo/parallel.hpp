// Copyright 2026 The spintomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINTOMO_PARALLEL_HPP_
#define SPINTOMO_PARALLEL_HPP_

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

// Deterministic parallelism.
//
// ParallelFor runs body(i) for i = 0..count-1 on up to ThreadBudget()
// threads.  Each index owns its own output slot (a vector element, a matrix
// row), and any randomness comes from a per-index substream, so the combined
// result is identical whether the loop runs on one thread or sixteen.
// Reductions that need an order (an argmin, say) collect per-index values
// first and fold them serially by index.

namespace spintomo {

// Worker-thread cap: the SPINTOMO_THREADS environment variable when it
// parses to a positive integer, otherwise the hardware concurrency.
inline int ThreadBudget() {
  if (const char* env = std::getenv("SPINTOMO_THREADS")) {
    try {
      const int parsed = std::stoi(env);
      if (parsed >= 1) return parsed;
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  const unsigned hardware = std::thread::hardware_concurrency();
  return hardware >= 1 ? static_cast<int>(hardware) : 1;
}

// Calls body(i) for every i in [0, count).  The body must confine its writes
// to per-index slots; under that contract the result does not depend on the
// thread count.  The first exception a body throws is rethrown on the
// calling thread after all workers finish.
template <typename Body>
void ParallelFor(int count, Body&& body) {
  if (count <= 0) return;
  const int workers = std::min(count, ThreadBudget());
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<int> next(0);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (std::thread& worker : pool) worker.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace spintomo

#endif  // SPINTOMO_PARALLEL_HPP_
