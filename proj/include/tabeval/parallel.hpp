// Copyright 2026 The tabeval Authors.
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

// Index-parallel loops with a serial reference path.
//
// Every data-parallel kernel in the library takes an Execution argument. The
// serial path is the reference the tests compare against; the parallel path
// must produce bit-identical results, which holds as long as each index writes
// only its own output slot and aggregation happens afterwards in index order.

#ifndef TABEVAL_PARALLEL_HPP_
#define TABEVAL_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

namespace tabeval {

enum class Execution { kSerial, kParallel };

// Calls fn(i) for every i in [0, n). Under kParallel the calls are spread
// over OpenMP threads. If any call throws, the exception from the lowest
// failing index is rethrown after the loop, so error reporting does not
// depend on thread scheduling.
template <typename Fn>
void for_each_index(std::size_t n, Execution execution, Fn&& fn) {
  if (execution == Execution::kSerial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (static_cast<std::size_t>(i) < failed_index) {
        failed_index = static_cast<std::size_t>(i);
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tabeval

#endif  // TABEVAL_PARALLEL_HPP_
