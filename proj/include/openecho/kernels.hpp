// Copyright 2026 The openecho Authors
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

// Data-parallel building blocks. Every kernel has an OpenMP version and a
// plain serial twin with identical results; the serial one is the reference
// used by the tests and the benchmark baseline.
//
// Results are written to per-index slots and reduced in index order, so the
// output does not depend on the thread count.

#pragma once

#include <cstddef>
#include <exception>
#include <type_traits>
#include <utility>
#include <vector>

#include <omp.h>

namespace openecho {

enum class Exec { kSerial, kParallel };

namespace kernels {

template <class F>
using map_result_t = std::decay_t<std::invoke_result_t<F&, std::size_t>>;

template <class F>
std::vector<map_result_t<F>> map_serial(std::size_t n, F&& f) {
  std::vector<map_result_t<F>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

template <class F>
std::vector<map_result_t<F>> map_parallel(std::size_t n, F&& f) {
  std::vector<map_result_t<F>> out(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

template <class F>
std::vector<map_result_t<F>> map(Exec exec, std::size_t n, F&& f) {
  if (exec == Exec::kSerial) return map_serial(n, std::forward<F>(f));
  return map_parallel(n, std::forward<F>(f));
}

/// Ordered sum of f(0..n-1); deterministic regardless of threads.
template <class T, class F>
T sum(Exec exec, std::size_t n, T zero, F&& f) {
  auto terms = map(exec, n, std::forward<F>(f));
  T acc = zero;
  for (auto& t : terms) acc += t;
  return acc;
}

inline int max_threads() { return omp_get_max_threads(); }
inline void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace kernels
}  // namespace openecho
