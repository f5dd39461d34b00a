// Copyright 2026 The survgeo Authors.
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

#ifndef SURVGEO_PARALLEL_HPP
#define SURVGEO_PARALLEL_HPP

#include <functional>

namespace survgeo {

/// Worker count: min(hardware_concurrency, SURVGEO_THREADS). Cached after
/// the first call.
int thread_count();

/// Runs fn(row) for row in [0, rows). Rows are distributed over contiguous
/// chunks; fn must only write row-disjoint state so results are independent
/// of the thread count. Reductions must not use this directly — accumulate
/// per row and combine sequentially instead.
void parallel_rows(int rows, const std::function<void(int)>& fn);

}  // namespace survgeo

#endif  // SURVGEO_PARALLEL_HPP
