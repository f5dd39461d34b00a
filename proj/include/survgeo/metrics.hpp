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

#ifndef SURVGEO_METRICS_HPP
#define SURVGEO_METRICS_HPP

#include <cstdint>

#include "survgeo/raster.hpp"

namespace survgeo {

struct MetricReport {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rmse = 0.0;
  double rmse_log = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  std::int64_t n = 0;
};

/// Depth evaluation over ground-truth pixels inside [min_depth, max_depth].
/// With `median_scale`, the prediction is first multiplied by
/// median(gt)/median(pred) over those pixels, which makes the report
/// invariant to a global prediction scale. Predictions are clamped to the
/// range before metric computation. delta_t counts max(p/g, g/p) < 1.25^t.
/// Throws NoValidGroundTruth when no pixel qualifies.
MetricReport evaluate(const ScalarMap& pred, const ScalarMap& gt,
                      double min_depth, double max_depth, bool median_scale);

}  // namespace survgeo

#endif  // SURVGEO_METRICS_HPP
