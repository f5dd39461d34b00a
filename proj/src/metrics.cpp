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

#include "survgeo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace survgeo {

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

MetricReport evaluate(const ScalarMap& pred, const ScalarMap& gt,
                      double min_depth, double max_depth, bool median_scale) {
  if (pred.height != gt.height || pred.width != gt.width) {
    throw Error(Errc::DimensionMismatch, "pred and gt dimensions differ");
  }
  if (!(0.0 < min_depth) || !(min_depth < max_depth)) {
    throw Error(Errc::InvalidArgument, "need 0 < min_depth < max_depth");
  }
  std::vector<double> p_vals;
  std::vector<double> g_vals;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!gt.mask[i] || !pred.mask[i]) continue;
    const double g = static_cast<double>(gt.data[i]);
    if (!(g >= min_depth) || !(g <= max_depth)) continue;
    p_vals.push_back(static_cast<double>(pred.data[i]));
    g_vals.push_back(g);
  }
  if (p_vals.empty()) {
    throw Error(Errc::NoValidGroundTruth,
                "no ground-truth pixel inside the depth range");
  }
  if (median_scale) {
    const double mp = median(p_vals);
    if (!(mp > 0.0)) {
      throw Error(Errc::NonPositiveDepth,
                  "median scaling needs positive predicted depths");
    }
    const double ratio = median(g_vals) / mp;
    for (double& p : p_vals) p *= ratio;
  }

  MetricReport report;
  report.n = static_cast<std::int64_t>(p_vals.size());
  double abs_rel = 0.0, sq_rel = 0.0, se = 0.0, se_log = 0.0;
  std::int64_t d1 = 0, d2 = 0, d3 = 0;
  for (std::size_t i = 0; i < p_vals.size(); ++i) {
    const double g = g_vals[i];
    const double p = std::clamp(p_vals[i], min_depth, max_depth);
    const double diff = p - g;
    abs_rel += std::abs(diff) / g;
    sq_rel += diff * diff / g;
    se += diff * diff;
    const double dl = std::log(p) - std::log(g);
    se_log += dl * dl;
    const double ratio = std::max(p / g, g / p);
    if (ratio < 1.25) ++d1;
    if (ratio < 1.25 * 1.25) ++d2;
    if (ratio < 1.25 * 1.25 * 1.25) ++d3;
  }
  const double n = static_cast<double>(report.n);
  report.abs_rel = abs_rel / n;
  report.sq_rel = sq_rel / n;
  report.rmse = std::sqrt(se / n);
  report.rmse_log = std::sqrt(se_log / n);
  report.delta1 = d1 / n;
  report.delta2 = d2 / n;
  report.delta3 = d3 / n;
  return report;
}

}  // namespace survgeo
