// include/anchoralign/dtw.h

// Copyright 2026 The anchoralign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ANCHORALIGN_DTW_H_
#define ANCHORALIGN_DTW_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "anchoralign/features.h"
#include "anchoralign/synth.h"

namespace anchoralign {

enum class DistanceMetric { kEuclidean, kCosine };

DistanceMetric ParseDistanceMetric(const std::string &name);

/// L2 distance, or 1 - cos(a, b). Two zero vectors are at cosine distance 0;
/// one zero vector is at distance 1. Throws DomainError on size mismatch.
double FrameDistance(std::span<const float> a, std::span<const float> b,
                     DistanceMetric metric = DistanceMetric::kEuclidean);

struct WarpStep {
  std::size_t i = 0;  // real frame
  std::size_t j = 0;  // synthetic frame
  bool operator==(const WarpStep &) const = default;
};

struct WarpPath {
  std::vector<WarpStep> steps;
  double total_cost = 0.0;
};

/// Sakoe-Chiba band that follows the global slope: cell (i, j) is admitted
/// when |i * M / N - j| <= radius frames.
struct BandConfig {
  double radius_s = 60.0;
  DistanceMetric metric = DistanceMetric::kEuclidean;

  std::size_t RadiusFrames(double hop_s) const;
};

/// Admitted synthetic-frame interval [lo, hi] for every real frame.
struct BandRows {
  std::vector<std::size_t> lo, hi;
};

/// Computes the band rows. Throws DomainError when no monotone path from
/// (0, 0) to (N-1, M-1) fits inside; the message names the smallest radius
/// that would work.
BandRows MakeBand(std::size_t n, std::size_t m, std::size_t radius_frames);

/// Smallest radius (in frames) for which MakeBand succeeds.
std::size_t MinFeasibleRadius(std::size_t n, std::size_t m);

/// Minimum-cost monotone alignment of `real` (rows i) to `synth` (rows j)
/// with steps (1,0), (0,1), (1,1). Cost is the sum of frame distances over
/// the path cells. Ties in the backtrace prefer the diagonal, then (1,0),
/// then (0,1). Memory is two cost rows plus one direction byte per band cell.
WarpPath Dtw(const FeatureMatrix &real, const FeatureMatrix &synth,
             std::size_t radius_frames,
             DistanceMetric metric = DistanceMetric::kEuclidean);

WarpPath Dtw(const FeatureMatrix &real, const FeatureMatrix &synth,
             const BandConfig &band);

/// Throws DomainError unless the path starts at (0,0), ends at (n-1,m-1) and
/// only takes unit steps.
void CheckWarpPath(const WarpPath &path, std::size_t n, std::size_t m);

/// Real-time segment boundaries for every anchor. Start of fragment k is
/// the first real frame whose path entry reaches synthetic frame
/// round(start_s / hop_s); end of k is start of k+1, and the last end is
/// `real_duration_s`.
std::vector<Anchor> MapAnchors(const WarpPath &path,
                               const std::vector<Anchor> &anchors, double hop_s,
                               double real_duration_s);

/// First real frame i with some (i, j) on the path and j >= boundary.
std::size_t MapBoundaryFrame(const WarpPath &path, std::size_t boundary);

/// Debug dump: `i<TAB>j` rows then `# cost=<value>`.
void WritePath(const std::string &path, const WarpPath &warp);

}  // namespace anchoralign

#endif  // ANCHORALIGN_DTW_H_
