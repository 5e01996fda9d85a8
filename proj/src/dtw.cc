// src/dtw.cc

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

#include "anchoralign/dtw.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>

#include "anchoralign/error.h"

namespace anchoralign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum Dir : std::uint8_t { kDiag = 0, kUp = 1, kLeft = 2, kStart = 3 };

long long FloorDiv(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long CeilDiv(long long a, long long b) { return -FloorDiv(-a, b); }

bool BandFeasible(std::size_t n, std::size_t m, std::size_t r, BandRows *rows) {
  const long long N = static_cast<long long>(n), M = static_cast<long long>(m);
  const long long R = static_cast<long long>(r);
  BandRows b;
  b.lo.resize(n);
  b.hi.resize(n);
  for (long long i = 0; i < N; ++i) {
    long long lo = std::max(0LL, CeilDiv(i * M - R * N, N));
    long long hi = std::min(M - 1, FloorDiv(i * M + R * N, N));
    if (lo > hi) return false;
    b.lo[i] = static_cast<std::size_t>(lo);
    b.hi[i] = static_cast<std::size_t>(hi);
    if (i > 0 && b.lo[i] > b.hi[i - 1] + 1) return false;
  }
  if (b.lo[0] != 0 || b.hi[n - 1] != m - 1) return false;
  if (rows) *rows = std::move(b);
  return true;
}

}  // namespace

DistanceMetric ParseDistanceMetric(const std::string &name) {
  if (name == "euclidean") return DistanceMetric::kEuclidean;
  if (name == "cosine") return DistanceMetric::kCosine;
  throw ConfigError("unknown distance metric '" + name + "'");
}

double FrameDistance(std::span<const float> a, std::span<const float> b,
                     DistanceMetric metric) {
  if (a.size() != b.size())
    throw DomainError("frame dimension mismatch: " + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()));
  if (metric == DistanceMetric::kEuclidean) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      double d = static_cast<double>(a[k]) - b[k];
      acc += d * d;
    }
    return std::sqrt(acc);
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += static_cast<double>(a[k]) * b[k];
    na += static_cast<double>(a[k]) * a[k];
    nb += static_cast<double>(b[k]) * b[k];
  }
  if (na == 0.0 && nb == 0.0) return 0.0;
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

std::size_t BandConfig::RadiusFrames(double hop_s) const {
  if (!(hop_s > 0.0)) throw ConfigError("hop must be positive");
  if (!(radius_s > 0.0)) throw ConfigError("band radius must be positive");
  double r = std::ceil(radius_s / hop_s - 1e-9);
  return r < 1.0 ? 1 : static_cast<std::size_t>(r);
}

std::size_t MinFeasibleRadius(std::size_t n, std::size_t m) {
  std::size_t lo = 1, hi = std::max(n, m);
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (BandFeasible(n, m, mid, nullptr))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

BandRows MakeBand(std::size_t n, std::size_t m, std::size_t radius_frames) {
  if (n == 0 || m == 0) throw DomainError("DTW needs at least one frame per side");
  BandRows rows;
  if (radius_frames == 0 || !BandFeasible(n, m, radius_frames, &rows))
    throw DomainError("DTW band of radius " + std::to_string(radius_frames) +
                      " frames admits no path for " + std::to_string(n) + "x" +
                      std::to_string(m) + " frames; increase the radius to at least " +
                      std::to_string(MinFeasibleRadius(n, m)) + " frames");
  return rows;
}

WarpPath Dtw(const FeatureMatrix &real, const FeatureMatrix &synth,
             std::size_t radius_frames, DistanceMetric metric) {
  const std::size_t n = real.n_frames(), m = synth.n_frames();
  if (real.n_coeffs() != synth.n_coeffs())
    throw DomainError("feature dimension mismatch");
  const BandRows band = MakeBand(n, m, radius_frames);

  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    offset[i + 1] = offset[i] + (band.hi[i] - band.lo[i] + 1);
  std::vector<std::uint8_t> dirs(offset[n]);

  std::vector<double> prev, cur;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = band.lo[i], hi = band.hi[i];
    cur.assign(hi - lo + 1, kInf);
    auto prev_at = [&](std::size_t j) {
      if (i == 0 || j < band.lo[i - 1] || j > band.hi[i - 1]) return kInf;
      return prev[j - band.lo[i - 1]];
    };
    for (std::size_t j = lo; j <= hi; ++j) {
      const double d = FrameDistance(real.row(i), synth.row(j), metric);
      std::uint8_t dir;
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
        dir = kStart;
      } else {
        best = j > 0 ? prev_at(j - 1) : kInf;
        dir = kDiag;
        double up = prev_at(j);
        if (up < best) {
          best = up;
          dir = kUp;
        }
        double left = j > lo ? cur[j - 1 - lo] : kInf;
        if (left < best) {
          best = left;
          dir = kLeft;
        }
      }
      cur[j - lo] = best + d;
      dirs[offset[i] + (j - lo)] = dir;
    }
    prev.swap(cur);
  }

  WarpPath path;
  path.total_cost = prev[m - 1 - band.lo[n - 1]];
  if (!std::isfinite(path.total_cost))
    throw DomainError("DTW produced a non-finite cost");
  std::size_t i = n - 1, j = m - 1;
  for (;;) {
    path.steps.push_back({i, j});
    std::uint8_t dir = dirs[offset[i] + (j - band.lo[i])];
    if (dir == kStart) break;
    if (dir == kDiag) {
      --i;
      --j;
    } else if (dir == kUp) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

WarpPath Dtw(const FeatureMatrix &real, const FeatureMatrix &synth,
             const BandConfig &band) {
  double hop = real.hop_s() > 0.0 ? real.hop_s() : synth.hop_s();
  return Dtw(real, synth, band.RadiusFrames(hop), band.metric);
}

void CheckWarpPath(const WarpPath &path, std::size_t n, std::size_t m) {
  const auto &s = path.steps;
  if (s.empty()) throw DomainError("empty warp path");
  if (s.front().i != 0 || s.front().j != 0)
    throw DomainError("warp path does not start at (0,0)");
  if (s.back().i != n - 1 || s.back().j != m - 1)
    throw DomainError("warp path does not end at (N-1,M-1)");
  for (std::size_t k = 1; k < s.size(); ++k) {
    std::size_t di = s[k].i - s[k - 1].i, dj = s[k].j - s[k - 1].j;
    bool ok = s[k].i >= s[k - 1].i && s[k].j >= s[k - 1].j && di <= 1 &&
              dj <= 1 && (di + dj) >= 1;
    if (!ok) throw DomainError("invalid warp step at " + std::to_string(k));
  }
  if (!(path.total_cost >= 0.0)) throw DomainError("negative warp cost");
}

std::size_t MapBoundaryFrame(const WarpPath &path, std::size_t boundary) {
  if (path.steps.empty()) return 0;
  std::size_t target = std::min(boundary, path.steps.back().j);
  auto it = std::find_if(path.steps.begin(), path.steps.end(),
                         [&](const WarpStep &s) { return s.j >= target; });
  return it->i;
}

std::vector<Anchor> MapAnchors(const WarpPath &path,
                               const std::vector<Anchor> &anchors, double hop_s,
                               double real_duration_s) {
  std::vector<Anchor> out;
  out.reserve(anchors.size());
  for (const Anchor &a : anchors) {
    const double b = std::llround(a.start_s / hop_s);
    const std::size_t frame =
        MapBoundaryFrame(path, b < 0 ? 0 : static_cast<std::size_t>(b));
    Anchor r;
    r.fragment_index = a.fragment_index;
    r.start_s = std::min(static_cast<double>(frame) * hop_s, real_duration_s);
    if (!out.empty() && r.start_s < out.back().start_s)
      r.start_s = out.back().start_s;
    out.push_back(r);
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k].end_s = k + 1 < out.size() ? out[k + 1].start_s : real_duration_s;
  return out;
}

void WritePath(const std::string &path, const WarpPath &warp) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (const WarpStep &s : warp.steps) out << s.i << '\t' << s.j << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", warp.total_cost);
  out << "# cost=" << buf << '\n';
}

}  // namespace anchoralign
