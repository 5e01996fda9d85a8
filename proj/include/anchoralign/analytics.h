// include/anchoralign/analytics.h

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

#ifndef ANCHORALIGN_ANALYTICS_H_
#define ANCHORALIGN_ANALYTICS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "anchoralign/segmenter.h"

namespace anchoralign {

inline constexpr std::size_t kEmbeddingDim = 256;

struct SegmentRef {
  std::string source_id;
  std::size_t index = 0;
  auto operator<=>(const SegmentRef &) const = default;
};

// Voice embedding computed outside this library, one per segment.
struct Embedding {
  SegmentRef ref;
  std::vector<float> vector;
};

/// Throws DomainError unless the vector has kEmbeddingDim finite entries and
/// a non-zero norm.
void ValidateEmbedding(std::span<const float> v);

/// Lines of `source_id<TAB>index<TAB>256 space-separated floats`.
std::vector<Embedding> LoadEmbeddings(const std::string &path);
std::vector<Embedding> ParseEmbeddings(std::istream &in);
/// Shortest round-trip float formatting, so save/load is bit-exact.
void SaveEmbeddings(const std::string &path, const std::vector<Embedding> &e);

double RbfKernel(std::span<const float> x, std::span<const float> y,
                 double gamma);

enum class Gender { kMale, kFemale };
const char *GenderName(Gender g);
Gender ParseGender(const std::string &s);
inline int GenderSign(Gender g) { return g == Gender::kMale ? +1 : -1; }

struct SvmParams {
  double gamma = 0.01;
  double C = 100.0;
  double tol = 1e-3;
  int max_passes = 10;          // sweeps without any alpha change
  std::size_t max_sweeps = 100000;
  std::uint64_t seed = 0;       // partner selection
};

/// RBF-kernel SVM. alphas are signed by label (alpha_i * y_i).
struct SvmModel {
  std::vector<std::vector<float>> support_vectors;
  std::vector<double> alphas;
  double bias = 0.0;
  double gamma = 0.01;
  double C = 100.0;

  double DecisionValue(std::span<const float> x) const;
  Gender Predict(std::span<const float> x) const {
    return DecisionValue(x) >= 0.0 ? Gender::kMale : Gender::kFemale;
  }
};

struct SvmTrace {
  std::vector<double> dual_objective;  // after every sweep
  std::size_t sweeps = 0;
};

/// Simplified SMO: for each multiplier violating KKT by more than tol, a
/// random partner is chosen and the pair is optimized analytically.
/// Stops after max_passes consecutive sweeps without change.
/// Throws DomainError if only one class is present or fewer than 2 points.
SvmModel TrainSvm(const std::vector<std::vector<float>> &x,
                  const std::vector<Gender> &y, const SvmParams &params = {},
                  SvmTrace *trace = nullptr);

/// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j) for unsigned
/// multipliers `alpha`.
double DualObjective(const std::vector<std::vector<float>> &x,
                     const std::vector<Gender> &y,
                     const std::vector<double> &alpha, double gamma);

/// Text format: `gamma <g>`, `C <c>`, `bias <b>`, `support_vectors <n>`,
/// then one line per vector: alpha followed by its floats.
void SaveSvmModel(const std::string &path, const SvmModel &m);
SvmModel LoadSvmModel(const std::string &path);

/// Hours of audio per predicted label: (male_hours, female_hours).
std::pair<double, double> GenderHours(std::span<const Segment> segments,
                                      std::span<const Gender> predictions);

struct SpeakerClusters {
  std::size_t count = 0;
  std::vector<std::size_t> assignment;  // cluster id per input embedding
};

/// Leader clustering in input order: each embedding joins the first cluster
/// whose normalized running-mean centroid has cosine similarity >= threshold,
/// otherwise it opens a new cluster.
SpeakerClusters EstimateSpeakers(const std::vector<Embedding> &embeddings,
                                 double cos_threshold = 0.75);

}  // namespace anchoralign

#endif  // ANCHORALIGN_ANALYTICS_H_
