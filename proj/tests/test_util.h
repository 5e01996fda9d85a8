// tests/test_util.h

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

#ifndef ANCHORALIGN_TESTS_TEST_UTIL_H_
#define ANCHORALIGN_TESTS_TEST_UTIL_H_

#include <stdlib.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "anchoralign/dtw.h"
#include "anchoralign/features.h"

namespace anchoralign {
namespace testing {

// Directory removed with everything in it when the object goes away.
class TempDir {
 public:
  TempDir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "anchoralign-XXXXXX").string();
    path_ = ::mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }
  std::string operator/(const std::string &name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline FeatureMatrix RandomFeatures(std::mt19937_64 &rng, std::size_t n,
                                    std::size_t dim, double hop_s = 0.01) {
  std::normal_distribution<float> g(0.0f, 1.0f);
  FeatureMatrix m(n, dim, hop_s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k) m.at(i, k) = g(rng);
  return m;
}

inline FeatureMatrix FromRows(const std::vector<std::vector<float>> &rows,
                              double hop_s = 0.01) {
  FeatureMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), hop_s);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) m.at(i, k) = rows[i][k];
  return m;
}

inline double Dist(const FeatureMatrix &a, std::size_t i, const FeatureMatrix &b,
                   std::size_t j) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.n_coeffs(); ++k) {
    double d = static_cast<double>(a.at(i, k)) - b.at(j, k);
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Enumerates every monotone path from (0,0) to (N-1,M-1) and returns the
// cheapest total. Exponential; only for tiny inputs.
inline double BruteForceDtwCost(const FeatureMatrix &a, const FeatureMatrix &b) {
  const std::size_t n = a.n_frames(), m = b.n_frames();
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk =
      [&](std::size_t i, std::size_t j, double acc) {
        acc += Dist(a, i, b, j);
        if (i == n - 1 && j == m - 1) {
          best = std::min(best, acc);
          return;
        }
        if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, acc);
        if (i + 1 < n) walk(i + 1, j, acc);
        if (j + 1 < m) walk(i, j + 1, acc);
      };
  walk(0, 0, 0.0);
  return best;
}

// Textbook DTW over the whole N x M matrix. Cells outside
// |i*M - j*N| <= r*N are unreachable. The backtrace compares the three
// predecessors with diagonal first, then (1,0), then (0,1).
inline WarpPath FullMatrixDtw(const FeatureMatrix &a, const FeatureMatrix &b,
                              std::size_t r) {
  const long long n = a.n_frames(), m = b.n_frames();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> D(n, std::vector<double>(m, inf));
  auto inside = [&](long long i, long long j) {
    return std::llabs(i * m - j * n) <= static_cast<long long>(r) * n;
  };
  auto at = [&](long long i, long long j) {
    return (i < 0 || j < 0) ? inf : D[i][j];
  };
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < m; ++j) {
      if (!inside(i, j)) continue;
      double d = Dist(a, i, b, j);
      if (i == 0 && j == 0) {
        D[i][j] = d;
        continue;
      }
      double best = at(i - 1, j - 1);
      if (at(i - 1, j) < best) best = at(i - 1, j);
      if (at(i, j - 1) < best) best = at(i, j - 1);
      D[i][j] = best + d;
    }
  WarpPath p;
  p.total_cost = D[n - 1][m - 1];
  long long i = n - 1, j = m - 1;
  while (true) {
    p.steps.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
    if (i == 0 && j == 0) break;
    double diag = at(i - 1, j - 1), up = at(i - 1, j), left = at(i, j - 1);
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(p.steps.begin(), p.steps.end());
  return p;
}

}  // namespace testing
}  // namespace anchoralign

#endif  // ANCHORALIGN_TESTS_TEST_UTIL_H_
