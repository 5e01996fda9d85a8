// include/anchoralign/features.h

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

#ifndef ANCHORALIGN_FEATURES_H_
#define ANCHORALIGN_FEATURES_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "anchoralign/audio_io.h"

namespace anchoralign {

struct FeatureConfig {
  double window_s = 0.025;
  double hop_s = 0.010;
  std::size_t fft_size = 512;
  std::size_t n_mels = 26;
  std::size_t n_coeffs = 13;
  double preemphasis = 0.97;
  double mel_fmin = 0.0;
  double mel_fmax = 0.0;  // <= 0 means sample_rate / 2
  double log_floor = 1e-10;
  bool cmn = false;  // subtract the per-utterance mean of every coefficient

  std::size_t WindowSamples(int sample_rate) const;
  std::size_t HopSamples(int sample_rate) const;
  /// Throws ConfigError when the invariants do not hold at `sample_rate`.
  void Validate(int sample_rate) const;
};

/// Row-major frames x coefficients.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t n_frames, std::size_t n_coeffs, double hop_s);

  std::size_t n_frames() const { return n_frames_; }
  std::size_t n_coeffs() const { return n_coeffs_; }
  double hop_s() const { return hop_s_; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * n_coeffs_, n_coeffs_};
  }
  std::span<float> row(std::size_t i) {
    return {data_.data() + i * n_coeffs_, n_coeffs_};
  }
  float &at(std::size_t i, std::size_t j) { return data_[i * n_coeffs_ + j]; }
  float at(std::size_t i, std::size_t j) const {
    return data_[i * n_coeffs_ + j];
  }
  const std::vector<float> &data() const { return data_; }

 private:
  std::size_t n_frames_ = 0;
  std::size_t n_coeffs_ = 0;
  double hop_s_ = 0.0;
  std::vector<float> data_;
};

double HzToMel(double hz);   // 2595 log10(1 + hz/700); DomainError if hz < 0
double MelToHz(double mel);  // exact inverse; DomainError if mel < 0

/// 1 + floor((len - window) / hop) when len >= window, else 0.
std::size_t NumFrames(std::size_t len, std::size_t window, std::size_t hop);

/// n_mels x (fft_size/2 + 1) triangular filters with centres equally spaced
/// on the mel scale between fmin and fmax.
std::vector<std::vector<double>> MelFilterbank(std::size_t n_mels,
                                               std::size_t fft_size,
                                               int sample_rate, double fmin,
                                               double fmax);

/// Orthonormal DCT-II basis, n x n, row k is the k-th basis vector.
std::vector<std::vector<double>> DctMatrix(std::size_t n);

/// In-place iterative radix-2 FFT; size must be a power of two.
void Fft(std::vector<std::complex<double>> &x);

/// MFCCs: per frame pre-emphasis, Hamming window, power spectrum, mel
/// filterbank, log with floor, orthonormal DCT-II; c0 holds log frame energy.
/// Throws DomainError for input shorter than one window or containing NaN.
FeatureMatrix Mfcc(const AudioBuffer &buf, const FeatureConfig &cfg);

/// Binary dump: uint64 n_frames, uint64 n_coeffs, float64 hop_s, then
/// row-major float32, all little-endian.
void WriteFeatures(const std::string &path, const FeatureMatrix &m);
FeatureMatrix ReadFeatures(const std::string &path);

}  // namespace anchoralign

#endif  // ANCHORALIGN_FEATURES_H_
