// src/features.cc

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

#include "anchoralign/features.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "anchoralign/error.h"

namespace anchoralign {

std::size_t FeatureConfig::WindowSamples(int sample_rate) const {
  return static_cast<std::size_t>(std::llround(window_s * sample_rate));
}

std::size_t FeatureConfig::HopSamples(int sample_rate) const {
  return static_cast<std::size_t>(std::llround(hop_s * sample_rate));
}

void FeatureConfig::Validate(int sample_rate) const {
  if (sample_rate <= 0) throw ConfigError("sample rate must be positive");
  if (!(window_s > 0.0) || !(hop_s > 0.0))
    throw ConfigError("window_s and hop_s must be positive");
  if (HopSamples(sample_rate) == 0 || WindowSamples(sample_rate) == 0)
    throw ConfigError("window or hop shorter than one sample");
  if (fft_size == 0 || (fft_size & (fft_size - 1)) != 0)
    throw ConfigError("fft_size must be a power of two");
  if (fft_size < WindowSamples(sample_rate))
    throw ConfigError("fft_size " + std::to_string(fft_size) +
                      " smaller than window of " +
                      std::to_string(WindowSamples(sample_rate)) + " samples");
  if (n_coeffs == 0 || n_coeffs > n_mels)
    throw ConfigError("need 0 < n_coeffs <= n_mels");
  if (!(preemphasis >= 0.0 && preemphasis < 1.0))
    throw ConfigError("preemphasis must lie in [0, 1)");
  double fmax = mel_fmax > 0.0 ? mel_fmax : sample_rate / 2.0;
  if (!(mel_fmin >= 0.0 && mel_fmin < fmax && fmax <= sample_rate / 2.0))
    throw ConfigError("need 0 <= mel_fmin < mel_fmax <= sample_rate/2");
  if (!(log_floor > 0.0)) throw ConfigError("log_floor must be positive");
}

FeatureMatrix::FeatureMatrix(std::size_t n_frames, std::size_t n_coeffs,
                             double hop_s)
    : n_frames_(n_frames),
      n_coeffs_(n_coeffs),
      hop_s_(hop_s),
      data_(n_frames * n_coeffs, 0.0f) {}

double HzToMel(double hz) {
  if (!(hz >= 0.0)) throw DomainError("negative frequency");
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double MelToHz(double mel) {
  if (!(mel >= 0.0)) throw DomainError("negative mel value");
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::size_t NumFrames(std::size_t len, std::size_t window, std::size_t hop) {
  if (len < window || hop == 0) return 0;
  return 1 + (len - window) / hop;
}

std::vector<std::vector<double>> MelFilterbank(std::size_t n_mels,
                                               std::size_t fft_size,
                                               int sample_rate, double fmin,
                                               double fmax) {
  const std::size_t n_bins = fft_size / 2 + 1;
  const double mel_lo = HzToMel(fmin), mel_hi = HzToMel(fmax);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t m = 0; m < edges.size(); ++m)
    edges[m] = MelToHz(mel_lo + (mel_hi - mel_lo) * m / (n_mels + 1));

  std::vector<std::vector<double>> bank(n_mels, std::vector<double>(n_bins, 0.0));
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double left = edges[m], centre = edges[m + 1], right = edges[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / fft_size;
      if (f > left && f <= centre)
        bank[m][k] = (f - left) / (centre - left);
      else if (f > centre && f < right)
        bank[m][k] = (right - f) / (right - centre);
    }
  }
  return bank;
}

std::vector<std::vector<double>> DctMatrix(std::size_t n) {
  std::vector<std::vector<double>> g(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::size_t i = 0; i < n; ++i)
      g[k][i] = scale * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
  }
  return g;
}

void Fft(std::vector<std::complex<double>> &x) {
  const std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw DomainError("FFT size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = x[i + k];
        std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

FeatureMatrix Mfcc(const AudioBuffer &buf, const FeatureConfig &cfg) {
  const int sr = buf.sample_rate();
  cfg.Validate(sr);
  const std::size_t window = cfg.WindowSamples(sr);
  const std::size_t hop = cfg.HopSamples(sr);
  const auto &x = buf.samples();
  if (x.size() < window)
    throw DomainError("audio of " + std::to_string(x.size()) +
                      " samples is shorter than one window (" +
                      std::to_string(window) + ")");
  for (float v : x)
    if (std::isnan(v)) throw DomainError("NaN in audio input");

  const std::size_t n_frames = NumFrames(x.size(), window, hop);
  const std::size_t n_bins = cfg.fft_size / 2 + 1;
  const double fmax = cfg.mel_fmax > 0.0 ? cfg.mel_fmax : sr / 2.0;
  const auto bank = MelFilterbank(cfg.n_mels, cfg.fft_size, sr, cfg.mel_fmin, fmax);
  const auto dct = DctMatrix(cfg.n_mels);

  std::vector<double> hamming(window);
  for (std::size_t n = 0; n < window; ++n)
    hamming[n] = window > 1
                     ? 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (window - 1))
                     : 1.0;

  FeatureMatrix out(n_frames, cfg.n_coeffs, cfg.hop_s);
  std::vector<double> frame(window);
  std::vector<std::complex<double>> spectrum(cfg.fft_size);
  std::vector<double> power(n_bins), logmel(cfg.n_mels);

  for (std::size_t f = 0; f < n_frames; ++f) {
    const float *src = x.data() + f * hop;
    double energy = 0.0;
    for (std::size_t n = 0; n < window; ++n) {
      frame[n] = src[n];
      energy += frame[n] * frame[n];
    }
    for (std::size_t n = window - 1; n > 0; --n)
      frame[n] -= cfg.preemphasis * frame[n - 1];
    frame[0] -= cfg.preemphasis * frame[0];

    std::fill(spectrum.begin(), spectrum.end(), std::complex<double>(0.0, 0.0));
    for (std::size_t n = 0; n < window; ++n) spectrum[n] = frame[n] * hamming[n];
    Fft(spectrum);
    for (std::size_t k = 0; k < n_bins; ++k) power[k] = std::norm(spectrum[k]);

    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < n_bins; ++k) e += bank[m][k] * power[k];
      logmel[m] = std::log(std::max(e, cfg.log_floor));
    }
    auto row = out.row(f);
    for (std::size_t c = 0; c < cfg.n_coeffs; ++c) {
      double acc = 0.0;
      for (std::size_t m = 0; m < cfg.n_mels; ++m) acc += dct[c][m] * logmel[m];
      row[c] = static_cast<float>(acc);
    }
    row[0] = static_cast<float>(std::log(std::max(energy, cfg.log_floor)));
  }

  if (cfg.cmn && n_frames > 0) {
    for (std::size_t c = 0; c < cfg.n_coeffs; ++c) {
      double mean = 0.0;
      for (std::size_t f = 0; f < n_frames; ++f) mean += out.at(f, c);
      mean /= static_cast<double>(n_frames);
      for (std::size_t f = 0; f < n_frames; ++f)
        out.at(f, c) = static_cast<float>(out.at(f, c) - mean);
    }
  }
  return out;
}

void WriteFeatures(const std::string &path, const FeatureMatrix &m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  std::uint64_t rows = m.n_frames(), cols = m.n_coeffs();
  double hop = m.hop_s();
  out.write(reinterpret_cast<const char *>(&rows), 8);
  out.write(reinterpret_cast<const char *>(&cols), 8);
  out.write(reinterpret_cast<const char *>(&hop), 8);
  out.write(reinterpret_cast<const char *>(m.data().data()),
            static_cast<std::streamsize>(m.data().size() * sizeof(float)));
  if (!out) throw IoError("write failed for '" + path + "'");
}

FeatureMatrix ReadFeatures(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::uint64_t rows = 0, cols = 0;
  double hop = 0.0;
  in.read(reinterpret_cast<char *>(&rows), 8);
  in.read(reinterpret_cast<char *>(&cols), 8);
  in.read(reinterpret_cast<char *>(&hop), 8);
  if (!in) throw FormatError("truncated feature header", 0);
  FeatureMatrix m(rows, cols, hop);
  for (std::size_t i = 0; i < rows; ++i) {
    auto r = m.row(i);
    in.read(reinterpret_cast<char *>(r.data()),
            static_cast<std::streamsize>(cols * sizeof(float)));
    if (!in) throw FormatError("truncated feature data", 24 + i * cols * 4);
  }
  return m;
}

}  // namespace anchoralign
