// include/anchoralign/audio_io.h

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

#ifndef ANCHORALIGN_AUDIO_IO_H_
#define ANCHORALIGN_AUDIO_IO_H_

#include <cstddef>
#include <string>
#include <vector>

namespace anchoralign {

/// Rate every pipeline stage works at.
inline constexpr int kPipelineRate = 16000;

/// Mono PCM audio. Samples are nominally in [-1, 1] and always finite.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  /// Throws DomainError on a non-positive rate or a non-finite sample.
  AudioBuffer(std::vector<float> samples, int sample_rate);

  const std::vector<float> &samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration() const {
    return sample_rate_ > 0 ? static_cast<double>(samples_.size()) / sample_rate_
                            : 0.0;
  }

  /// Appends `other`, which must share this buffer's rate (an empty buffer
  /// adopts it).
  void Append(const AudioBuffer &other);

 private:
  std::vector<float> samples_;
  int sample_rate_ = kPipelineRate;
};

/// Parses RIFF/WAVE: PCM 16-bit or IEEE float 32-bit, 1 or 2 channels.
/// Stereo is averaged to mono; 16-bit is scaled by 1/32768.
AudioBuffer ReadWav(const std::string &path);
AudioBuffer ParseWav(const std::vector<unsigned char> &bytes);

/// Writes 16-bit PCM mono; samples are clipped to [-1, 1) and rounded.
/// The file is written to a temporary name and renamed into place.
void WriteWav(const std::string &path, const AudioBuffer &buf);
std::vector<unsigned char> EncodeWav16(const AudioBuffer &buf);
/// 32-bit float mono, mostly for tests of the float reader.
std::vector<unsigned char> EncodeWavFloat(const AudioBuffer &buf);

/// Linear-interpolation resampling. Output length is
/// round(len * target / source); equal rates return the input unchanged.
AudioBuffer Resample(const AudioBuffer &buf, int target_rate);

/// Samples [floor(start_s * sr), floor(end_s * sr)).
/// Requires 0 <= start_s < end_s <= duration, else BoundsError.
AudioBuffer Slice(const AudioBuffer &buf, double start_s, double end_s);

}  // namespace anchoralign

#endif  // ANCHORALIGN_AUDIO_IO_H_
