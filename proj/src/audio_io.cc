// src/audio_io.cc

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

#include "anchoralign/audio_io.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "anchoralign/error.h"

namespace anchoralign {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t U16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t U32(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void Put16(std::vector<unsigned char> &out, std::uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back(v >> 8);
}

void Put32(std::vector<unsigned char> &out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back((v >> (8 * k)) & 0xFF);
}

void PutTag(std::vector<unsigned char> &out, const char *tag) {
  out.insert(out.end(), tag, tag + 4);
}

std::vector<unsigned char> Header(std::uint16_t format, std::uint16_t bits,
                                  int rate, std::uint32_t data_bytes) {
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  Put32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  Put32(out, 16);
  Put16(out, format);
  Put16(out, 1);
  Put32(out, static_cast<std::uint32_t>(rate));
  Put32(out, static_cast<std::uint32_t>(rate) * (bits / 8));
  Put16(out, bits / 8);
  Put16(out, bits);
  PutTag(out, "data");
  Put32(out, data_bytes);
  return out;
}

}  // namespace

AudioBuffer::AudioBuffer(std::vector<float> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0)
    throw DomainError("sample rate must be positive, got " +
                      std::to_string(sample_rate_));
  for (std::size_t i = 0; i < samples_.size(); ++i)
    if (!std::isfinite(samples_[i]))
      throw DomainError("non-finite sample at index " + std::to_string(i));
}

void AudioBuffer::Append(const AudioBuffer &other) {
  if (samples_.empty()) {
    sample_rate_ = other.sample_rate_;
  } else if (!other.samples_.empty() && other.sample_rate_ != sample_rate_) {
    throw DomainError("cannot append audio at " +
                      std::to_string(other.sample_rate_) + " Hz to " +
                      std::to_string(sample_rate_) + " Hz");
  }
  samples_.insert(samples_.end(), other.samples_.begin(), other.samples_.end());
}

AudioBuffer ParseWav(const std::vector<unsigned char> &bytes) {
  const std::size_t n = bytes.size();
  const unsigned char *b = bytes.data();
  if (n < 12) throw FormatError("file too short for a RIFF header", n);
  if (std::memcmp(b, "RIFF", 4) != 0) throw FormatError("missing RIFF tag", 0);
  if (std::memcmp(b + 8, "WAVE", 4) != 0) throw FormatError("missing WAVE tag", 8);

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const unsigned char *chunk = b + pos;
    std::uint32_t size = U32(chunk + 4);
    std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > n)
        throw FormatError("truncated fmt chunk", body);
      format = U16(b + body);
      channels = U16(b + body + 2);
      rate = U32(b + body + 4);
      bits = U16(b + body + 14);
      if (format == kFormatExtensible) {
        if (size < 40 || body + 40 > n)
          throw FormatError("truncated extensible fmt chunk", body);
        // First two bytes of the subformat GUID carry the format tag.
        format = U16(b + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw FormatError("data chunk before fmt chunk", pos);
      if (channels < 1 || channels > 2)
        throw FormatError("unsupported channel count " +
                              std::to_string(channels),
                          pos);
      if (rate == 0) throw FormatError("zero sample rate", pos);
      std::size_t width;
      if (format == kFormatPcm && bits == 16) {
        width = 2;
      } else if (format == kFormatFloat && bits == 32) {
        width = 4;
      } else {
        throw FormatError("unsupported codec (format " +
                              std::to_string(format) + ", " +
                              std::to_string(bits) + " bits)",
                          pos);
      }
      // Some writers leave the size field at its streaming placeholder.
      std::size_t avail = n - body;
      std::size_t data_bytes = size;
      if (size == 0xFFFFFFFFu || size == 0) data_bytes = avail;
      if (data_bytes > avail)
        throw FormatError("truncated data chunk: header says " +
                              std::to_string(size) + " bytes, " +
                              std::to_string(avail) + " present",
                          n);
      std::size_t frame = width * channels;
      std::size_t frames = data_bytes / frame;
      std::vector<float> samples(frames);
      for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (std::size_t c = 0; c < channels; ++c) {
          const unsigned char *p = b + body + f * frame + c * width;
          if (width == 2) {
            acc += static_cast<std::int16_t>(U16(p)) / 32768.0;
          } else {
            std::uint32_t raw = U32(p);
            float v;
            std::memcpy(&v, &raw, 4);
            if (!std::isfinite(v))
              throw FormatError("non-finite float sample",
                                body + f * frame + c * width);
            acc += v;
          }
        }
        samples[f] = static_cast<float>(acc / channels);
      }
      return AudioBuffer(std::move(samples), static_cast<int>(rate));
    }
    std::size_t next = body + size + (size & 1);
    if (next <= pos) break;
    pos = next;
  }
  throw FormatError(have_fmt ? "no data chunk" : "no fmt chunk", pos);
}

AudioBuffer ReadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return ParseWav(bytes);
  } catch (const FormatError &e) {
    throw FormatError(path + ": " + std::string(e.what()).substr(
                                        0, std::string(e.what()).rfind(" (offset")),
                      e.offset());
  }
}

std::vector<unsigned char> EncodeWav16(const AudioBuffer &buf) {
  const auto &s = buf.samples();
  std::vector<unsigned char> out =
      Header(kFormatPcm, 16, buf.sample_rate(),
             static_cast<std::uint32_t>(s.size() * 2));
  for (float x : s) {
    double v = std::round(static_cast<double>(x) * 32768.0);
    if (v > 32767.0) v = 32767.0;
    if (v < -32768.0) v = -32768.0;
    Put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
  }
  return out;
}

std::vector<unsigned char> EncodeWavFloat(const AudioBuffer &buf) {
  const auto &s = buf.samples();
  std::vector<unsigned char> out =
      Header(kFormatFloat, 32, buf.sample_rate(),
             static_cast<std::uint32_t>(s.size() * 4));
  for (float x : s) {
    std::uint32_t raw;
    std::memcpy(&raw, &x, 4);
    Put32(out, raw);
  }
  return out;
}

void WriteWav(const std::string &path, const AudioBuffer &buf) {
  std::vector<unsigned char> bytes = EncodeWav16(buf);
  std::string tmp = path + ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp + "'");
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp + "': " + ec.message());
}

AudioBuffer Resample(const AudioBuffer &buf, int target_rate) {
  if (target_rate <= 0)
    throw DomainError("target rate must be positive, got " +
                      std::to_string(target_rate));
  if (target_rate == buf.sample_rate()) return buf;
  const auto &in = buf.samples();
  const std::size_t n = in.size();
  const double ratio = static_cast<double>(buf.sample_rate()) / target_rate;
  std::size_t m = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * target_rate / buf.sample_rate()));
  std::vector<float> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    double t = k * ratio;
    std::size_t i = static_cast<std::size_t>(t);
    if (i + 1 >= n) {
      out[k] = n ? in[n - 1] : 0.0f;
      continue;
    }
    double frac = t - static_cast<double>(i);
    out[k] = static_cast<float>(in[i] + (in[i + 1] - static_cast<double>(in[i])) * frac);
  }
  return AudioBuffer(std::move(out), target_rate);
}

AudioBuffer Slice(const AudioBuffer &buf, double start_s, double end_s) {
  const double dur = buf.duration();
  const double eps = 0.5 / buf.sample_rate();
  if (!(start_s >= 0.0) || !(start_s < end_s) || end_s > dur + eps)
    throw BoundsError("slice [" + std::to_string(start_s) + ", " +
                      std::to_string(end_s) + ") outside [0, " +
                      std::to_string(dur) + "]");
  const std::size_t n = buf.size();
  auto idx = [&](double t) {
    double v = std::floor(t * buf.sample_rate() + 1e-9);
    std::size_t i = v <= 0 ? 0 : static_cast<std::size_t>(v);
    return i > n ? n : i;
  };
  std::size_t a = idx(start_s), b = idx(end_s);
  if (a >= b) throw BoundsError("slice [" + std::to_string(start_s) + ", " +
                                std::to_string(end_s) + ") holds no samples");
  std::vector<float> out(buf.samples().begin() + static_cast<std::ptrdiff_t>(a),
                         buf.samples().begin() + static_cast<std::ptrdiff_t>(b));
  return AudioBuffer(std::move(out), buf.sample_rate());
}

}  // namespace anchoralign
