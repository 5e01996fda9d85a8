// src/analytics.cc

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

#include "anchoralign/analytics.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "anchoralign/error.h"
#include "anchoralign/fileutil.h"

namespace anchoralign {

namespace {

std::string FormatFloat(float v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string FormatDouble(double v) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Parses whitespace-separated floats; false on any malformed token.
bool ParseFloats(std::string_view s, std::vector<float> &out) {
  out.clear();
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    float v;
    auto r = std::from_chars(s.data() + i, s.data() + j, v);
    if (r.ec != std::errc() || r.ptr != s.data() + j) return false;
    out.push_back(v);
    i = j;
  }
  return true;
}

double SquaredDistance(std::span<const float> x, std::span<const float> y) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double d = static_cast<double>(x[k]) - y[k];
    acc += d * d;
  }
  return acc;
}

}  // namespace

void ValidateEmbedding(std::span<const float> v) {
  if (v.size() != kEmbeddingDim)
    throw DomainError("embedding dimension " + std::to_string(v.size()) +
                      ", expected " + std::to_string(kEmbeddingDim));
  double norm = 0.0;
  for (float f : v) {
    if (!std::isfinite(f)) throw DomainError("non-finite embedding value");
    norm += static_cast<double>(f) * f;
  }
  if (norm == 0.0) throw DomainError("embedding has zero norm");
}

std::vector<Embedding> ParseEmbeddings(std::istream &in) {
  std::vector<Embedding> out;
  std::string line;
  std::size_t lineno = 0;
  std::vector<float> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw ParseError("expected source_id<TAB>index<TAB>vector", lineno);
    Embedding e;
    e.ref.source_id = line.substr(0, t1);
    std::string_view idx(line.data() + t1 + 1, t2 - t1 - 1);
    auto r = std::from_chars(idx.data(), idx.data() + idx.size(), e.ref.index);
    if (r.ec != std::errc() || r.ptr != idx.data() + idx.size())
      throw ParseError("bad segment index '" + std::string(idx) + "'", lineno);
    if (!ParseFloats(std::string_view(line).substr(t2 + 1), values))
      throw ParseError("malformed float in embedding", lineno);
    try {
      ValidateEmbedding(values);
    } catch (const DomainError &err) {
      throw ParseError(err.what(), lineno);
    }
    e.vector = values;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Embedding> LoadEmbeddings(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return ParseEmbeddings(in);
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + std::string(e.what()).substr(
                                        0, std::string(e.what()).rfind(" (line")),
                     e.line());
  }
}

void SaveEmbeddings(const std::string &path, const std::vector<Embedding> &es) {
  AtomicFile f(path);
  for (const Embedding &e : es) {
    f.stream() << e.ref.source_id << '\t' << e.ref.index << '\t';
    for (std::size_t k = 0; k < e.vector.size(); ++k) {
      if (k) f.stream() << ' ';
      f.stream() << FormatFloat(e.vector[k]);
    }
    f.stream() << '\n';
  }
  f.Commit();
}

double RbfKernel(std::span<const float> x, std::span<const float> y,
                 double gamma) {
  if (x.size() != y.size())
    throw DomainError("kernel dimension mismatch: " + std::to_string(x.size()) +
                      " vs " + std::to_string(y.size()));
  return std::exp(-gamma * SquaredDistance(x, y));
}

const char *GenderName(Gender g) {
  return g == Gender::kMale ? "male" : "female";
}

Gender ParseGender(const std::string &s) {
  if (s == "male" || s == "m" || s == "M") return Gender::kMale;
  if (s == "female" || s == "f" || s == "F") return Gender::kFemale;
  throw DomainError("unknown gender label '" + s + "'");
}

double SvmModel::DecisionValue(std::span<const float> x) const {
  double acc = bias;
  for (std::size_t k = 0; k < support_vectors.size(); ++k)
    acc += alphas[k] * RbfKernel(support_vectors[k], x, gamma);
  return acc;
}

double DualObjective(const std::vector<std::vector<float>> &x,
                     const std::vector<Gender> &y,
                     const std::vector<double> &alpha, double gamma) {
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    linear += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (alpha[j] == 0.0) continue;
      quad += alpha[i] * alpha[j] * GenderSign(y[i]) * GenderSign(y[j]) *
              RbfKernel(x[i], x[j], gamma);
    }
  }
  return linear - 0.5 * quad;
}

SvmModel TrainSvm(const std::vector<std::vector<float>> &x,
                  const std::vector<Gender> &labels, const SvmParams &p,
                  SvmTrace *trace) {
  const std::size_t n = x.size();
  if (n != labels.size()) throw DomainError("label count does not match data");
  if (n < 2) throw DomainError("need at least two training points");
  bool has_male = false, has_female = false;
  for (Gender g : labels) (g == Gender::kMale ? has_male : has_female) = true;
  if (!has_male || !has_female)
    throw DomainError("training data contains a single class");
  if (!(p.gamma > 0.0) || !(p.C > 0.0)) throw DomainError("gamma and C must be positive");

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = GenderSign(labels[i]);
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    K[i * n + i] = RbfKernel(x[i], x[i], p.gamma);
    for (std::size_t j = i + 1; j < n; ++j)
      K[i * n + j] = K[j * n + i] = RbfKernel(x[i], x[j], p.gamma);
  }

  std::vector<double> alpha(n, 0.0);
  double b = 0.0;
  // f(x_i) without bias, kept up to date incrementally.
  std::vector<double> f(n, 0.0);
  auto dual = [&] {
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lin += alpha[i];
      quad += alpha[i] * y[i] * f[i];
    }
    return lin - 0.5 * quad;
  };

  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 2);
  int passes = 0;
  std::size_t sweeps = 0;
  while (passes < p.max_passes && sweeps < p.max_sweeps) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = f[i] + b - y[i];
      if (!((y[i] * ei < -p.tol && alpha[i] < p.C) ||
            (y[i] * ei > p.tol && alpha[i] > 0.0)))
        continue;
      std::size_t j = pick(rng);
      if (j >= i) ++j;
      const double ej = f[j] + b - y[j];
      const double ai_old = alpha[i], aj_old = alpha[j];
      double lo, hi;
      if (y[i] != y[j]) {
        lo = std::max(0.0, aj_old - ai_old);
        hi = std::min(p.C, p.C + aj_old - ai_old);
      } else {
        lo = std::max(0.0, ai_old + aj_old - p.C);
        hi = std::min(p.C, ai_old + aj_old);
      }
      if (lo >= hi) continue;
      const double eta = 2.0 * K[i * n + j] - K[i * n + i] - K[j * n + j];
      if (eta >= 0.0) continue;
      double aj = aj_old - y[j] * (ei - ej) / eta;
      aj = std::clamp(aj, lo, hi);
      if (std::abs(aj - aj_old) < 1e-5) continue;
      double ai = ai_old + y[i] * y[j] * (aj_old - aj);
      ai = std::clamp(ai, 0.0, p.C);

      const double di = ai - ai_old, dj = aj - aj_old;
      const double b1 = b - ei - y[i] * di * K[i * n + i] - y[j] * dj * K[i * n + j];
      const double b2 = b - ej - y[i] * di * K[i * n + j] - y[j] * dj * K[j * n + j];
      if (ai > 0.0 && ai < p.C)
        b = b1;
      else if (aj > 0.0 && aj < p.C)
        b = b2;
      else
        b = 0.5 * (b1 + b2);
      alpha[i] = ai;
      alpha[j] = aj;
      for (std::size_t k = 0; k < n; ++k)
        f[k] += y[i] * di * K[i * n + k] + y[j] * dj * K[j * n + k];
      ++changed;
    }
    ++sweeps;
    if (trace) trace->dual_objective.push_back(dual());
    passes = changed == 0 ? passes + 1 : 0;
  }
  if (trace) trace->sweeps = sweeps;

  SvmModel m;
  m.bias = b;
  m.gamma = p.gamma;
  m.C = p.C;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] <= 0.0) continue;
    m.support_vectors.push_back(x[i]);
    m.alphas.push_back(alpha[i] * y[i]);
  }
  return m;
}

void SaveSvmModel(const std::string &path, const SvmModel &m) {
  AtomicFile f(path);
  auto &o = f.stream();
  o << "gamma " << FormatDouble(m.gamma) << '\n'
    << "C " << FormatDouble(m.C) << '\n'
    << "bias " << FormatDouble(m.bias) << '\n'
    << "support_vectors " << m.support_vectors.size() << '\n';
  for (std::size_t k = 0; k < m.support_vectors.size(); ++k) {
    o << FormatDouble(m.alphas[k]);
    for (float v : m.support_vectors[k]) o << ' ' << FormatFloat(v);
    o << '\n';
  }
  f.Commit();
}

SvmModel LoadSvmModel(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  SvmModel m;
  std::size_t lineno = 0, count = 0;
  std::string line;
  auto header = [&](const char *key) -> double {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError("missing " + std::string(key), lineno);
    std::istringstream ss(line);
    std::string k;
    double v;
    if (!(ss >> k >> v) || k != key)
      throw ParseError("expected '" + std::string(key) + " <value>'", lineno);
    return v;
  };
  m.gamma = header("gamma");
  m.C = header("C");
  m.bias = header("bias");
  count = static_cast<std::size_t>(header("support_vectors"));
  std::vector<float> values;
  for (std::size_t k = 0; k < count; ++k) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError("missing support vector", lineno);
    std::size_t sp = line.find(' ');
    double alpha;
    auto r = std::from_chars(line.data(), line.data() + (sp == std::string::npos ? line.size() : sp), alpha);
    if (r.ec != std::errc() || sp == std::string::npos)
      throw ParseError("malformed support vector line", lineno);
    if (!ParseFloats(std::string_view(line).substr(sp + 1), values))
      throw ParseError("malformed float in support vector", lineno);
    if (std::abs(alpha) > m.C * (1.0 + 1e-12))
      throw ParseError("alpha outside [0, C]", lineno);
    m.alphas.push_back(alpha);
    m.support_vectors.push_back(values);
  }
  return m;
}

std::pair<double, double> GenderHours(std::span<const Segment> segments,
                                      std::span<const Gender> predictions) {
  if (segments.size() != predictions.size())
    throw DomainError("need one prediction per segment");
  double male = 0.0, female = 0.0;
  for (std::size_t k = 0; k < segments.size(); ++k)
    (predictions[k] == Gender::kMale ? male : female) += segments[k].duration();
  return {male / 3600.0, female / 3600.0};
}

SpeakerClusters EstimateSpeakers(const std::vector<Embedding> &embeddings,
                                 double cos_threshold) {
  SpeakerClusters out;
  std::vector<std::vector<double>> sums, centroids;
  for (const Embedding &e : embeddings) {
    std::vector<double> u(e.vector.begin(), e.vector.end());
    double norm = 0.0;
    for (double v : u) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double &v : u) v /= norm;
    std::size_t chosen = centroids.size();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      double dot = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) dot += u[k] * centroids[c][k];
      if (dot >= cos_threshold) {
        chosen = c;
        break;
      }
    }
    if (chosen == centroids.size()) {
      sums.push_back(u);
      centroids.push_back(u);
    } else {
      auto &s = sums[chosen];
      for (std::size_t k = 0; k < u.size(); ++k) s[k] += u[k];
      double sn = 0.0;
      for (double v : s) sn += v * v;
      sn = std::sqrt(sn);
      for (std::size_t k = 0; k < s.size(); ++k)
        centroids[chosen][k] = sn > 0.0 ? s[k] / sn : 0.0;
    }
    out.assignment.push_back(chosen);
  }
  out.count = centroids.size();
  return out;
}

}  // namespace anchoralign
