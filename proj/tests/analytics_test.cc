// tests/analytics_test.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "anchoralign/error.h"
#include "test_util.h"

namespace anchoralign {
namespace {

using testing::TempDir;

std::vector<float> RandomVector(std::mt19937_64 &rng, std::size_t dim = kEmbeddingDim,
                                float mean = 0.0f, float sd = 1.0f) {
  std::normal_distribution<float> g(mean, sd);
  std::vector<float> v(dim);
  for (float &x : v) x = g(rng);
  return v;
}

std::string Line(const std::string &src, std::size_t idx, std::size_t dim, float v = 0.5f) {
  std::ostringstream o;
  o << src << '\t' << idx << '\t';
  for (std::size_t k = 0; k < dim; ++k) o << (k ? " " : "") << v;
  return o.str();
}

TEST(EmbeddingTest, ParsesLines) {
  std::istringstream in(Line("a", 0, 256) + "\n" + Line("a", 1, 256, -1) + "\n\n" +
                        Line("b", 7, 256, 2) + "\n");
  auto e = ParseEmbeddings(in);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[2].ref, (SegmentRef{"b", 7}));
  EXPECT_EQ(e[1].vector.size(), 256u);
  EXPECT_EQ(e[1].vector[100], -1.0f);
}

TEST(EmbeddingTest, WrongDimensionNamesLine) {
  std::istringstream in(Line("a", 0, 256) + "\n" + Line("a", 1, 255) + "\n");
  try {
    ParseEmbeddings(in);
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("255"), std::string::npos);
  }
  std::istringstream zero(Line("a", 0, 256, 0.0f) + "\n");
  EXPECT_THROW(ParseEmbeddings(zero), ParseError);
  std::istringstream junk("a\tx\t1 2 3\n");
  EXPECT_THROW(ParseEmbeddings(junk), ParseError);
  std::istringstream nan(Line("a", 0, 255) + " nan\n");
  EXPECT_THROW(ParseEmbeddings(nan), ParseError);
}

TEST(EmbeddingTest, SaveLoadIsBitExact) {
  TempDir dir;
  std::mt19937_64 rng(1);
  std::vector<Embedding> es;
  for (std::size_t k = 0; k < 1000; ++k) {
    auto v = RandomVector(rng);
    v[0] = std::nextafter(v[0], 10.0f);
    if (k == 3) v[1] = 1e-38f;
    es.push_back({{"src" + std::to_string(k % 7), k}, v});
  }
  SaveEmbeddings(dir / "e.tsv", es);
  auto back = LoadEmbeddings(dir / "e.tsv");
  ASSERT_EQ(back.size(), es.size());
  for (std::size_t k = 0; k < es.size(); ++k) {
    EXPECT_EQ(back[k].ref, es[k].ref);
    ASSERT_EQ(back[k].vector, es[k].vector) << k;
  }
  EXPECT_THROW(LoadEmbeddings(dir / "missing.tsv"), IoError);
}

TEST(KernelTest, Values) {
  std::mt19937_64 rng(2);
  auto x = RandomVector(rng);
  EXPECT_EQ(RbfKernel(x, x, 0.01), 1.0);
  std::vector<float> a(256, 0.0f), b(256, 0.0f);
  b[0] = 10.0f;  // squared distance 100
  EXPECT_NEAR(RbfKernel(a, b, 0.01), std::exp(-1.0), 1e-15);
  for (int k = 0; k < 200; ++k) {
    auto u = RandomVector(rng, 16), v = RandomVector(rng, 16);
    double kuv = RbfKernel(u, v, 0.05);
    EXPECT_GT(kuv, 0.0);
    EXPECT_LE(kuv, 1.0);
    EXPECT_EQ(kuv, RbfKernel(v, u, 0.05));
  }
  std::vector<float> short_v(3, 0.0f);
  EXPECT_THROW(RbfKernel(a, short_v, 0.01), DomainError);
}

struct Data {
  std::vector<std::vector<float>> x;
  std::vector<Gender> y;
};

// Two Gaussian clouds whose means are `sep` apart along the first axis.
Data Clouds(std::mt19937_64 &rng, std::size_t n, std::size_t dim, double sep) {
  Data d;
  for (std::size_t k = 0; k < n; ++k) {
    Gender g = k % 2 ? Gender::kMale : Gender::kFemale;
    auto v = RandomVector(rng, dim);
    v[0] += static_cast<float>(GenderSign(g) * sep / 2);
    d.x.push_back(v);
    d.y.push_back(g);
  }
  return d;
}

TEST(SvmTest, SeparableTrainsPerfectly) {
  std::mt19937_64 rng(3);
  Data d = Clouds(rng, 80, 8, 10.0);
  SvmTrace trace;
  SvmModel m = TrainSvm(d.x, d.y, {}, &trace);
  for (std::size_t k = 0; k < d.x.size(); ++k) EXPECT_EQ(m.Predict(d.x[k]), d.y[k]) << k;
  EXPECT_GT(trace.sweeps, 0u);
  EXPECT_EQ(trace.dual_objective.size(), trace.sweeps);
}

TEST(SvmTest, BoxConstraintsAndDualAscent) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    Data d = Clouds(rng, 60, 4, 1.0);
    SvmParams p;
    p.C = 1.0 + trial;
    p.gamma = 0.1;
    p.seed = trial;
    SvmTrace trace;
    SvmModel m = TrainSvm(d.x, d.y, p, &trace);
    for (double a : m.alphas) {
      EXPECT_NE(a, 0.0);
      EXPECT_LE(std::abs(a), p.C + 1e-12);
    }
    // Equality constraint: sum of signed multipliers is zero.
    EXPECT_NEAR(std::accumulate(m.alphas.begin(), m.alphas.end(), 0.0), 0.0, 1e-9);
    for (std::size_t s = 1; s < trace.dual_objective.size(); ++s)
      EXPECT_GE(trace.dual_objective[s], trace.dual_objective[s - 1] - 1e-9) << s;
    // The incrementally tracked objective agrees with a direct evaluation.
    std::vector<double> alpha(d.x.size(), 0.0);
    for (std::size_t k = 0; k < m.support_vectors.size(); ++k)
      for (std::size_t i = 0; i < d.x.size(); ++i)
        if (d.x[i] == m.support_vectors[k]) alpha[i] = std::abs(m.alphas[k]);
    EXPECT_NEAR(DualObjective(d.x, d.y, alpha, p.gamma), trace.dual_objective.back(),
                1e-6 * (1 + std::abs(trace.dual_objective.back())));
  }
}

TEST(SvmTest, SupportVectorSignsMatchLabels) {
  std::mt19937_64 rng(5);
  Data d = Clouds(rng, 60, 4, 2.0);
  SvmModel m = TrainSvm(d.x, d.y, {});
  ASSERT_FALSE(m.support_vectors.empty());
  for (std::size_t k = 0; k < m.support_vectors.size(); ++k)
    for (std::size_t i = 0; i < d.x.size(); ++i)
      if (d.x[i] == m.support_vectors[k])
        EXPECT_EQ(m.alphas[k] > 0, d.y[i] == Gender::kMale);
}

TEST(SvmTest, PermutationInvariantPredictions) {
  std::mt19937_64 rng(6);
  Data d = Clouds(rng, 60, 6, 8.0);
  Data test = Clouds(rng, 100, 6, 8.0);
  SvmModel a = TrainSvm(d.x, d.y, {});
  std::vector<std::size_t> order(d.x.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Data p;
  for (std::size_t k : order) {
    p.x.push_back(d.x[k]);
    p.y.push_back(d.y[k]);
  }
  SvmModel b = TrainSvm(p.x, p.y, {});
  for (std::size_t k = 0; k < test.x.size(); ++k)
    EXPECT_EQ(a.Predict(test.x[k]), b.Predict(test.x[k])) << k;
}

TEST(SvmTest, Errors) {
  std::mt19937_64 rng(7);
  std::vector<std::vector<float>> x = {RandomVector(rng, 4), RandomVector(rng, 4)};
  EXPECT_THROW(TrainSvm(x, {Gender::kMale, Gender::kMale}), DomainError);
  EXPECT_THROW(TrainSvm({x[0]}, {Gender::kMale}), DomainError);
  EXPECT_THROW(TrainSvm(x, {Gender::kMale}), DomainError);
  EXPECT_EQ(ParseGender("F"), Gender::kFemale);
  EXPECT_THROW(ParseGender("x"), DomainError);
}

TEST(SvmTest, ModelFileRoundTrip) {
  TempDir dir;
  std::mt19937_64 rng(8);
  Data d = Clouds(rng, 40, 256, 4.0);
  SvmModel m = TrainSvm(d.x, d.y, {});
  SaveSvmModel(dir / "m.txt", m);
  SvmModel r = LoadSvmModel(dir / "m.txt");
  EXPECT_EQ(r.gamma, m.gamma);
  EXPECT_EQ(r.C, m.C);
  EXPECT_EQ(r.bias, m.bias);
  EXPECT_EQ(r.alphas, m.alphas);
  EXPECT_EQ(r.support_vectors, m.support_vectors);
  for (const auto &x : d.x) EXPECT_EQ(r.DecisionValue(x), m.DecisionValue(x));
  std::ofstream(dir / "bad.txt") << "gamma 0.01\nC oops\n";
  try {
    LoadSvmModel(dir / "bad.txt");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(GenderHoursTest, SumsDurations) {
  Segment a, b;
  a.end_s = 10.0;
  b.start_s = 10.0;
  b.end_s = 30.0;
  std::vector<Segment> segs = {a, b};
  std::vector<Gender> g = {Gender::kMale, Gender::kFemale};
  auto [male, female] = GenderHours(segs, g);
  EXPECT_DOUBLE_EQ(male, 10.0 / 3600);
  EXPECT_DOUBLE_EQ(female, 20.0 / 3600);
  std::vector<Gender> one = {Gender::kMale};
  EXPECT_THROW(GenderHours(segs, one), DomainError);
}

std::vector<Embedding> AsEmbeddings(const std::vector<std::vector<float>> &vs) {
  std::vector<Embedding> out;
  for (std::size_t k = 0; k < vs.size(); ++k) out.push_back({{"s", k}, vs[k]});
  return out;
}

TEST(SpeakerTest, Examples) {
  std::mt19937_64 rng(9);
  auto v = RandomVector(rng);
  EXPECT_EQ(EstimateSpeakers(AsEmbeddings({v, v, v, v})).count, 1u);
  std::vector<float> e0(256, 0.0f), e1(256, 0.0f);
  e0[0] = 1.0f;
  e1[1] = 1.0f;
  auto two = EstimateSpeakers(AsEmbeddings({e0, e1, e0, e1}));
  EXPECT_EQ(two.count, 2u);
  EXPECT_EQ(two.assignment, (std::vector<std::size_t>{0, 1, 0, 1}));
  EXPECT_EQ(EstimateSpeakers({}).count, 0u);
}

TEST(SpeakerTest, FiveWellSeparatedVoices) {
  std::mt19937_64 rng(10);
  std::vector<std::vector<float>> centers;
  for (int c = 0; c < 5; ++c) centers.push_back(RandomVector(rng));
  std::vector<std::vector<float>> vs;
  std::vector<std::size_t> truth;
  for (int k = 0; k < 100; ++k) {
    std::size_t c = rng() % 5;
    auto v = centers[c];
    for (float &x : v) x += std::normal_distribution<float>(0.0f, 0.2f)(rng);
    vs.push_back(v);
    truth.push_back(c);
  }
  auto out = EstimateSpeakers(AsEmbeddings(vs));
  EXPECT_EQ(out.count, 5u);
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = 0; b < vs.size(); ++b)
      EXPECT_EQ(truth[a] == truth[b], out.assignment[a] == out.assignment[b]);
}

TEST(SpeakerTest, CountWithinBounds) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<float>> vs;
    std::size_t n = 1 + rng() % 30;
    for (std::size_t k = 0; k < n; ++k) vs.push_back(RandomVector(rng, 256, 0.3f));
    double thr = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    auto out = EstimateSpeakers(AsEmbeddings(vs), thr);
    EXPECT_GE(out.count, 1u);
    EXPECT_LE(out.count, n);
    ASSERT_EQ(out.assignment.size(), n);
    for (std::size_t a : out.assignment) EXPECT_LT(a, out.count);
  }
}

}  // namespace
}  // namespace anchoralign
