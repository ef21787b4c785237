#include "hdsz/encoder.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hdsz/error.hpp"
#include "oracles.hpp"

namespace hdsz {
namespace {

std::vector<std::uint8_t> RandomFrames(std::size_t n, std::size_t frames, int distinct,
                                       std::mt19937_64& rng) {
  std::uniform_int_distribution<int> code(0, distinct - 1);
  std::vector<std::uint8_t> out(n * frames);
  for (auto& c : out) c = static_cast<std::uint8_t>(code(rng));
  return out;
}

// Window through the reference path with oracle majorities at both levels.
Hypervector OracleWindow(std::span<const std::uint8_t> frames, const ItemMemory& im,
                         std::size_t first_sample, std::size_t window) {
  const std::size_t n = im.NElectrodes();
  std::vector<Hypervector> records;
  for (std::size_t t = 0; t < kWindowSamples; ++t) {
    std::vector<Hypervector> bound;
    for (std::size_t j = 0; j < n; ++j) {
      bound.push_back(oracle::Xor(im.Electrode(j), im.Code(frames[t * n + j])));
    }
    records.push_back(oracle::Majority(bound, SpatialTie(im.Config().seed, first_sample + t)));
  }
  return oracle::Majority(records, TemporalTie(im.Config().seed, window));
}

TEST(ItemMemoryTest, Shape) {
  const ItemMemory im(HdConfig{1000, 1}, 6, 36);
  EXPECT_EQ(im.CodeCount(), 64u);
  EXPECT_EQ(im.NElectrodes(), 36u);
  EXPECT_EQ(ItemMemory(HdConfig{1000, 1}, 6, 100).NElectrodes(), 100u);
  EXPECT_THROW(ItemMemory(HdConfig{1000, 1}, 7, 4), std::invalid_argument);
  EXPECT_THROW(ItemMemory(HdConfig{1000, 1}, 6, 0), std::invalid_argument);
}

TEST(ItemMemoryTest, ElectrodeVectorsIndependentOfCount) {
  const ItemMemory five(HdConfig{1000, 3}, 6, 5);
  const ItemMemory six(HdConfig{1000, 3}, 6, 6);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(five.Electrode(j), six.Electrode(j));
  for (std::size_t i = 0; i < 64; ++i) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NE(five.Code(i), five.Electrode(j));
  }
}

TEST(EncodeSpatialTest, SingleElectrodeIsBinding) {
  const ItemMemory im(HdConfig{1000, 2}, 6, 1);
  const std::vector<std::uint8_t> codes{17};
  EXPECT_EQ(EncodeSpatial(codes, im, 0).vector, Bind(im.Electrode(0), im.Code(17)));
}

TEST(EncodeSpatialTest, MatchesOracleForOddAndEvenCounts) {
  std::mt19937_64 rng(4);
  for (std::size_t n : {2u, 3u, 4u, 5u, 8u}) {
    const ItemMemory im(HdConfig{64, 6}, 6, n);
    for (int trial = 0; trial < 50; ++trial) {
      const auto codes = RandomFrames(n, 1, 64, rng);
      std::vector<Hypervector> bound;
      for (std::size_t j = 0; j < n; ++j) bound.push_back(oracle::Xor(im.Electrode(j), im.Code(codes[j])));
      ASSERT_EQ(EncodeSpatial(codes, im, 99).vector, oracle::Majority(bound, SpatialTie(6, 99)));
    }
  }
}

TEST(EncodeSpatialTest, SharedCodeStaysSimilarToEveryBinding) {
  const ItemMemory im(HdConfig{10000, 8}, 6, 36);
  const std::vector<std::uint8_t> codes(36, 21);
  const Hypervector s = EncodeSpatial(codes, im, 0).vector;
  for (std::size_t j = 0; j < 36; ++j) {
    EXPECT_LT(NormalizedHamming(s, Bind(im.Electrode(j), im.Code(21))), 0.485);
  }
}

TEST(EncodeSpatialTest, Errors) {
  const ItemMemory im(HdConfig{64, 6}, 6, 3);
  const std::vector<std::uint8_t> two{1, 2};
  EXPECT_THROW(EncodeSpatial(two, im, 0), DimensionMismatchError);
  const std::vector<std::uint8_t> bad{1, 2, 64};
  EXPECT_THROW(EncodeSpatial(bad, im, 0), std::out_of_range);
}

TEST(EncodeWindowTest, Examples) {
  const HdConfig cfg{1000, 1};
  const SpatialRecord a{RandomHypervector(cfg, 100)};
  const SpatialRecord b{RandomHypervector(cfg, 101)};
  std::vector<SpatialRecord> same(kWindowSamples, a);
  EXPECT_EQ(EncodeWindow(same, cfg.seed, 0).vector, a.vector);
  std::vector<SpatialRecord> mixed(200, a);
  mixed.insert(mixed.end(), 56, b);
  EXPECT_EQ(EncodeWindow(mixed, cfg.seed, 3).vector, a.vector);
  EXPECT_EQ(EncodeWindow(mixed, cfg.seed, 3).window_index, 3u);
  mixed.pop_back();
  EXPECT_THROW(EncodeWindow(mixed, cfg.seed, 0), DimensionMismatchError);
}

TEST(EncodeWindowTest, ReferencePathMatchesOracle) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {3u, 4u}) {
    const ItemMemory im(HdConfig{64, 12}, 6, n);
    for (int trial = 0; trial < 5; ++trial) {
      const auto frames = RandomFrames(n, kWindowSamples, 4, rng);
      std::vector<SpatialRecord> records;
      for (std::size_t t = 0; t < kWindowSamples; ++t) {
        records.push_back(EncodeSpatial(std::span(frames).subspan(t * n, n), im, 512 + t));
      }
      ASSERT_EQ(EncodeWindow(records, 12, 2).vector, OracleWindow(frames, im, 512, 2));
    }
  }
}

// The fused kernel against the Accumulator reference over many shapes,
// including code distributions narrow enough to force exact ties.
TEST(WindowEncoderTest, BitIdenticalToReference) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> pick_n(1, 40);
  std::uniform_int_distribution<int> pick_distinct(1, 64);
  std::size_t cases = 0;
  for (std::size_t dim : {64u, 128u}) {
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = pick_n(rng);
      const std::uint64_t seed = rng();
      const ItemMemory im(HdConfig{dim, seed}, 6, n);
      const WindowEncoder encoder(im);
      const auto frames = RandomFrames(n, kWindowSamples, pick_distinct(rng), rng);
      const std::size_t window = rng() % 1000;
      const std::size_t first = window * kWindowSamples;
      std::vector<SpatialRecord> records;
      for (std::size_t t = 0; t < kWindowSamples; ++t) {
        records.push_back(EncodeSpatial(std::span(frames).subspan(t * n, n), im, first + t));
      }
      ASSERT_EQ(encoder.Encode(frames, first, window).vector,
                EncodeWindow(records, seed, window).vector)
          << "dim=" << dim << " n=" << n;
      ++cases;
    }
  }
  EXPECT_GE(cases, 1000u);
}

TEST(WindowEncoderTest, LargeShapesMatchReference) {
  std::mt19937_64 rng(7);
  for (auto [dim, n] : {std::pair<std::size_t, std::size_t>{1000, 36}, {700, 100}, {10000, 64}}) {
    const ItemMemory im(HdConfig{dim, 77}, 6, n);
    const auto frames = RandomFrames(n, kWindowSamples, 8, rng);
    std::vector<SpatialRecord> records;
    for (std::size_t t = 0; t < kWindowSamples; ++t) {
      records.push_back(EncodeSpatial(std::span(frames).subspan(t * n, n), im, t));
    }
    EXPECT_EQ(WindowEncoder(im).Encode(frames, 0, 0).vector, EncodeWindow(records, 77, 0).vector)
        << dim << "/" << n;
  }
}

TEST(WindowEncoderTest, EncodeAllCutsWholeWindows) {
  std::mt19937_64 rng(8);
  const ItemMemory im(HdConfig{128, 1}, 6, 4);
  CodeFrames frames(4, 3 * kWindowSamples + 100);
  for (std::size_t t = 0; t < frames.Frames(); ++t) {
    for (std::size_t j = 0; j < 4; ++j) frames.At(t, j) = static_cast<std::uint8_t>(rng() % 64);
  }
  const WindowEncoder encoder(im);
  const auto all = encoder.EncodeAll(frames);
  ASSERT_EQ(all.size(), 3u);
  for (std::size_t w = 0; w < 3; ++w) {
    EXPECT_EQ(all[w].window_index, w);
    EXPECT_EQ(all[w].vector,
              encoder.Encode(frames.Frames(w * kWindowSamples, kWindowSamples), w * kWindowSamples, w).vector);
  }
  EXPECT_THROW(encoder.Encode(frames.Frames(0, 10), 0, 0), DimensionMismatchError);
}

TEST(WindowCountTest, Arithmetic) {
  EXPECT_EQ(WindowCount(6, 6), 0u);
  EXPECT_EQ(WindowCount(261, 6), 0u);
  EXPECT_EQ(WindowCount(262, 6), 1u);
  EXPECT_EQ(WindowCount(517, 6), 1u);
  EXPECT_EQ(WindowCount(518, 6), 2u);
  EXPECT_EQ(WindowCount(512 * 60 + 6, 6), 120u);
}

// Frames drawn from a histogram with weight `top` on one code, the rest
// spread uniformly.
std::vector<std::uint8_t> SkewedFrames(std::size_t n, int dominant, double top, std::mt19937_64& rng) {
  std::bernoulli_distribution use_top(top);
  std::uniform_int_distribution<int> other(0, 63);
  std::vector<std::uint8_t> out(n * kWindowSamples);
  for (auto& c : out) c = static_cast<std::uint8_t>(use_top(rng) ? dominant : other(rng));
  return out;
}

TEST(ReconstructHistogramTest, DominantCodeHasLargestEstimate) {
  std::mt19937_64 rng(9);
  const ItemMemory im(HdConfig{10000, 21}, 6, 36);
  const WindowEncoder encoder(im);
  const auto skewed = SkewedFrames(36, 42, 0.6, rng);
  const auto est = ReconstructHistogram(encoder.Encode(skewed, 0, 0), im);
  ASSERT_EQ(est.size(), 64u);
  EXPECT_EQ(std::ranges::max_element(est) - est.begin(), 42);
  const double skew_gap = *std::ranges::max_element(est) - *std::ranges::min_element(est);

  const auto uniform = SkewedFrames(36, 0, 0.0, rng);
  const auto flat = ReconstructHistogram(encoder.Encode(uniform, 0, 1), im);
  const double flat_gap = *std::ranges::max_element(flat) - *std::ranges::min_element(flat);
  EXPECT_LT(flat_gap, skew_gap);
}

TEST(ReconstructHistogramTest, CorrelatesWithPooledHistogram) {
  std::mt19937_64 rng(10);
  const ItemMemory im(HdConfig{10000, 22}, 6, 36);
  const WindowEncoder encoder(im);
  // A few strong codes, the shape of a rhythmic discharge.
  std::discrete_distribution<int> shape({30, 20, 10, 5, 5, 5, 5, 5, 5, 5, 5});
  const int codes[] = {63, 0, 62, 1, 31, 32, 15, 48, 7, 56, 3};
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::uint8_t> frames(36 * kWindowSamples);
    for (auto& c : frames) c = static_cast<std::uint8_t>(codes[shape(rng)]);
    const auto est = ReconstructHistogram(encoder.Encode(frames, 0, trial), im);
    const auto exact = PooledHistogram(frames, 6);
    EXPECT_GT(oracle::Pearson(est, exact), 0.9);
  }
}

}  // namespace
}  // namespace hdsz
