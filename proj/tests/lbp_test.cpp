#include "hdsz/lbp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hdsz/error.hpp"
#include "oracles.hpp"

namespace hdsz {
namespace {

std::vector<double> Sine(double freq, double amp, int fs, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    x[t] = amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(t) / fs);
  }
  return x;
}

double PeakAfter(const std::vector<double>& y, std::size_t skip) {
  double peak = 0.0;
  for (std::size_t t = skip; t < y.size(); ++t) peak = std::max(peak, std::abs(y[t]));
  return peak;
}

double Db(double ratio) { return 20.0 * std::log10(ratio); }

TEST(LbpConfigTest, CodeLengthBound) {
  LbpConfig cfg;
  EXPECT_EQ(cfg.CodeCount(), 64);
  cfg.code_length = 7;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg.code_length = 0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg.code_length = 1;
  EXPECT_NO_THROW(cfg.Validate());
}

TEST(FilterDesignTest, LowpassMatchesPrewarpedButterworth) {
  for (int fs : {512, 1024, 2048}) {
    const SosFilter lp(DesignButterworthLowpass(4, 150.0, fs));
    for (double f = 1.0; f < fs / 2.0; f += 7.0) {
      EXPECT_NEAR(std::abs(lp.Response(f, fs)), oracle::ButterworthLowpassGain(4, 150.0, f, fs), 1e-9)
          << "fs=" << fs << " f=" << f;
    }
  }
}

TEST(FilterDesignTest, HighpassMatchesPrewarpedButterworth) {
  for (int order : {1, 2, 3, 4}) {
    const SosFilter hp(DesignButterworthHighpass(order, 0.5, 512));
    for (double f : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 10.0, 100.0}) {
      EXPECT_NEAR(std::abs(hp.Response(f, 512)), oracle::ButterworthHighpassGain(order, 0.5, f, 512),
                  1e-9)
          << "order=" << order << " f=" << f;
    }
  }
}

TEST(FilterDesignTest, BandpassPassbandAndStopband) {
  const LbpConfig cfg;
  const SosFilter bp = DesignBandpass(cfg, 512);
  const double g50 = std::abs(bp.Response(50.0, 512));
  const double g200 = std::abs(bp.Response(200.0, 512));
  EXPECT_NEAR(g50, oracle::ButterworthLowpassGain(4, 150, 50, 512) *
                       oracle::ButterworthHighpassGain(4, 0.5, 50, 512),
              1e-9);
  EXPECT_LT(std::abs(Db(g50)), 1.0);
  EXPECT_LE(Db(g200), -20.0);
  EXPECT_EQ(bp.Sections().size(), 4u);
}

TEST(PreprocessTest, FiftyHertzSinePreserved) {
  const auto y = Preprocess(Sine(50.0, 1000.0, 512, 4096), 512, LbpConfig{});
  ASSERT_EQ(y.size(), 4096u);
  EXPECT_LT(std::abs(Db(PeakAfter(y, 2048) / 1000.0)), 1.0);
}

TEST(PreprocessTest, TwoHundredHertzSineAttenuated) {
  const auto y = Preprocess(Sine(200.0, 1000.0, 512, 4096), 512, LbpConfig{});
  EXPECT_LE(Db(PeakAfter(y, 2048) / 1000.0), -20.0);
}

TEST(PreprocessTest, DcRemoved) {
  const std::vector<double> dc(8192, 500.0);
  const auto y = Preprocess(dc, 512, LbpConfig{});
  EXPECT_LT(PeakAfter(y, 4096), 1e-6);
}

TEST(PreprocessTest, DecimatesIntegerRatios) {
  EXPECT_EQ(DecimationRatio(512, LbpConfig{}), 1);
  EXPECT_EQ(DecimationRatio(2048, LbpConfig{}), 4);
  EXPECT_THROW(DecimationRatio(500, LbpConfig{}), UnsupportedRateError);
  EXPECT_THROW(DecimationRatio(768, LbpConfig{}), UnsupportedRateError);
  EXPECT_THROW(DecimationRatio(256, LbpConfig{}), UnsupportedRateError);

  const auto y = Preprocess(Sine(20.0, 1000.0, 2048, 8193), 2048, LbpConfig{});
  EXPECT_EQ(y.size(), 2049u);
  EXPECT_LT(std::abs(Db(PeakAfter(y, 1024) / 1000.0)), 1.0);
}

TEST(PreprocessTest, NonFiniteInputIsDataError) {
  std::vector<double> x(100, 1.0);
  x[50] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Preprocess(x, 512, LbpConfig{}), DataError);
  x[50] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Preprocess(x, 512, LbpConfig{}), DataError);
}

TEST(PreprocessTest, Int16OverloadMatchesDouble) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(-3000, 3000);
  std::vector<std::int16_t> raw(2000);
  std::vector<double> as_double(2000);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = static_cast<std::int16_t>(d(rng));
    as_double[i] = raw[i];
  }
  EXPECT_EQ(Preprocess(raw, 512, LbpConfig{}), Preprocess(as_double, 512, LbpConfig{}));
}

TEST(LbpStreamTest, Examples) {
  const LbpConfig cfg;
  std::vector<double> up(20), down(20);
  for (int i = 0; i < 20; ++i) {
    up[i] = i;
    down[i] = -i;
  }
  for (auto c : LbpStream(up, cfg)) EXPECT_EQ(c, 63);
  for (auto c : LbpStream(down, cfg)) EXPECT_EQ(c, 0);
  const std::vector<double> zigzag{0, 1, 0, 1, 0, 1, 0};
  const auto codes = LbpStream(zigzag, cfg);
  ASSERT_EQ(codes.size(), 1u);
  EXPECT_EQ(codes[0], 42);
}

TEST(LbpStreamTest, ZeroDifferenceIsZeroBit) {
  LbpConfig cfg;
  cfg.code_length = 3;
  const std::vector<double> x{1, 1, 2, 2};
  const auto codes = LbpStream(x, cfg);
  ASSERT_EQ(codes.size(), 1u);
  EXPECT_EQ(codes[0], 0b010);
}

TEST(LbpStreamTest, TooShortThrows) {
  const std::vector<double> x(6, 0.0);
  EXPECT_THROW(LbpStream(x, LbpConfig{}), DataError);
}

TEST(LbpStreamTest, MatchesDefinitionAndLaws) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> len(7, 300);
  for (int trial = 0; trial < 300; ++trial) {
    LbpConfig cfg;
    cfg.code_length = 1 + trial % 6;
    std::vector<double> x(len(rng));
    for (double& v : x) v = normal(rng);
    const auto codes = LbpStream(x, cfg);
    ASSERT_EQ(codes.size(), x.size() - cfg.code_length);
    for (std::size_t t = 0; t < codes.size(); ++t) {
      ASSERT_EQ(codes[t], oracle::LbpCode(x, t, cfg.code_length));
    }
    // Invariant under offset and positive scaling.
    std::vector<double> moved(x);
    for (double& v : moved) v = 3.5 * v + 100.0;
    ASSERT_EQ(LbpStream(moved, cfg), codes);
    // Streaming equals batch.
    LbpCoder coder(cfg.code_length);
    std::vector<std::uint8_t> streamed;
    for (double v : x) {
      if (auto c = coder.Push(v)) streamed.push_back(*c);
    }
    ASSERT_EQ(streamed, codes);
  }
}

TEST(CodeHistogramTest, SharesSumToOne) {
  const std::vector<std::uint8_t> codes{0, 0, 1, 63, 63, 63};
  const auto h = CodeHistogram(codes, 6);
  ASSERT_EQ(h.size(), 64u);
  EXPECT_DOUBLE_EQ(h[0], 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(h[63], 0.5);
  double total = 0.0;
  for (double v : h) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

}  // namespace
}  // namespace hdsz
