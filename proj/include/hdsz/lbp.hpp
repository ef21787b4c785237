#pragma once

// Front end of the detector: causal Butterworth band-pass, integer-ratio
// decimation to 512 Hz, and one-dimensional local binary pattern codes.
//
// An LBP code at sampling point t packs the signs of the l differences
// x[t+1]-x[t], ..., x[t+l]-x[t+l-1], first-in-time difference in the most
// significant bit. A difference of exactly zero is a 0 bit.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hdsz {

inline constexpr int kTargetRate = 512;

struct LbpConfig {
  int code_length = 6;
  int fs_target = kTargetRate;
  double band_low_hz = 0.5;
  double band_high_hz = 150.0;
  int filter_order = 4;

  // Enforces 1 <= l < 7, fs_target == 512, 0 < low < high < 256 Hz, order >= 1.
  void Validate() const;
  int CodeCount() const noexcept { return 1 << code_length; }
};

// One second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// Bilinear-transform Butterworth designs with cutoff prewarping. Odd orders
// end with a first-order section (b2 = a2 = 0).
std::vector<Biquad> DesignButterworthLowpass(int order, double cutoff_hz, double fs);
std::vector<Biquad> DesignButterworthHighpass(int order, double cutoff_hz, double fs);

// Causal cascade of biquads in transposed direct form II.
class SosFilter {
 public:
  SosFilter() = default;
  explicit SosFilter(std::vector<Biquad> sections);

  double Step(double x) noexcept;
  void Reset() noexcept;
  // Sets the state the cascade would reach after an infinitely long constant
  // input `x`, so a recording that starts at a DC offset has no step transient.
  void PrimeSteadyState(double x) noexcept;

  std::complex<double> Response(double freq_hz, double fs) const;
  std::span<const Biquad> Sections() const noexcept { return sections_; }

 private:
  std::vector<Biquad> sections_;
  std::vector<double> s1_;
  std::vector<double> s2_;
};

// High-pass at band_low_hz followed by low-pass at band_high_hz, each of
// cfg.filter_order, designed for `fs_in`.
SosFilter DesignBandpass(const LbpConfig& cfg, int fs_in);

// Validates the input rate and returns fs_in / 512. Throws UnsupportedRateError.
int DecimationRatio(int fs_in, const LbpConfig& cfg);

// Streaming band-pass + decimation for one channel.
class ChannelPreprocessor {
 public:
  ChannelPreprocessor(const LbpConfig& cfg, int fs_in);

  // Returns the decimated output when this input lands on an output instant.
  // Throws DataError on non-finite input.
  std::optional<double> Push(double sample);

 private:
  SosFilter filter_;
  int ratio_ = 1;
  std::int64_t count_ = 0;
};

std::vector<double> Preprocess(std::span<const double> raw, int fs_in, const LbpConfig& cfg);
std::vector<double> Preprocess(std::span<const std::int16_t> raw, int fs_in,
                               const LbpConfig& cfg);

// Streaming LBP coder: after the first l+1 samples, every new sample completes
// exactly one code.
class LbpCoder {
 public:
  explicit LbpCoder(int code_length);

  std::optional<std::uint8_t> Push(double sample) noexcept;
  void Reset() noexcept;

 private:
  int code_length_;
  std::uint32_t mask_;
  std::uint32_t bits_ = 0;
  int seen_ = 0;
  double previous_ = 0.0;
};

// N samples -> N - l codes. Throws DataError if N < l + 1.
std::vector<std::uint8_t> LbpStream(std::span<const double> samples, const LbpConfig& cfg);

// Relative frequency of each of the 2^l codes in `codes`.
std::vector<double> CodeHistogram(std::span<const std::uint8_t> codes, int code_length);

}  // namespace hdsz
