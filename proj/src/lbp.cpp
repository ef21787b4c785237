#include "hdsz/lbp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hdsz/error.hpp"

namespace hdsz {

void LbpConfig::Validate() const {
  if (code_length < 1 || code_length >= 7) {
    throw std::invalid_argument("LBP code length must satisfy 1 <= l < 7, got " +
                                std::to_string(code_length));
  }
  if (fs_target != kTargetRate) {
    throw std::invalid_argument("target rate must be 512 Hz");
  }
  if (!(band_low_hz > 0.0 && band_low_hz < band_high_hz && band_high_hz < fs_target / 2.0)) {
    throw std::invalid_argument("band edges must satisfy 0 < low < high < 256 Hz");
  }
  if (filter_order < 1) throw std::invalid_argument("filter order must be >= 1");
}

namespace {

enum class Kind { kLowpass, kHighpass };

std::vector<Biquad> DesignButterworth(Kind kind, int order, double cutoff_hz, double fs) {
  if (order < 1) throw std::invalid_argument("filter order must be >= 1");
  if (!(cutoff_hz > 0.0 && cutoff_hz < fs / 2.0)) {
    throw std::invalid_argument("cutoff must lie in (0, fs/2)");
  }
  const double k = std::tan(std::numbers::pi * cutoff_hz / fs);
  const double k2 = k * k;
  std::vector<Biquad> sections;
  for (int i = 0; i < order / 2; ++i) {
    // Pole pair at angle theta from the negative real axis; odd orders keep
    // the real pole for the first-order section below.
    const double theta = std::numbers::pi * (order - 1.0 - 2.0 * i) / (2.0 * order);
    const double inv_q = 2.0 * std::cos(theta);
    const double norm = 1.0 / (1.0 + k * inv_q + k2);
    Biquad s;
    if (kind == Kind::kLowpass) {
      s.b0 = k2 * norm;
      s.b1 = 2.0 * s.b0;
      s.b2 = s.b0;
    } else {
      s.b0 = norm;
      s.b1 = -2.0 * norm;
      s.b2 = norm;
    }
    s.a1 = 2.0 * (k2 - 1.0) * norm;
    s.a2 = (1.0 - k * inv_q + k2) * norm;
    sections.push_back(s);
  }
  if (order % 2 == 1) {
    const double norm = 1.0 / (1.0 + k);
    Biquad s;
    if (kind == Kind::kLowpass) {
      s.b0 = k * norm;
      s.b1 = s.b0;
    } else {
      s.b0 = norm;
      s.b1 = -norm;
    }
    s.a1 = (k - 1.0) * norm;
    sections.push_back(s);
  }
  return sections;
}

}  // namespace

std::vector<Biquad> DesignButterworthLowpass(int order, double cutoff_hz, double fs) {
  return DesignButterworth(Kind::kLowpass, order, cutoff_hz, fs);
}

std::vector<Biquad> DesignButterworthHighpass(int order, double cutoff_hz, double fs) {
  return DesignButterworth(Kind::kHighpass, order, cutoff_hz, fs);
}

SosFilter::SosFilter(std::vector<Biquad> sections)
    : sections_(std::move(sections)), s1_(sections_.size(), 0.0), s2_(sections_.size(), 0.0) {}

double SosFilter::Step(double x) noexcept {
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    const Biquad& s = sections_[i];
    const double y = s.b0 * x + s1_[i];
    s1_[i] = s.b1 * x - s.a1 * y + s2_[i];
    s2_[i] = s.b2 * x - s.a2 * y;
    x = y;
  }
  return x;
}

void SosFilter::Reset() noexcept {
  std::fill(s1_.begin(), s1_.end(), 0.0);
  std::fill(s2_.begin(), s2_.end(), 0.0);
}

void SosFilter::PrimeSteadyState(double x) noexcept {
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    const Biquad& s = sections_[i];
    const double gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double y = gain * x;
    s2_[i] = s.b2 * x - s.a2 * y;
    s1_[i] = s.b1 * x - s.a1 * y + s2_[i];
    x = y;
  }
}

std::complex<double> SosFilter::Response(double freq_hz, double fs) const {
  const std::complex<double> z_inv = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / fs);
  std::complex<double> h = 1.0;
  for (const Biquad& s : sections_) {
    h *= (s.b0 + s.b1 * z_inv + s.b2 * z_inv * z_inv) /
         (1.0 + s.a1 * z_inv + s.a2 * z_inv * z_inv);
  }
  return h;
}

SosFilter DesignBandpass(const LbpConfig& cfg, int fs_in) {
  auto sections = DesignButterworthHighpass(cfg.filter_order, cfg.band_low_hz, fs_in);
  auto low = DesignButterworthLowpass(cfg.filter_order, cfg.band_high_hz, fs_in);
  sections.insert(sections.end(), low.begin(), low.end());
  return SosFilter(std::move(sections));
}

int DecimationRatio(int fs_in, const LbpConfig& cfg) {
  if (fs_in < cfg.fs_target || fs_in % cfg.fs_target != 0) {
    throw UnsupportedRateError("unsupported input rate " + std::to_string(fs_in) +
                               " Hz: must be an integer multiple of " +
                               std::to_string(cfg.fs_target) + " Hz");
  }
  return fs_in / cfg.fs_target;
}

ChannelPreprocessor::ChannelPreprocessor(const LbpConfig& cfg, int fs_in)
    : filter_(DesignBandpass(cfg, fs_in)), ratio_(DecimationRatio(fs_in, cfg)) {
  cfg.Validate();
}

std::optional<double> ChannelPreprocessor::Push(double sample) {
  if (!std::isfinite(sample)) throw DataError("non-finite sample in channel data");
  if (count_ == 0) filter_.PrimeSteadyState(sample);
  const double y = filter_.Step(sample);
  const bool emit = count_ % ratio_ == 0;
  ++count_;
  if (emit) return y;
  return std::nullopt;
}

namespace {

template <typename T>
std::vector<double> PreprocessImpl(std::span<const T> raw, int fs_in, const LbpConfig& cfg) {
  ChannelPreprocessor pre(cfg, fs_in);
  std::vector<double> out;
  out.reserve(raw.size() / static_cast<std::size_t>(fs_in / cfg.fs_target) + 1);
  for (T x : raw) {
    if (auto y = pre.Push(static_cast<double>(x))) out.push_back(*y);
  }
  return out;
}

}  // namespace

std::vector<double> Preprocess(std::span<const double> raw, int fs_in, const LbpConfig& cfg) {
  return PreprocessImpl(raw, fs_in, cfg);
}

std::vector<double> Preprocess(std::span<const std::int16_t> raw, int fs_in,
                               const LbpConfig& cfg) {
  return PreprocessImpl(raw, fs_in, cfg);
}

LbpCoder::LbpCoder(int code_length)
    : code_length_(code_length), mask_((1U << code_length) - 1U) {}

std::optional<std::uint8_t> LbpCoder::Push(double sample) noexcept {
  if (seen_ > 0) {
    bits_ = ((bits_ << 1) | (sample - previous_ > 0.0 ? 1U : 0U)) & mask_;
  }
  previous_ = sample;
  if (seen_ <= code_length_) ++seen_;
  if (seen_ > code_length_) return static_cast<std::uint8_t>(bits_);
  return std::nullopt;
}

void LbpCoder::Reset() noexcept {
  bits_ = 0;
  seen_ = 0;
  previous_ = 0.0;
}

std::vector<std::uint8_t> LbpStream(std::span<const double> samples, const LbpConfig& cfg) {
  cfg.Validate();
  const auto l = static_cast<std::size_t>(cfg.code_length);
  if (samples.size() < l + 1) {
    throw DataError("need at least " + std::to_string(l + 1) + " samples for one LBP code, got " +
                    std::to_string(samples.size()));
  }
  std::vector<std::uint8_t> codes;
  codes.reserve(samples.size() - l);
  LbpCoder coder(cfg.code_length);
  for (double x : samples) {
    if (auto c = coder.Push(x)) codes.push_back(*c);
  }
  return codes;
}

std::vector<double> CodeHistogram(std::span<const std::uint8_t> codes, int code_length) {
  std::vector<double> hist(std::size_t{1} << code_length, 0.0);
  if (codes.empty()) return hist;
  for (std::uint8_t c : codes) hist[c] += 1.0;
  for (double& h : hist) h /= static_cast<double>(codes.size());
  return hist;
}

}  // namespace hdsz
