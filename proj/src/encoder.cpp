#include "hdsz/encoder.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>
#include <string>

#include "hdsz/error.hpp"
#include "hdsz/lbp.hpp"

namespace hdsz {

namespace {

// Words processed together by the bit-sliced kernel; loops over a block are
// fixed-length so the compiler can vectorize them.
constexpr std::size_t kLanes = 8;
// Enough counter planes for 1024 electrodes.
constexpr std::size_t kMaxPlanes = 12;

using Block = std::array<std::uint64_t, kLanes>;

// Adds `carry` (weight 2^first) into planes [first, planes).
inline void Ripple(Block* p, std::size_t first, std::size_t planes, Block carry) {
  for (std::size_t k = first; k < planes; ++k) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const std::uint64_t t = p[k][l] & carry[l];
      p[k][l] ^= carry[l];
      carry[l] = t;
    }
  }
}

// Carry-save adder: acc + a + b = 2 * carry + acc'.
inline void Csa(Block& carry, Block& acc, const Block& a, const Block& b) {
  for (std::size_t l = 0; l < kLanes; ++l) {
    const std::uint64_t u = acc[l] ^ a[l];
    carry[l] = (acc[l] & a[l]) | (u & b[l]);
    acc[l] = u ^ b[l];
  }
}

// Bit-sliced comparison of the per-bit counters against a constant.
inline void CompareConst(const Block* p, std::size_t planes, std::uint64_t value, Block& gt,
                         Block& eq) {
  gt.fill(0);
  eq.fill(~std::uint64_t{0});
  for (std::size_t k = planes; k-- > 0;) {
    if ((value >> k) & 1U) {
      for (std::size_t l = 0; l < kLanes; ++l) eq[l] &= p[k][l];
    } else {
      for (std::size_t l = 0; l < kLanes; ++l) {
        gt[l] |= eq[l] & p[k][l];
        eq[l] &= ~p[k][l];
      }
    }
  }
}

std::size_t PlanesFor(std::size_t max_count) {
  return static_cast<std::size_t>(std::bit_width(max_count));
}

}  // namespace

ItemMemory::ItemMemory(const HdConfig& cfg, int code_length, std::size_t n_electrodes)
    : cfg_(cfg), code_length_(code_length) {
  cfg.Validate();
  if (code_length < 1 || code_length >= 7) {
    throw std::invalid_argument("LBP code length must satisfy 1 <= l < 7");
  }
  if (n_electrodes < 1) throw std::invalid_argument("item memory needs at least one electrode");
  const std::size_t code_count = std::size_t{1} << code_length;
  codes_.reserve(code_count);
  for (std::size_t i = 0; i < code_count; ++i) {
    codes_.push_back(RandomHypervector(cfg, CodeSymbol(i)));
  }
  electrodes_.reserve(n_electrodes);
  for (std::size_t j = 0; j < n_electrodes; ++j) {
    electrodes_.push_back(RandomHypervector(cfg, ElectrodeSymbol(j)));
  }
}

TieRule SpatialTie(std::uint64_t seed, std::size_t sample_index) noexcept {
  return TieRule{seed, TieTag(TieDomain::kSpatial, sample_index)};
}

TieRule TemporalTie(std::uint64_t seed, std::size_t window_index) noexcept {
  return TieRule{seed, TieTag(TieDomain::kTemporal, window_index)};
}

SpatialRecord EncodeSpatial(std::span<const std::uint8_t> codes, const ItemMemory& im,
                            std::size_t sample_index) {
  if (codes.size() != im.NElectrodes()) {
    throw DimensionMismatchError("spatial record needs " + std::to_string(im.NElectrodes()) +
                                 " codes, got " + std::to_string(codes.size()));
  }
  Accumulator acc(im.Config().dim);
  for (std::size_t j = 0; j < codes.size(); ++j) {
    acc.Add(Bind(im.Electrode(j), im.Code(codes[j])));
  }
  return SpatialRecord{acc.Threshold(SpatialTie(im.Config().seed, sample_index))};
}

HistogramVector EncodeWindow(std::span<const SpatialRecord> records, std::uint64_t seed,
                             std::size_t window_index) {
  if (records.size() != kWindowSamples) {
    throw DimensionMismatchError("histogram window needs " + std::to_string(kWindowSamples) +
                                 " spatial records, got " + std::to_string(records.size()));
  }
  Accumulator acc(records.front().vector.Dim());
  for (const SpatialRecord& r : records) acc.Add(r.vector);
  return HistogramVector{acc.Threshold(TemporalTie(seed, window_index)), window_index};
}

std::size_t WindowCount(std::size_t samples, int code_length) noexcept {
  const auto l = static_cast<std::size_t>(code_length);
  if (samples <= l) return 0;
  return (samples - l) / kWindowSamples;
}

WindowEncoder::WindowEncoder(const ItemMemory& im)
    : dim_(im.Config().dim),
      words_(im.Config().Words()),
      padded_words_((words_ + kLanes - 1) / kLanes * kLanes),
      n_(im.NElectrodes()),
      code_count_(im.CodeCount()),
      seed_(im.Config().seed),
      code_rows_(code_count_ * padded_words_, 0),
      electrode_rows_(n_ * padded_words_, 0) {
  if (PlanesFor(n_) > kMaxPlanes) {
    throw std::invalid_argument("too many electrodes for the bit-sliced encoder");
  }
  for (std::size_t i = 0; i < code_count_; ++i) {
    std::ranges::copy(im.Code(i).Words(), code_rows_.begin() + i * padded_words_);
  }
  for (std::size_t j = 0; j < n_; ++j) {
    std::ranges::copy(im.Electrode(j).Words(), electrode_rows_.begin() + j * padded_words_);
  }
}

HistogramVector WindowEncoder::Encode(std::span<const std::uint8_t> frames,
                                      std::size_t first_sample,
                                      std::size_t window_index) const {
  if (frames.size() != kWindowSamples * n_) {
    throw DimensionMismatchError("window encoder needs " + std::to_string(kWindowSamples) +
                                 " frames of " + std::to_string(n_) + " codes");
  }
  for (std::uint8_t c : frames) {
    if (c >= code_count_) throw std::out_of_range("LBP code outside the item memory");
  }

  const std::size_t spatial_planes = std::max<std::size_t>(PlanesFor(n_), 3);
  const std::uint64_t spatial_half = n_ / 2;
  const bool spatial_ties = n_ % 2 == 0;
  const std::size_t temporal_planes = PlanesFor(kWindowSamples);
  const std::uint64_t temporal_half = kWindowSamples / 2;

  std::array<std::uint64_t, kWindowSamples> spatial_keys{};
  if (spatial_ties) {
    for (std::size_t t = 0; t < kWindowSamples; ++t) {
      spatial_keys[t] = SpatialTie(seed_, first_sample + t).Key();
    }
  }
  const std::uint64_t temporal_key = TemporalTie(seed_, window_index).Key();

  Hypervector out(dim_);
  auto out_words = out.MutableWords();

  for (std::size_t base = 0; base < padded_words_; base += kLanes) {
    std::array<Block, kMaxPlanes> temporal{};
    for (std::size_t t = 0; t < kWindowSamples; ++t) {
      const std::uint8_t* codes = frames.data() + t * n_;
      std::array<Block, kMaxPlanes> spatial{};
      std::size_t j = 0;
      // Harley-Seal: eight inputs through a carry-save tree into planes 0-2,
      // one ripple of the weight-8 carry into the rest.
      for (; j + 8 <= n_; j += 8) {
        Block in[8];
        for (std::size_t k = 0; k < 8; ++k) {
          const std::uint64_t* e = electrode_rows_.data() + (j + k) * padded_words_ + base;
          const std::uint64_t* c = code_rows_.data() + codes[j + k] * padded_words_ + base;
          for (std::size_t l = 0; l < kLanes; ++l) in[k][l] = e[l] ^ c[l];
        }
        Block twos_a, twos_b, fours_a, fours_b, eights;
        Csa(twos_a, spatial[0], in[0], in[1]);
        Csa(twos_b, spatial[0], in[2], in[3]);
        Csa(fours_a, spatial[1], twos_a, twos_b);
        Csa(twos_a, spatial[0], in[4], in[5]);
        Csa(twos_b, spatial[0], in[6], in[7]);
        Csa(fours_b, spatial[1], twos_a, twos_b);
        Csa(eights, spatial[2], fours_a, fours_b);
        Ripple(spatial.data(), 3, spatial_planes, eights);
      }
      for (; j < n_; ++j) {
        const std::uint64_t* ea = electrode_rows_.data() + j * padded_words_ + base;
        const std::uint64_t* ca = code_rows_.data() + codes[j] * padded_words_ + base;
        Block single;
        for (std::size_t l = 0; l < kLanes; ++l) single[l] = ea[l] ^ ca[l];
        Ripple(spatial.data(), 0, spatial_planes, single);
      }

      Block gt;
      Block eq;
      CompareConst(spatial.data(), spatial_planes, spatial_half, gt, eq);
      if (spatial_ties) {
        for (std::size_t l = 0; l < kLanes; ++l) {
          if (eq[l] != 0) gt[l] |= eq[l] & Mix64(spatial_keys[t] + base + l);
        }
      }
      Ripple(temporal.data(), 0, temporal_planes, gt);
    }

    Block gt;
    Block eq;
    CompareConst(temporal.data(), temporal_planes, temporal_half, gt, eq);
    for (std::size_t l = 0; l < kLanes && base + l < words_; ++l) {
      std::uint64_t word = gt[l];
      if (eq[l] != 0) word |= eq[l] & Mix64(temporal_key + base + l);
      out_words[base + l] = word;
    }
  }
  out_words.back() &= TailMask(dim_);
  return HistogramVector{std::move(out), window_index};
}

std::vector<HistogramVector> WindowEncoder::EncodeAll(const CodeFrames& frames) const {
  if (frames.NElectrodes() != n_) {
    throw DimensionMismatchError("recording has " + std::to_string(frames.NElectrodes()) +
                                 " electrodes, encoder expects " + std::to_string(n_));
  }
  const std::size_t windows = frames.Frames() / kWindowSamples;
  std::vector<HistogramVector> out;
  out.reserve(windows);
  for (std::size_t w = 0; w < windows; ++w) {
    out.push_back(Encode(frames.Frames(w * kWindowSamples, kWindowSamples),
                         w * kWindowSamples, w));
  }
  return out;
}

std::vector<double> ReconstructHistogram(const HistogramVector& h, const ItemMemory& im) {
  if (h.vector.Dim() != im.Config().dim) {
    throw DimensionMismatchError("histogram vector and item memory differ in dimension");
  }
  const auto hw = h.vector.Words();
  const double dim = static_cast<double>(im.Config().dim);
  std::vector<double> estimates(im.CodeCount(), 0.0);
  for (std::size_t i = 0; i < im.CodeCount(); ++i) {
    const auto cw = im.Code(i).Words();
    double sum = 0.0;
    for (std::size_t j = 0; j < im.NElectrodes(); ++j) {
      const auto ew = im.Electrode(j).Words();
      std::size_t distance = 0;
      for (std::size_t w = 0; w < hw.size(); ++w) {
        distance += static_cast<std::size_t>(std::popcount(hw[w] ^ ew[w] ^ cw[w]));
      }
      sum += 1.0 - 2.0 * static_cast<double>(distance) / dim;
    }
    estimates[i] = sum / static_cast<double>(im.NElectrodes());
  }
  return estimates;
}

std::vector<double> PooledHistogram(std::span<const std::uint8_t> frames, int code_length) {
  return CodeHistogram(frames, code_length);
}

}  // namespace hdsz
