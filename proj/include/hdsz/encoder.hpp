#pragma once

// Spatio-temporal HD encoder. Each electrode's LBP code is bound (XOR) to the
// electrode's atomic vector; the n bound vectors of one sampling point are
// bundled into a spatial record S, and the 256 records of a 0.5 s block are
// bundled into the histogram vector H.
//
// Two implementations share one contract: EncodeSpatial/EncodeWindow go
// through Accumulator and are the readable reference; WindowEncoder fuses both
// majorities with bit-sliced counters and is what the pipeline runs.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdsz/hypervector.hpp"

namespace hdsz {

inline constexpr std::size_t kWindowSamples = 256;
inline constexpr double kWindowSeconds = 0.5;

// Symbol namespaces of the item memory. Codes and electrodes never collide.
constexpr std::uint64_t CodeSymbol(std::size_t code) noexcept { return code; }
constexpr std::uint64_t ElectrodeSymbol(std::size_t electrode) noexcept {
  return (std::uint64_t{1} << 32) | electrode;
}

class ItemMemory {
 public:
  // 2^code_length code vectors and n_electrodes electrode vectors, each keyed
  // by its own symbol, so electrode j is the same vector for any n > j.
  ItemMemory(const HdConfig& cfg, int code_length, std::size_t n_electrodes);

  const HdConfig& Config() const noexcept { return cfg_; }
  int CodeLength() const noexcept { return code_length_; }
  std::size_t CodeCount() const noexcept { return codes_.size(); }
  std::size_t NElectrodes() const noexcept { return electrodes_.size(); }

  const Hypervector& Code(std::size_t code) const { return codes_.at(code); }
  const Hypervector& Electrode(std::size_t electrode) const { return electrodes_.at(electrode); }

 private:
  HdConfig cfg_;
  int code_length_;
  std::vector<Hypervector> codes_;
  std::vector<Hypervector> electrodes_;
};

struct SpatialRecord {
  Hypervector vector;
};

struct HistogramVector {
  Hypervector vector;
  std::size_t window_index = 0;
};

// Tie streams: a spatial record is keyed by the absolute code index of its
// sampling point, a histogram vector by its window index.
TieRule SpatialTie(std::uint64_t seed, std::size_t sample_index) noexcept;
TieRule TemporalTie(std::uint64_t seed, std::size_t window_index) noexcept;

// S = majority_j bind(E_j, C_{codes[j]}). Throws DimensionMismatchError when
// codes.size() != n, std::out_of_range for a code >= 2^l.
SpatialRecord EncodeSpatial(std::span<const std::uint8_t> codes, const ItemMemory& im,
                            std::size_t sample_index);

// H = majority over exactly kWindowSamples records. Throws DimensionMismatchError
// on a wrong record count.
HistogramVector EncodeWindow(std::span<const SpatialRecord> records, std::uint64_t seed,
                             std::size_t window_index);

// Number of whole windows in a recording of `samples` samples at 512 Hz:
// floor((samples - l) / 256), zero when there are no codes.
std::size_t WindowCount(std::size_t samples, int code_length) noexcept;

// Codes of all electrodes, sample-major: frame t holds n codes.
class CodeFrames {
 public:
  CodeFrames() = default;
  CodeFrames(std::size_t n_electrodes, std::size_t frames)
      : n_(n_electrodes), codes_(n_electrodes * frames, 0) {}

  std::size_t NElectrodes() const noexcept { return n_; }
  std::size_t Frames() const noexcept { return n_ == 0 ? 0 : codes_.size() / n_; }

  std::span<const std::uint8_t> Frame(std::size_t t) const {
    return std::span<const std::uint8_t>(codes_).subspan(t * n_, n_);
  }
  std::span<const std::uint8_t> Frames(std::size_t first, std::size_t count) const {
    return std::span<const std::uint8_t>(codes_).subspan(first * n_, count * n_);
  }
  std::uint8_t& At(std::size_t t, std::size_t electrode) { return codes_[t * n_ + electrode]; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> codes_;
};

// Fused spatial + temporal bundling over bit-sliced counters. Output is
// bit-identical to EncodeSpatial followed by EncodeWindow.
class WindowEncoder {
 public:
  explicit WindowEncoder(const ItemMemory& im);

  // `frames` holds kWindowSamples frames of n codes; `first_sample` is the
  // absolute code index of the first frame (keys the spatial tie streams).
  HistogramVector Encode(std::span<const std::uint8_t> frames, std::size_t first_sample,
                         std::size_t window_index) const;

  // All whole windows of a recording, window w covering frames [256w, 256w+256).
  std::vector<HistogramVector> EncodeAll(const CodeFrames& frames) const;

  std::size_t NElectrodes() const noexcept { return n_; }
  std::size_t Dim() const noexcept { return dim_; }

 private:
  std::size_t dim_;
  std::size_t words_;
  std::size_t padded_words_;
  std::size_t n_;
  std::size_t code_count_;
  std::uint64_t seed_;
  // Item memory copied into block-padded rows.
  std::vector<std::uint64_t> code_rows_;
  std::vector<std::uint64_t> electrode_rows_;
};

// Diagnostic estimate of the relative code frequency inside a window:
// estimate_i = mean_j (1 - 2 * normHamming(H, bind(E_j, C_i))).
std::vector<double> ReconstructHistogram(const HistogramVector& h, const ItemMemory& im);

// Exact electrode-pooled code histogram of one window of frames.
std::vector<double> PooledHistogram(std::span<const std::uint8_t> frames, int code_length);

}  // namespace hdsz
