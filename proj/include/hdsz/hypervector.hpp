#pragma once

// Bit-packed dense binary hypervectors and the algebra used by the encoder and
// the associative memory: random atomic vectors, XOR binding, counter-based
// bundling (accumulate + majority threshold) and Hamming distance.
//
// Layout: component i lives in word i / 64 at bit i % 64. Words beyond the
// last component ("pad bits") are always zero, so any d >= 64 is allowed and
// word-wise popcounts never need masking on the read side.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

namespace hdsz {

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t WordsFor(std::size_t dim) noexcept {
  return (dim + kWordBits - 1) / kWordBits;
}

// Mask of the valid bits in the last word of a dim-bit vector.
constexpr std::uint64_t TailMask(std::size_t dim) noexcept {
  const std::size_t rem = dim % kWordBits;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

// SplitMix64 finalizer; the building block of every deterministic stream.
constexpr std::uint64_t Mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based stream keyed by (seed, key): word w is Mix64(StreamKey + w).
constexpr std::uint64_t StreamKey(std::uint64_t seed, std::uint64_t key) noexcept {
  return Mix64(Mix64(seed) ^ key);
}

constexpr std::uint64_t StreamWord(std::uint64_t seed, std::uint64_t key,
                                   std::uint64_t word) noexcept {
  return Mix64(StreamKey(seed, key) + word);
}

struct HdConfig {
  std::size_t dim = 10000;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when dim < 64.
  void Validate() const;
  std::size_t Words() const noexcept { return WordsFor(dim); }
  bool operator==(const HdConfig&) const = default;
};

class Hypervector {
 public:
  Hypervector() = default;
  // All-zero vector of `dim` components.
  explicit Hypervector(std::size_t dim);

  // Adopts packed words; throws DataError if the count is wrong or a pad bit
  // is set.
  static Hypervector FromWords(std::size_t dim, std::vector<std::uint64_t> words);

  std::size_t Dim() const noexcept { return dim_; }
  std::size_t WordCount() const noexcept { return words_.size(); }

  bool Get(std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void Set(std::size_t i, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= bit;
    } else {
      words_[i / kWordBits] &= ~bit;
    }
  }

  std::span<const std::uint64_t> Words() const noexcept { return words_; }
  // Callers writing through this span must keep pad bits zero.
  std::span<std::uint64_t> MutableWords() noexcept { return words_; }

  std::size_t PopCount() const noexcept;

  bool operator==(const Hypervector&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> words_;
};

// Atomic vector for `symbol`: i.i.d. fair bits drawn from the stream keyed by
// (cfg.seed, symbol). Same inputs always give the same vector.
Hypervector RandomHypervector(const HdConfig& cfg, std::uint64_t symbol);

Hypervector Bind(const Hypervector& a, const Hypervector& b);
Hypervector Complement(const Hypervector& a);
std::size_t Hamming(const Hypervector& a, const Hypervector& b);
double NormalizedHamming(const Hypervector& a, const Hypervector& b);

// Source of tie-breaking bits for majority thresholds. Bit i of the tie vector
// is bit i % 64 of Word(i / 64); the stream is separate from atomic vectors.
struct TieRule {
  std::uint64_t seed = 0;
  std::uint64_t tag = 0;

  static constexpr std::uint64_t kSalt = 0x7A1E5B3C0FFEE000ULL;

  std::uint64_t Key() const noexcept { return StreamKey(seed ^ kSalt, tag); }
  std::uint64_t Word(std::size_t word) const noexcept { return Mix64(Key() + word); }
};

// Tag namespaces for tie streams; the low bits carry an ordinal (sample,
// window or class index).
enum class TieDomain : std::uint64_t {
  kSpatial = 1,
  kTemporal = 2,
  kPrototype = 3,
  kGeneric = 4,
};

constexpr std::uint64_t TieTag(TieDomain domain, std::uint64_t ordinal) noexcept {
  return (static_cast<std::uint64_t>(domain) << 56) ^ ordinal;
}

// Per-component 32-bit counters plus the number of vectors added.
class Accumulator {
 public:
  Accumulator() = default;
  explicit Accumulator(std::size_t dim);

  // Restores a serialized accumulator; throws DataError if any count exceeds
  // n_added.
  static Accumulator FromCounts(std::vector<std::uint32_t> counts, std::uint32_t n_added);

  void Add(const Hypervector& v);
  // Componentwise sum of two accumulators of the same dimension.
  void Merge(const Accumulator& other);

  // Majority: 1 if count > n/2, 0 if count < n/2, tie bit on exact ties.
  // Throws std::logic_error on an empty accumulator.
  Hypervector Threshold(const TieRule& tie) const;

  std::size_t Dim() const noexcept { return counts_.size(); }
  std::uint32_t NAdded() const noexcept { return n_added_; }
  std::span<const std::uint32_t> Counts() const noexcept { return counts_; }
  bool Empty() const noexcept { return n_added_ == 0; }

  bool operator==(const Accumulator&) const = default;

 private:
  std::vector<std::uint32_t> counts_;
  std::uint32_t n_added_ = 0;
};

// Majority bundle of `inputs` (at least one) with the given tie stream.
Hypervector Bundle(std::span<const Hypervector> inputs, const TieRule& tie);

// Serialized form: d as u32 LE, then ceil(d/64) u64 LE words, pad bits zero.
void WriteHypervector(std::ostream& out, const Hypervector& v);
Hypervector ReadHypervector(std::istream& in);

void WriteAccumulator(std::ostream& out, const Accumulator& acc);
Accumulator ReadAccumulator(std::istream& in);

}  // namespace hdsz
