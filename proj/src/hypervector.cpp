#include "hdsz/hypervector.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "hdsz/binary_io.hpp"
#include "hdsz/error.hpp"

namespace hdsz {

namespace {

void RequireSameDim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatchError(std::string(what) + ": dimension " + std::to_string(a) +
                                 " vs " + std::to_string(b));
  }
}

}  // namespace

void HdConfig::Validate() const {
  if (dim < kWordBits) {
    throw std::invalid_argument("hypervector dimension must be >= 64, got " +
                                std::to_string(dim));
  }
}

Hypervector::Hypervector(std::size_t dim) : dim_(dim), words_(WordsFor(dim), 0) {}

Hypervector Hypervector::FromWords(std::size_t dim, std::vector<std::uint64_t> words) {
  if (words.size() != WordsFor(dim)) {
    throw DataError("hypervector of dimension " + std::to_string(dim) + " needs " +
                    std::to_string(WordsFor(dim)) + " words, got " +
                    std::to_string(words.size()));
  }
  if (!words.empty() && (words.back() & ~TailMask(dim)) != 0) {
    throw DataError("hypervector pad bits must be zero");
  }
  Hypervector v;
  v.dim_ = dim;
  v.words_ = std::move(words);
  return v;
}

std::size_t Hypervector::PopCount() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

Hypervector RandomHypervector(const HdConfig& cfg, std::uint64_t symbol) {
  cfg.Validate();
  Hypervector v(cfg.dim);
  auto words = v.MutableWords();
  for (std::size_t w = 0; w < words.size(); ++w) {
    words[w] = StreamWord(cfg.seed, symbol, w);
  }
  words.back() &= TailMask(cfg.dim);
  return v;
}

Hypervector Bind(const Hypervector& a, const Hypervector& b) {
  RequireSameDim(a.Dim(), b.Dim(), "bind");
  Hypervector out(a.Dim());
  auto dst = out.MutableWords();
  auto wa = a.Words();
  auto wb = b.Words();
  for (std::size_t w = 0; w < dst.size(); ++w) dst[w] = wa[w] ^ wb[w];
  return out;
}

Hypervector Complement(const Hypervector& a) {
  Hypervector out(a.Dim());
  auto dst = out.MutableWords();
  auto src = a.Words();
  for (std::size_t w = 0; w < dst.size(); ++w) dst[w] = ~src[w];
  if (!dst.empty()) dst.back() &= TailMask(a.Dim());
  return out;
}

std::size_t Hamming(const Hypervector& a, const Hypervector& b) {
  RequireSameDim(a.Dim(), b.Dim(), "hamming");
  auto wa = a.Words();
  auto wb = b.Words();
  std::size_t total = 0;
  for (std::size_t w = 0; w < wa.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
  }
  return total;
}

double NormalizedHamming(const Hypervector& a, const Hypervector& b) {
  return static_cast<double>(Hamming(a, b)) / static_cast<double>(a.Dim());
}

Accumulator::Accumulator(std::size_t dim) : counts_(dim, 0) {}

Accumulator Accumulator::FromCounts(std::vector<std::uint32_t> counts,
                                    std::uint32_t n_added) {
  for (std::uint32_t c : counts) {
    if (c > n_added) throw DataError("accumulator count exceeds n_added");
  }
  Accumulator acc;
  acc.counts_ = std::move(counts);
  acc.n_added_ = n_added;
  return acc;
}

void Accumulator::Add(const Hypervector& v) {
  RequireSameDim(counts_.size(), v.Dim(), "accumulate");
  auto words = v.Words();
  const std::size_t dim = counts_.size();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    const std::size_t base = w * kWordBits;
    const std::size_t limit = std::min(kWordBits, dim - base);
    for (std::size_t b = 0; b < limit; ++b) {
      counts_[base + b] += static_cast<std::uint32_t>((bits >> b) & 1U);
    }
  }
  ++n_added_;
}

void Accumulator::Merge(const Accumulator& other) {
  RequireSameDim(counts_.size(), other.counts_.size(), "merge");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  n_added_ += other.n_added_;
}

Hypervector Accumulator::Threshold(const TieRule& tie) const {
  if (n_added_ == 0) throw std::logic_error("cannot threshold an empty accumulator");
  const std::size_t dim = counts_.size();
  Hypervector out(dim);
  auto words = out.MutableWords();
  // count > n/2  <=>  2*count > n, exact tie only when 2*count == n.
  const std::uint64_t n = n_added_;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::size_t base = w * kWordBits;
    const std::size_t limit = std::min(kWordBits, dim - base);
    std::uint64_t gt = 0;
    std::uint64_t eq = 0;
    for (std::size_t b = 0; b < limit; ++b) {
      const std::uint64_t twice = 2 * static_cast<std::uint64_t>(counts_[base + b]);
      gt |= static_cast<std::uint64_t>(twice > n) << b;
      eq |= static_cast<std::uint64_t>(twice == n) << b;
    }
    words[w] = gt | (eq != 0 ? (eq & tie.Word(w)) : 0);
  }
  return out;
}

Hypervector Bundle(std::span<const Hypervector> inputs, const TieRule& tie) {
  if (inputs.empty()) throw std::logic_error("cannot bundle zero vectors");
  Accumulator acc(inputs.front().Dim());
  for (const Hypervector& v : inputs) acc.Add(v);
  return acc.Threshold(tie);
}

void WriteHypervector(std::ostream& out, const Hypervector& v) {
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(v.Dim()));
  for (std::uint64_t w : v.Words()) io::WriteLe<std::uint64_t>(out, w);
}

Hypervector ReadHypervector(std::istream& in) {
  const auto dim = io::ReadLe<std::uint32_t>(in, "hypervector dimension");
  if (dim < kWordBits) throw DataError("hypervector dimension must be >= 64");
  std::vector<std::uint64_t> words(WordsFor(dim));
  for (auto& w : words) w = io::ReadLe<std::uint64_t>(in, "hypervector words");
  return Hypervector::FromWords(dim, std::move(words));
}

void WriteAccumulator(std::ostream& out, const Accumulator& acc) {
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(acc.Dim()));
  io::WriteLe<std::uint32_t>(out, acc.NAdded());
  for (std::uint32_t c : acc.Counts()) io::WriteLe<std::uint32_t>(out, c);
}

Accumulator ReadAccumulator(std::istream& in) {
  const auto dim = io::ReadLe<std::uint32_t>(in, "accumulator dimension");
  const auto n_added = io::ReadLe<std::uint32_t>(in, "accumulator n_added");
  std::vector<std::uint32_t> counts(dim);
  for (auto& c : counts) c = io::ReadLe<std::uint32_t>(in, "accumulator counts");
  return Accumulator::FromCounts(std::move(counts), n_added);
}

}  // namespace hdsz
