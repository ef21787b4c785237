#pragma once

// Two-class associative memory (ictal / interictal prototypes), training-span
// selection, and the persisted detection model.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>

#include "hdsz/encoder.hpp"
#include "hdsz/hypervector.hpp"

namespace hdsz {

enum class Class : std::uint8_t { kInterictal = 0, kIctal = 1 };

struct Label {
  Class value = Class::kInterictal;
  double distance_ictal = 0.0;
  double distance_interictal = 0.0;

  bool IsIctal() const noexcept { return value == Class::kIctal; }
};

inline constexpr double kInterictalTrainingSeconds = 40.0;
inline constexpr std::size_t kInterictalTrainingWindows = 80;
// Filter transient excluded from training windows.
inline constexpr std::size_t kWarmupSamples = 512;

class AssociativeMemory {
 public:
  AssociativeMemory() = default;
  AssociativeMemory(std::size_t dim, std::uint64_t seed);

  // Restores a persisted memory; prototypes are recomputed from the
  // accumulators and must match `ictal_proto` / `interictal_proto`.
  static AssociativeMemory FromParts(std::uint64_t seed, Accumulator ictal_acc,
                                     Accumulator interictal_acc, const Hypervector& ictal_proto,
                                     const Hypervector& interictal_proto);

  // Adds the first 80 vectors of a 40 s interictal span. Throws TrainingFailure
  // on a shorter span.
  void TrainInterictal(std::span<const HistogramVector> span);
  // Adds every vector of an ictal training span (at least one).
  void TrainIctal(std::span<const HistogramVector> span);

  bool Trained() const noexcept { return !ictal_acc_.Empty() && !interictal_acc_.Empty(); }

  // Nearest prototype by Hamming distance, ties to interictal. Throws
  // std::logic_error when untrained.
  Label Classify(const Hypervector& h) const;

  std::size_t Dim() const noexcept { return dim_; }
  std::uint64_t Seed() const noexcept { return seed_; }
  const Accumulator& IctalAccumulator() const noexcept { return ictal_acc_; }
  const Accumulator& InterictalAccumulator() const noexcept { return interictal_acc_; }
  const Hypervector& IctalPrototype() const noexcept { return ictal_proto_; }
  const Hypervector& InterictalPrototype() const noexcept { return interictal_proto_; }

  bool operator==(const AssociativeMemory&) const = default;

 private:
  void Rethreshold();

  std::size_t dim_ = 0;
  std::uint64_t seed_ = 0;
  Accumulator ictal_acc_;
  Accumulator interictal_acc_;
  Hypervector ictal_proto_;
  Hypervector interictal_proto_;
};

// Label from precomputed normalized distances (ties -> interictal).
Label LabelFromDistances(double distance_ictal, double distance_interictal) noexcept;

// Length of the ictal training window: min(max(10 s, seizure), 30 s), clipped
// to the seizure itself.
double IctalTrainingSeconds(double seizure_seconds) noexcept;
std::size_t IctalTrainingWindows(double seizure_seconds) noexcept;

// A run of consecutive histogram windows.
struct WindowSpan {
  std::size_t first = 0;
  std::size_t count = 0;
  bool operator==(const WindowSpan&) const = default;
};

// Window w holds the codes of sampling points [256w, 256w + 256) at 512 Hz.
// Interictal span: the first 80 windows after the warm-up second that end at
// or before onset. Throws TrainingFailure when the interictal segment is too
// short.
WindowSpan InterictalTrainingSpan(std::size_t onset_sample, std::size_t total_windows);
// Ictal span: windows starting at or after onset and ending at or before
// offset, at most IctalTrainingWindows(offset - onset). Throws TrainingFailure
// when no window fits.
WindowSpan IctalTrainingSpan(std::size_t onset_sample, std::size_t offset_sample,
                             std::size_t total_windows);

// Everything needed to run detection on a new recording.
struct DetectionModel {
  HdConfig hd;
  int code_length = 6;
  std::size_t n_electrodes = 0;
  int threshold = 10;
  AssociativeMemory memory;

  bool operator==(const DetectionModel&) const = default;
};

// "HDSZ" model file, all little-endian:
//   magic[4] version:u16 d:u32 l:u16 n:u32 seed:u64 t_p:u16
//   ictal prototype, interictal prototype (serialized hypervectors)
//   ictal accumulator, interictal accumulator (d:u32 n_added:u32 counts:u32[d])
inline constexpr std::uint16_t kModelVersion = 1;

void WriteModel(std::ostream& out, const DetectionModel& model);
DetectionModel ReadModel(std::istream& in);
void SaveModel(const std::filesystem::path& path, const DetectionModel& model);
DetectionModel LoadModel(const std::filesystem::path& path);

}  // namespace hdsz
