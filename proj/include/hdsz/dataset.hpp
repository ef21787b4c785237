#pragma once

// Annotated multi-electrode recordings: the native "HDSR v1" file format and a
// seeded synthetic iEEG generator.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace hdsz {

inline constexpr std::size_t kMaxElectrodes = 1024;

struct Recording {
  std::string patient_id;
  int fs_in = 512;
  std::size_t n_electrodes = 0;
  std::size_t n_samples = 0;
  std::size_t onset_idx = 0;
  std::size_t offset_idx = 0;
  // Channel-major: all samples of channel 0, then channel 1, ...
  std::vector<std::int16_t> samples;

  std::span<const std::int16_t> Channel(std::size_t electrode) const {
    return std::span<const std::int16_t>(samples).subspan(electrode * n_samples, n_samples);
  }
  double OnsetSeconds() const noexcept { return static_cast<double>(onset_idx) / fs_in; }
  double OffsetSeconds() const noexcept { return static_cast<double>(offset_idx) / fs_in; }
  double SeizureSeconds() const noexcept { return OffsetSeconds() - OnsetSeconds(); }

  // Throws DataError naming the first violated field.
  void Validate() const;

  bool operator==(const Recording&) const = default;
};

// HDSR v1, little-endian:
//   "HDSR" version:u16 fs_in:u32 n_electrodes:u16 n_samples:u64 onset_idx:u64
//   offset_idx:u64 patient_id_len:u32 patient_id[utf-8] samples:i16[n*T]
inline constexpr std::uint16_t kRecordingVersion = 1;

void WriteRecording(std::ostream& out, const Recording& rec);
Recording ReadRecording(std::istream& in);
void SaveRecording(const std::filesystem::path& path, const Recording& rec);
Recording LoadRecording(const std::filesystem::path& path);

struct SynthParams {
  std::string patient_id = "synthetic";
  std::size_t n_electrodes = 36;
  double seizure_len_s = 30.0;
  double ictal_freq_hz = 3.0;
  // Fraction of each ictal cycle spent rising; 0.5 is a symmetric triangle.
  double asymmetry = 0.2;
  // Standard deviation of the background noise innovations (ADC units).
  double noise_amp = 20.0;
  double interictal_s = 180.0;
  double postictal_s = 180.0;
  // Share of electrodes that carry the ictal rhythm.
  double involved_fraction = 0.75;
  int fs = 512;
  std::uint64_t seed = 1;
  // Selects the involved electrodes; recordings of one patient share it.
  std::uint64_t patient_seed = 0;

  // Throws std::invalid_argument on out-of-range parameters.
  void Validate() const;
};

// Background: leaky random walk plus a small white component, whose sample
// differences have nearly independent signs (flat LBP histogram). Seizure:
// skewed sawtooth at ictal_freq_hz (jittered +-10% per seed) plus half-scale
// noise on the involved electrodes. Deterministic in (seed, patient_seed).
Recording SynthRecording(const SynthParams& p);

}  // namespace hdsz
