#include "hdsz/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hdsz/binary_io.hpp"
#include "hdsz/error.hpp"

namespace hdsz {

void Recording::Validate() const {
  if (fs_in <= 0) throw DataError("fs_in: must be positive");
  if (n_electrodes < 1 || n_electrodes > kMaxElectrodes) {
    throw DataError("n_electrodes: must lie in [1, 1024], got " + std::to_string(n_electrodes));
  }
  if (n_samples == 0) throw DataError("n_samples: recording is empty");
  if (onset_idx == 0) throw DataError("onset_idx: must be > 0");
  if (onset_idx >= offset_idx) {
    throw DataError("onset_idx: must be < offset_idx (" + std::to_string(onset_idx) +
                    " >= " + std::to_string(offset_idx) + ")");
  }
  if (offset_idx > n_samples) throw DataError("offset_idx: beyond n_samples");
  if (samples.size() != n_electrodes * n_samples) {
    throw DataError("samples: expected n_electrodes * n_samples values");
  }
}

void WriteRecording(std::ostream& out, const Recording& rec) {
  rec.Validate();
  io::WriteMagic(out, "HDSR");
  io::WriteLe<std::uint16_t>(out, kRecordingVersion);
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(rec.fs_in));
  io::WriteLe<std::uint16_t>(out, static_cast<std::uint16_t>(rec.n_electrodes));
  io::WriteLe<std::uint64_t>(out, rec.n_samples);
  io::WriteLe<std::uint64_t>(out, rec.onset_idx);
  io::WriteLe<std::uint64_t>(out, rec.offset_idx);
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(rec.patient_id.size()));
  out.write(rec.patient_id.data(), static_cast<std::streamsize>(rec.patient_id.size()));
  std::vector<char> bytes(rec.samples.size() * 2);
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    const auto u = static_cast<std::uint16_t>(rec.samples[i]);
    bytes[2 * i] = static_cast<char>(u & 0xFFu);
    bytes[2 * i + 1] = static_cast<char>(u >> 8);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

namespace {

// Bytes left in a seekable stream, or -1.
std::streamoff Remaining(std::istream& in) {
  const auto here = in.tellg();
  if (here < 0) return -1;
  in.seekg(0, std::ios::end);
  const auto end = in.tellg();
  in.seekg(here);
  if (end < 0) return -1;
  return end - here;
}

}  // namespace

Recording ReadRecording(std::istream& in) {
  io::ExpectMagic(in, "HDSR");
  const auto version = io::ReadLe<std::uint16_t>(in, "version");
  if (version != kRecordingVersion) {
    throw DataError("version: unsupported HDSR version " + std::to_string(version));
  }
  Recording rec;
  rec.fs_in = static_cast<int>(io::ReadLe<std::uint32_t>(in, "fs_in"));
  rec.n_electrodes = io::ReadLe<std::uint16_t>(in, "n_electrodes");
  rec.n_samples = io::ReadLe<std::uint64_t>(in, "n_samples");
  rec.onset_idx = io::ReadLe<std::uint64_t>(in, "onset_idx");
  rec.offset_idx = io::ReadLe<std::uint64_t>(in, "offset_idx");
  const auto id_len = io::ReadLe<std::uint32_t>(in, "patient_id length");
  const std::streamoff left = Remaining(in);
  if (left >= 0 && static_cast<std::uint64_t>(left) < id_len) {
    throw DataError("truncated input while reading patient_id");
  }
  rec.patient_id.resize(id_len);
  in.read(rec.patient_id.data(), id_len);
  if (in.gcount() != static_cast<std::streamsize>(id_len)) {
    throw DataError("truncated input while reading patient_id");
  }
  if (rec.n_electrodes < 1 || rec.n_electrodes > kMaxElectrodes) {
    throw DataError("n_electrodes: must lie in [1, 1024], got " + std::to_string(rec.n_electrodes));
  }
  if (rec.n_samples > (std::uint64_t{1} << 40) / rec.n_electrodes) {
    throw DataError("n_samples: implausibly large");
  }
  const std::uint64_t payload = std::uint64_t{2} * rec.n_electrodes * rec.n_samples;
  const std::streamoff remaining = Remaining(in);
  if (remaining >= 0 && static_cast<std::uint64_t>(remaining) < payload) {
    throw DataError("truncated input while reading samples: need " + std::to_string(payload) +
                    " bytes, have " + std::to_string(remaining));
  }
  std::vector<char> bytes(payload);
  in.read(bytes.data(), static_cast<std::streamsize>(payload));
  if (static_cast<std::uint64_t>(in.gcount()) != payload) {
    throw DataError("truncated input while reading samples");
  }
  rec.samples.resize(rec.n_electrodes * rec.n_samples);
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    const auto lo = static_cast<std::uint8_t>(bytes[2 * i]);
    const auto hi = static_cast<std::uint8_t>(bytes[2 * i + 1]);
    rec.samples[i] = static_cast<std::int16_t>(static_cast<std::uint16_t>(lo | (hi << 8)));
  }
  rec.Validate();
  return rec;
}

void SaveRecording(const std::filesystem::path& path, const Recording& rec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open recording for writing: " + path.string());
  WriteRecording(out, rec);
  if (!out) throw DataError("failed writing recording: " + path.string());
}

Recording LoadRecording(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open recording: " + path.string());
  try {
    return ReadRecording(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void SynthParams::Validate() const {
  if (n_electrodes < 1 || n_electrodes > kMaxElectrodes) {
    throw std::invalid_argument("synthetic n_electrodes must lie in [1, 1024]");
  }
  if (seizure_len_s < 10.0) throw std::invalid_argument("synthetic seizures last >= 10 s");
  if (!(ictal_freq_hz >= 0.5 && ictal_freq_hz * 1.1 <= 150.0)) {
    throw std::invalid_argument("ictal frequency must stay inside the 0.5-150 Hz band");
  }
  if (!(asymmetry > 0.0 && asymmetry < 1.0)) throw std::invalid_argument("asymmetry in (0, 1)");
  if (!(noise_amp > 0.0)) throw std::invalid_argument("noise_amp must be positive");
  if (!(interictal_s > 0.0) || postictal_s < 0.0) {
    throw std::invalid_argument("segment durations must be positive");
  }
  if (!(involved_fraction > 0.0 && involved_fraction <= 1.0)) {
    throw std::invalid_argument("involved_fraction in (0, 1]");
  }
  if (fs < 512 || fs % 512 != 0) throw std::invalid_argument("fs must be a multiple of 512");
}

Recording SynthRecording(const SynthParams& p) {
  p.Validate();
  constexpr double kLeak = 0.999;
  constexpr double kWhiteShare = 0.5;
  constexpr double kIctalAmplitude = 400.0;  // in units of noise_amp
  constexpr double kIctalNoiseScale = 0.5;

  Recording rec;
  rec.patient_id = p.patient_id;
  rec.fs_in = p.fs;
  rec.n_electrodes = p.n_electrodes;
  rec.onset_idx = static_cast<std::size_t>(std::llround(p.interictal_s * p.fs));
  rec.offset_idx = rec.onset_idx + static_cast<std::size_t>(std::llround(p.seizure_len_s * p.fs));
  rec.n_samples = rec.offset_idx + static_cast<std::size_t>(std::llround(p.postictal_s * p.fs));
  rec.samples.resize(rec.n_electrodes * rec.n_samples);

  std::vector<std::size_t> order(p.n_electrodes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 patient_rng(p.patient_seed);
  std::shuffle(order.begin(), order.end(), patient_rng);
  const auto involved_count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(p.involved_fraction * p.n_electrodes)));
  std::vector<bool> involved(p.n_electrodes, false);
  for (std::size_t i = 0; i < involved_count; ++i) involved[order[i]] = true;

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  std::uniform_real_distribution<double> phase_dist(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double freq = p.ictal_freq_hz * jitter(rng);
  const double amplitude = kIctalAmplitude * p.noise_amp;

  for (std::size_t j = 0; j < p.n_electrodes; ++j) {
    const double phase0 = phase_dist(rng);
    double walk = 0.0;
    std::int16_t* out = rec.samples.data() + j * rec.n_samples;
    for (std::size_t t = 0; t < rec.n_samples; ++t) {
      walk = kLeak * walk + p.noise_amp * normal(rng);
      double noise = walk + kWhiteShare * p.noise_amp * normal(rng);
      double x = noise;
      if (involved[j] && t >= rec.onset_idx && t < rec.offset_idx) {
        const double phase = std::fmod(phase0 + freq * static_cast<double>(t) / p.fs, 1.0);
        const double ramp = phase < p.asymmetry ? phase / p.asymmetry
                                                : (1.0 - phase) / (1.0 - p.asymmetry);
        x = amplitude * (2.0 * ramp - 1.0) + kIctalNoiseScale * noise;
      }
      out[t] = static_cast<std::int16_t>(std::clamp(std::lround(x), -32768L, 32767L));
    }
  }
  return rec;
}

}  // namespace hdsz
