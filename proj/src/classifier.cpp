#include "hdsz/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "hdsz/binary_io.hpp"
#include "hdsz/error.hpp"
#include "hdsz/lbp.hpp"

namespace hdsz {

namespace {

TieRule PrototypeTie(std::uint64_t seed, Class c) {
  return TieRule{seed, TieTag(TieDomain::kPrototype, static_cast<std::uint64_t>(c))};
}

}  // namespace

AssociativeMemory::AssociativeMemory(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed), ictal_acc_(dim), interictal_acc_(dim) {}

AssociativeMemory AssociativeMemory::FromParts(std::uint64_t seed, Accumulator ictal_acc,
                                               Accumulator interictal_acc,
                                               const Hypervector& ictal_proto,
                                               const Hypervector& interictal_proto) {
  if (ictal_acc.Dim() != interictal_acc.Dim()) {
    throw DataError("class accumulators differ in dimension");
  }
  AssociativeMemory am(ictal_acc.Dim(), seed);
  am.ictal_acc_ = std::move(ictal_acc);
  am.interictal_acc_ = std::move(interictal_acc);
  am.Rethreshold();
  if (am.ictal_proto_ != ictal_proto || am.interictal_proto_ != interictal_proto) {
    throw DataError("stored prototypes do not match their accumulators");
  }
  return am;
}

void AssociativeMemory::TrainInterictal(std::span<const HistogramVector> span) {
  if (span.size() < kInterictalTrainingWindows) {
    throw TrainingFailure("interictal training needs " +
                          std::to_string(kInterictalTrainingWindows) + " windows (40 s), got " +
                          std::to_string(span.size()));
  }
  for (const HistogramVector& h : span.first(kInterictalTrainingWindows)) {
    interictal_acc_.Add(h.vector);
  }
  Rethreshold();
}

void AssociativeMemory::TrainIctal(std::span<const HistogramVector> span) {
  if (span.empty()) throw TrainingFailure("ictal training span is empty");
  for (const HistogramVector& h : span) ictal_acc_.Add(h.vector);
  Rethreshold();
}

void AssociativeMemory::Rethreshold() {
  if (!ictal_acc_.Empty()) ictal_proto_ = ictal_acc_.Threshold(PrototypeTie(seed_, Class::kIctal));
  if (!interictal_acc_.Empty()) {
    interictal_proto_ = interictal_acc_.Threshold(PrototypeTie(seed_, Class::kInterictal));
  }
}

Label LabelFromDistances(double distance_ictal, double distance_interictal) noexcept {
  Label label;
  label.distance_ictal = distance_ictal;
  label.distance_interictal = distance_interictal;
  label.value = distance_ictal < distance_interictal ? Class::kIctal : Class::kInterictal;
  return label;
}

Label AssociativeMemory::Classify(const Hypervector& h) const {
  if (!Trained()) throw std::logic_error("associative memory is not trained");
  return LabelFromDistances(NormalizedHamming(h, ictal_proto_),
                            NormalizedHamming(h, interictal_proto_));
}

double IctalTrainingSeconds(double seizure_seconds) noexcept {
  const double rule = std::min(std::max(10.0, seizure_seconds), 30.0);
  return std::min(rule, seizure_seconds);
}

std::size_t IctalTrainingWindows(double seizure_seconds) noexcept {
  const double seconds = IctalTrainingSeconds(seizure_seconds);
  if (seconds <= 0.0) return 0;
  // Guard against 14.9999... from sample-count conversions.
  return static_cast<std::size_t>(std::floor(seconds / kWindowSeconds + 1e-9));
}

WindowSpan InterictalTrainingSpan(std::size_t onset_sample, std::size_t total_windows) {
  const std::size_t first = (kWarmupSamples + kWindowSamples - 1) / kWindowSamples;
  const std::size_t usable = onset_sample / kWindowSamples;  // windows ending at or before onset
  const std::size_t available =
      std::min(usable, total_windows) > first ? std::min(usable, total_windows) - first : 0;
  if (available < kInterictalTrainingWindows) {
    throw TrainingFailure("interictal segment too short: " + std::to_string(available) +
                          " windows after warm-up, need " +
                          std::to_string(kInterictalTrainingWindows));
  }
  return WindowSpan{first, kInterictalTrainingWindows};
}

WindowSpan IctalTrainingSpan(std::size_t onset_sample, std::size_t offset_sample,
                             std::size_t total_windows) {
  if (offset_sample <= onset_sample) throw TrainingFailure("empty seizure segment");
  const std::size_t first =
      std::max((onset_sample + kWindowSamples - 1) / kWindowSamples,
               (kWarmupSamples + kWindowSamples - 1) / kWindowSamples);
  const std::size_t end = std::min(offset_sample / kWindowSamples, total_windows);
  const std::size_t available = end > first ? end - first : 0;
  const double seizure_seconds =
      static_cast<double>(offset_sample - onset_sample) / static_cast<double>(kTargetRate);
  const std::size_t count = std::min(available, IctalTrainingWindows(seizure_seconds));
  if (count == 0) throw TrainingFailure("no whole histogram window fits inside the seizure");
  return WindowSpan{first, count};
}

void WriteModel(std::ostream& out, const DetectionModel& model) {
  io::WriteMagic(out, "HDSZ");
  io::WriteLe<std::uint16_t>(out, kModelVersion);
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(model.hd.dim));
  io::WriteLe<std::uint16_t>(out, static_cast<std::uint16_t>(model.code_length));
  io::WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(model.n_electrodes));
  io::WriteLe<std::uint64_t>(out, model.hd.seed);
  io::WriteLe<std::uint16_t>(out, static_cast<std::uint16_t>(model.threshold));
  WriteHypervector(out, model.memory.IctalPrototype());
  WriteHypervector(out, model.memory.InterictalPrototype());
  WriteAccumulator(out, model.memory.IctalAccumulator());
  WriteAccumulator(out, model.memory.InterictalAccumulator());
}

DetectionModel ReadModel(std::istream& in) {
  io::ExpectMagic(in, "HDSZ");
  const auto version = io::ReadLe<std::uint16_t>(in, "model version");
  if (version != kModelVersion) {
    throw DataError("unsupported model version " + std::to_string(version));
  }
  DetectionModel model;
  model.hd.dim = io::ReadLe<std::uint32_t>(in, "model d");
  model.code_length = io::ReadLe<std::uint16_t>(in, "model l");
  model.n_electrodes = io::ReadLe<std::uint32_t>(in, "model n");
  model.hd.seed = io::ReadLe<std::uint64_t>(in, "model seed");
  model.threshold = io::ReadLe<std::uint16_t>(in, "model t_p");
  if (model.hd.dim < kWordBits) throw DataError("model d must be >= 64");
  if (model.code_length < 1 || model.code_length >= 7) throw DataError("model l out of range");
  if (model.n_electrodes < 1) throw DataError("model n must be >= 1");
  if (model.threshold < 1 || model.threshold > 10) throw DataError("model t_p out of [1, 10]");
  const Hypervector ictal_proto = ReadHypervector(in);
  const Hypervector interictal_proto = ReadHypervector(in);
  Accumulator ictal_acc = ReadAccumulator(in);
  Accumulator interictal_acc = ReadAccumulator(in);
  if (ictal_proto.Dim() != model.hd.dim || ictal_acc.Dim() != model.hd.dim) {
    throw DataError("model payload dimension does not match header d");
  }
  if (ictal_acc.Empty() || interictal_acc.Empty()) throw DataError("model is not trained");
  model.memory = AssociativeMemory::FromParts(model.hd.seed, std::move(ictal_acc),
                                              std::move(interictal_acc), ictal_proto,
                                              interictal_proto);
  return model;
}

void SaveModel(const std::filesystem::path& path, const DetectionModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open model file for writing: " + path.string());
  WriteModel(out, model);
  if (!out) throw DataError("failed writing model file: " + path.string());
}

DetectionModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path.string());
  return ReadModel(in);
}

}  // namespace hdsz
