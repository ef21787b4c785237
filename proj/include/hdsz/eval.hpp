#pragma once

// End-to-end pipeline (recording -> codes -> histogram vectors -> labels ->
// decisions), training, per-seizure scoring and the two evaluation protocols:
// k-fold over chronological recordings, and train-on-first-m.

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hdsz/classifier.hpp"
#include "hdsz/dataset.hpp"
#include "hdsz/encoder.hpp"
#include "hdsz/lbp.hpp"
#include "hdsz/postprocess.hpp"

namespace hdsz {

struct PipelineConfig {
  HdConfig hd;
  LbpConfig lbp;
  std::size_t vote_labels = kVoteLabels;
};

// Preprocessed LBP codes of every electrode, sample-major at 512 Hz.
CodeFrames ComputeCodes(const Recording& rec, const LbpConfig& cfg);

// A recording reduced to its histogram-vector stream plus annotations.
struct EncodedRecording {
  std::string patient_id;
  std::size_t n_electrodes = 0;
  std::vector<HistogramVector> windows;
  std::vector<double> window_times_s;  // completion time of each window
  std::size_t onset_sample = 0;        // 512 Hz sample indices
  std::size_t offset_sample = 0;
  double onset_s = 0.0;
  double offset_s = 0.0;
};

// Completion time of window w: its last code needs sample 256(w+1) + l - 1.
double WindowTime(std::size_t window, int code_length) noexcept;

EncodedRecording EncodeRecording(const Recording& rec, const ItemMemory& im,
                                 const LbpConfig& cfg);

// Trains both prototypes on every recording (interictal + ictal spans) and
// fits t_p as the minimum of the per-seizure thresholds. Recordings must share
// n; throws TrainingFailure (with the patient id) when fitting fails.
DetectionModel TrainModel(std::span<const EncodedRecording* const> recordings,
                          const PipelineConfig& cfg);

std::vector<Label> ClassifyAll(const EncodedRecording& rec, const DetectionModel& model);

// Outcome of one test seizure, computed from the decision log and the
// annotations only.
struct SeizureOutcome {
  bool detected = false;
  std::optional<double> delay_s;  // first positive decision in [onset, offset] - onset
  std::size_t negative_decisions = 0;        // decisions timed outside [onset, offset]
  std::size_t false_positive_decisions = 0;  // positive ones not continuing an in-seizure alarm
  std::size_t false_alarms = 0;              // alarms starting outside [onset, offset]
};

SeizureOutcome ScoreDecisions(std::span<const Decision> decisions, double onset_s,
                              double offset_s, std::size_t clear_labels = kVoteLabels);

struct DetectionRun {
  std::vector<Label> labels;
  std::vector<Decision> decisions;
  SeizureOutcome outcome;
};

DetectionRun RunDetection(const EncodedRecording& rec, const DetectionModel& model,
                          std::size_t vote_labels = kVoteLabels);

struct TestResult {
  std::string recording;  // patient_id of the recording plus its index
  std::size_t index = 0;  // chronological index within the patient
  SeizureOutcome outcome;
};

struct FoldResult {
  std::size_t fold = 0;
  std::vector<std::size_t> trained;
  int threshold = 0;
  std::vector<TestResult> tests;
};

struct EvalReport {
  std::string patient_id;
  std::string protocol;
  std::size_t n_electrodes = 0;
  std::size_t seizures = 0;
  std::size_t trained = 0;  // m
  // k-fold: number of folds, N - m + 1. first-m: number of test seizures.
  std::size_t k = 0;
  std::vector<FoldResult> folds;
  double sensitivity_pct = 0.0;
  double specificity_pct = 0.0;
  std::optional<double> mean_delay_s;
  // Mean delay minus the vote-window fill (vote_labels * 0.5 s).
  std::optional<double> mean_delay_minus_fill_s;
  std::size_t false_alarms = 0;
};

// Pools all folds: detected / tested, correct negatives / negatives, mean
// delay over detected seizures.
void PoolMetrics(EvalReport& report, std::size_t vote_labels = kVoteLabels);

// recordings: one patient's encoded recordings in chronological order.
// k-fold: fold f trains on recordings [f, f + m) and tests all the others.
// Both throw std::invalid_argument unless N > m >= 1.
EvalReport ProtocolKFold(std::span<const EncodedRecording> recordings, std::size_t m,
                         const PipelineConfig& cfg);
EvalReport ProtocolFirstM(std::span<const EncodedRecording> recordings, std::size_t m,
                          const PipelineConfig& cfg);

// Delimited table mirroring the published result tables, one row per report.
void WriteReportTable(std::ostream& out, std::span<const EvalReport> reports);
// Machine-readable variant with per-fold and per-seizure detail.
void WriteReportJson(std::ostream& out, std::span<const EvalReport> reports);

struct BenchResult {
  std::size_t n_electrodes = 0;
  std::size_t dim = 0;
  std::size_t windows = 0;
  double seconds = 0.0;
  double windows_per_second = 0.0;
  double realtime_factor = 0.0;  // signal seconds processed per wall second
  double ms_per_window = 0.0;
};

// Times preprocessing + LBP + encoding + classification of `signal_seconds`
// of synthetic signal on the calling thread.
BenchResult BenchmarkPipeline(std::size_t n_electrodes, std::size_t dim, double signal_seconds,
                              std::uint64_t seed);

}  // namespace hdsz
