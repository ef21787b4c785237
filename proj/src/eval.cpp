#include "hdsz/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

#include "hdsz/error.hpp"
#include "hdsz/parallel.hpp"
#include "json.hpp"

namespace hdsz {

namespace {

std::vector<std::uint8_t> ChannelCodes(std::span<const std::int16_t> raw, int fs_in,
                                       const LbpConfig& cfg) {
  return LbpStream(Preprocess(raw, fs_in, cfg), cfg);
}

CodeFrames EmptyFrames(const Recording& rec, const LbpConfig& cfg, std::size_t* frames_out) {
  const int ratio = DecimationRatio(rec.fs_in, cfg);
  const std::size_t decimated = (rec.n_samples + ratio - 1) / ratio;
  const auto l = static_cast<std::size_t>(cfg.code_length);
  if (decimated < l + 1) throw DataError("recording too short for one LBP code");
  *frames_out = decimated - l;
  return CodeFrames(rec.n_electrodes, *frames_out);
}

std::string Fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

}  // namespace

CodeFrames ComputeCodes(const Recording& rec, const LbpConfig& cfg) {
  cfg.Validate();
  std::size_t frames = 0;
  CodeFrames out = EmptyFrames(rec, cfg, &frames);
  ParallelFor(rec.n_electrodes, [&](std::size_t j) {
    const auto codes = ChannelCodes(rec.Channel(j), rec.fs_in, cfg);
    for (std::size_t t = 0; t < frames; ++t) out.At(t, j) = codes[t];
  });
  return out;
}

double WindowTime(std::size_t window, int code_length) noexcept {
  return static_cast<double>((window + 1) * kWindowSamples + static_cast<std::size_t>(code_length)) /
         static_cast<double>(kTargetRate);
}

EncodedRecording EncodeRecording(const Recording& rec, const ItemMemory& im,
                                 const LbpConfig& cfg) {
  if (im.NElectrodes() != rec.n_electrodes) {
    throw DimensionMismatchError("recording " + rec.patient_id + " has " +
                                 std::to_string(rec.n_electrodes) + " electrodes, model has " +
                                 std::to_string(im.NElectrodes()));
  }
  if (im.CodeLength() != cfg.code_length) {
    throw DimensionMismatchError("item memory and LBP config disagree on code length");
  }
  const CodeFrames frames = ComputeCodes(rec, cfg);
  const WindowEncoder encoder(im);
  const std::size_t windows = frames.Frames() / kWindowSamples;

  EncodedRecording out;
  out.patient_id = rec.patient_id;
  out.n_electrodes = rec.n_electrodes;
  out.windows.resize(windows);
  ParallelFor(windows, [&](std::size_t w) {
    out.windows[w] =
        encoder.Encode(frames.Frames(w * kWindowSamples, kWindowSamples), w * kWindowSamples, w);
  });
  out.window_times_s.reserve(windows);
  for (std::size_t w = 0; w < windows; ++w) {
    out.window_times_s.push_back(WindowTime(w, cfg.code_length));
  }
  const auto ratio = static_cast<std::size_t>(DecimationRatio(rec.fs_in, cfg));
  out.onset_sample = (rec.onset_idx + ratio - 1) / ratio;
  out.offset_sample = rec.offset_idx / ratio;
  out.onset_s = rec.OnsetSeconds();
  out.offset_s = rec.OffsetSeconds();
  return out;
}

std::vector<Label> ClassifyAll(const EncodedRecording& rec, const DetectionModel& model) {
  if (rec.n_electrodes != model.n_electrodes) {
    throw DimensionMismatchError("recording " + rec.patient_id + " has " +
                                 std::to_string(rec.n_electrodes) + " electrodes, model has " +
                                 std::to_string(model.n_electrodes));
  }
  std::vector<Label> labels;
  labels.reserve(rec.windows.size());
  for (const HistogramVector& h : rec.windows) labels.push_back(model.memory.Classify(h.vector));
  return labels;
}

DetectionModel TrainModel(std::span<const EncodedRecording* const> recordings,
                          const PipelineConfig& cfg) {
  if (recordings.empty()) throw std::invalid_argument("training needs at least one recording");
  DetectionModel model;
  model.hd = cfg.hd;
  model.code_length = cfg.lbp.code_length;
  model.n_electrodes = recordings.front()->n_electrodes;
  model.memory = AssociativeMemory(cfg.hd.dim, cfg.hd.seed);

  for (const EncodedRecording* rec : recordings) {
    if (rec->n_electrodes != model.n_electrodes) {
      throw DimensionMismatchError("training recordings disagree on electrode count");
    }
    if (!rec->windows.empty() && rec->windows.front().vector.Dim() != cfg.hd.dim) {
      throw DimensionMismatchError("encoded recording dimension differs from the model");
    }
    try {
      const std::span<const HistogramVector> all(rec->windows);
      const WindowSpan inter = InterictalTrainingSpan(rec->onset_sample, all.size());
      const WindowSpan ictal =
          IctalTrainingSpan(rec->onset_sample, rec->offset_sample, all.size());
      model.memory.TrainInterictal(all.subspan(inter.first, inter.count));
      model.memory.TrainIctal(all.subspan(ictal.first, ictal.count));
    } catch (const TrainingFailure& e) {
      throw TrainingFailure("patient " + rec->patient_id + ": " + e.what());
    }
  }

  std::vector<int> thresholds;
  const VoteConfig vote{cfg.vote_labels, 1};
  for (const EncodedRecording* rec : recordings) {
    const auto labels = ClassifyAll(*rec, model);
    const auto decisions = VoteStream(labels, rec->window_times_s, vote);
    try {
      thresholds.push_back(FitThreshold(decisions, rec->onset_s, rec->offset_s));
    } catch (const TrainingFailure& e) {
      throw TrainingFailure("patient " + rec->patient_id + ": " + e.what());
    }
  }
  model.threshold = std::min(CombineThresholds(thresholds), static_cast<int>(cfg.vote_labels));
  return model;
}

SeizureOutcome ScoreDecisions(std::span<const Decision> decisions, double onset_s,
                              double offset_s, std::size_t clear_labels) {
  const auto inside = [&](double t) { return t >= onset_s && t <= offset_s; };
  const auto alarms = Alarms(decisions, clear_labels);
  // Alarm start time for every positive decision.
  std::vector<double> episode_start(decisions.size(), 0.0);
  for (const Alarm& a : alarms) {
    for (std::size_t i = a.first_decision; i <= a.last_decision; ++i) episode_start[i] = a.time_s;
  }

  SeizureOutcome out;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const Decision& d = decisions[i];
    if (inside(d.time_s)) {
      if (d.is_seizure && !out.detected) {
        out.detected = true;
        out.delay_s = d.time_s - onset_s;
      }
      continue;
    }
    ++out.negative_decisions;
    if (d.is_seizure && !inside(episode_start[i])) ++out.false_positive_decisions;
  }
  out.false_alarms = static_cast<std::size_t>(
      std::ranges::count_if(alarms, [&](const Alarm& a) { return !inside(a.time_s); }));
  return out;
}

DetectionRun RunDetection(const EncodedRecording& rec, const DetectionModel& model,
                          std::size_t vote_labels) {
  DetectionRun run;
  run.labels = ClassifyAll(rec, model);
  run.decisions = VoteStream(run.labels, rec.window_times_s, VoteConfig{vote_labels, model.threshold});
  run.outcome = ScoreDecisions(run.decisions, rec.onset_s, rec.offset_s, vote_labels);
  return run;
}

void PoolMetrics(EvalReport& report, std::size_t vote_labels) {
  std::size_t tested = 0;
  std::size_t detected = 0;
  std::size_t negatives = 0;
  std::size_t false_positives = 0;
  double delay_sum = 0.0;
  report.false_alarms = 0;
  for (const FoldResult& fold : report.folds) {
    for (const TestResult& t : fold.tests) {
      ++tested;
      negatives += t.outcome.negative_decisions;
      false_positives += t.outcome.false_positive_decisions;
      report.false_alarms += t.outcome.false_alarms;
      if (t.outcome.detected) {
        ++detected;
        delay_sum += *t.outcome.delay_s;
      }
    }
  }
  report.sensitivity_pct = tested == 0 ? 0.0 : 100.0 * detected / tested;
  report.specificity_pct =
      negatives == 0 ? 100.0 : 100.0 * (negatives - false_positives) / negatives;
  report.mean_delay_s.reset();
  report.mean_delay_minus_fill_s.reset();
  if (detected > 0) {
    report.mean_delay_s = delay_sum / detected;
    report.mean_delay_minus_fill_s =
        *report.mean_delay_s - static_cast<double>(vote_labels) * kWindowSeconds;
  }
}

namespace {

EvalReport RunFolds(std::span<const EncodedRecording> recordings, std::size_t m,
                    const PipelineConfig& cfg, std::vector<std::vector<std::size_t>> train_sets,
                    std::string protocol, std::size_t k) {
  const std::size_t n = recordings.size();
  EvalReport report;
  report.patient_id = recordings.front().patient_id;
  report.protocol = std::move(protocol);
  report.n_electrodes = recordings.front().n_electrodes;
  report.seizures = n;
  report.trained = m;
  report.k = k;
  report.folds.resize(train_sets.size());

  ParallelFor(train_sets.size(), [&](std::size_t f) {
    FoldResult& fold = report.folds[f];
    fold.fold = f;
    fold.trained = train_sets[f];
    std::vector<const EncodedRecording*> train;
    for (std::size_t i : fold.trained) train.push_back(&recordings[i]);
    const DetectionModel model = TrainModel(train, cfg);
    fold.threshold = model.threshold;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::ranges::find(fold.trained, i) != fold.trained.end()) continue;
      const DetectionRun run = RunDetection(recordings[i], model, cfg.vote_labels);
      fold.tests.push_back(TestResult{recordings[i].patient_id + "#" + std::to_string(i), i,
                                      run.outcome});
    }
  });
  PoolMetrics(report, cfg.vote_labels);
  return report;
}

void RequireSplit(std::size_t n, std::size_t m) {
  if (m < 1 || n <= m) {
    throw std::invalid_argument("protocol needs N > m >= 1 (N = " + std::to_string(n) +
                                ", m = " + std::to_string(m) + ")");
  }
}

}  // namespace

EvalReport ProtocolKFold(std::span<const EncodedRecording> recordings, std::size_t m,
                         const PipelineConfig& cfg) {
  const std::size_t n = recordings.size();
  RequireSplit(n, m);
  // Contiguous chronological training blocks, N - m + 1 folds.
  std::vector<std::vector<std::size_t>> sets(n - m + 1);
  for (std::size_t f = 0; f < sets.size(); ++f) {
    for (std::size_t i = 0; i < m; ++i) sets[f].push_back(f + i);
  }
  const std::size_t k = sets.size();
  return RunFolds(recordings, m, cfg, std::move(sets), "kfold", k);
}

EvalReport ProtocolFirstM(std::span<const EncodedRecording> recordings, std::size_t m,
                          const PipelineConfig& cfg) {
  const std::size_t n = recordings.size();
  RequireSplit(n, m);
  std::vector<std::size_t> first(m);
  for (std::size_t i = 0; i < m; ++i) first[i] = i;
  return RunFolds(recordings, m, cfg, {first}, "first-m", n - m);
}

void WriteReportTable(std::ostream& out, std::span<const EvalReport> reports) {
  out << "ID,electrodes,seizures,trained,k,mean_delay_s,specificity_pct,sensitivity_pct,"
         "mean_delay_minus_fill_s,t_p,false_alarms\n";
  for (const EvalReport& r : reports) {
    std::string thresholds;
    for (const FoldResult& f : r.folds) {
      if (!thresholds.empty()) thresholds += ';';
      thresholds += std::to_string(f.threshold);
    }
    out << r.patient_id << ',' << r.n_electrodes << ',' << r.seizures << ',' << r.trained << ','
        << r.k << ',' << (r.mean_delay_s ? Fixed(*r.mean_delay_s, 2) : "NA") << ','
        << Fixed(r.specificity_pct, 2) << ',' << Fixed(r.sensitivity_pct, 2) << ','
        << (r.mean_delay_minus_fill_s ? Fixed(*r.mean_delay_minus_fill_s, 2) : "NA") << ','
        << thresholds << ',' << r.false_alarms << '\n';
  }
}

void WriteReportJson(std::ostream& out, std::span<const EvalReport> reports) {
  using Json = nlohmann::ordered_json;
  Json all = Json::array();
  for (const EvalReport& r : reports) {
    Json j;
    j["id"] = r.patient_id;
    j["protocol"] = r.protocol;
    j["electrodes"] = r.n_electrodes;
    j["seizures"] = r.seizures;
    j["trained"] = r.trained;
    j["k"] = r.k;
    j["sensitivity_pct"] = r.sensitivity_pct;
    j["specificity_pct"] = r.specificity_pct;
    j["mean_delay_s"] = r.mean_delay_s ? Json(*r.mean_delay_s) : Json(nullptr);
    j["mean_delay_minus_fill_s"] =
        r.mean_delay_minus_fill_s ? Json(*r.mean_delay_minus_fill_s) : Json(nullptr);
    j["false_alarms"] = r.false_alarms;
    Json folds = Json::array();
    for (const FoldResult& f : r.folds) {
      Json jf;
      jf["fold"] = f.fold;
      jf["trained"] = f.trained;
      jf["t_p"] = f.threshold;
      Json tests = Json::array();
      for (const TestResult& t : f.tests) {
        Json jt;
        jt["recording"] = t.recording;
        jt["index"] = t.index;
        jt["detected"] = t.outcome.detected;
        jt["delay_s"] = t.outcome.delay_s ? Json(*t.outcome.delay_s) : Json(nullptr);
        jt["negative_decisions"] = t.outcome.negative_decisions;
        jt["false_positive_decisions"] = t.outcome.false_positive_decisions;
        jt["false_alarms"] = t.outcome.false_alarms;
        tests.push_back(std::move(jt));
      }
      jf["tests"] = std::move(tests);
      folds.push_back(std::move(jf));
    }
    j["folds"] = std::move(folds);
    all.push_back(std::move(j));
  }
  out << all.dump(2) << '\n';
}

BenchResult BenchmarkPipeline(std::size_t n_electrodes, std::size_t dim, double signal_seconds,
                              std::uint64_t seed) {
  const LbpConfig lbp;
  Recording rec;
  rec.patient_id = "bench";
  rec.fs_in = kTargetRate;
  rec.n_electrodes = n_electrodes;
  rec.n_samples = static_cast<std::size_t>(signal_seconds * kTargetRate);
  rec.onset_idx = 1;
  rec.offset_idx = 2;
  rec.samples.resize(rec.n_electrodes * rec.n_samples);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 20.0);
  for (std::size_t j = 0; j < n_electrodes; ++j) {
    double walk = 0.0;
    for (std::size_t t = 0; t < rec.n_samples; ++t) {
      walk = 0.999 * walk + normal(rng);
      rec.samples[j * rec.n_samples + t] = static_cast<std::int16_t>(std::lround(walk));
    }
  }
  const ItemMemory im(HdConfig{dim, seed}, lbp.code_length, n_electrodes);
  const WindowEncoder encoder(im);

  // Prototypes only need to exist; their content does not change the cost.
  AssociativeMemory am(dim, seed);
  {
    std::vector<HistogramVector> seedvecs(kInterictalTrainingWindows,
                                          HistogramVector{RandomHypervector(im.Config(), 7), 0});
    am.TrainInterictal(seedvecs);
    am.TrainIctal(std::span(seedvecs).first(1));
  }

  const auto start = std::chrono::steady_clock::now();
  std::size_t frames = 0;
  CodeFrames codes = EmptyFrames(rec, lbp, &frames);
  for (std::size_t j = 0; j < n_electrodes; ++j) {
    const auto c = ChannelCodes(rec.Channel(j), rec.fs_in, lbp);
    for (std::size_t t = 0; t < frames; ++t) codes.At(t, j) = c[t];
  }
  const std::size_t windows = frames / kWindowSamples;
  std::size_t ictal = 0;
  for (std::size_t w = 0; w < windows; ++w) {
    const HistogramVector h =
        encoder.Encode(codes.Frames(w * kWindowSamples, kWindowSamples), w * kWindowSamples, w);
    ictal += am.Classify(h.vector).IsIctal() ? 1 : 0;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  (void)ictal;

  BenchResult r;
  r.n_electrodes = n_electrodes;
  r.dim = dim;
  r.windows = windows;
  r.seconds = elapsed;
  r.windows_per_second = elapsed > 0 ? windows / elapsed : 0.0;
  r.realtime_factor = r.windows_per_second * kWindowSeconds;
  r.ms_per_window = windows > 0 ? 1000.0 * elapsed / windows : 0.0;
  return r;
}

}  // namespace hdsz
