// hdsz: synth, train, detect, eval, reconstruct-hist, bench.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdsz/classifier.hpp"
#include "hdsz/dataset.hpp"
#include "hdsz/encoder.hpp"
#include "hdsz/error.hpp"
#include "hdsz/eval.hpp"
#include "hdsz/postprocess.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTraining = 3;

struct Options {
  std::size_t d = 10000;
  std::uint64_t seed = 0;
  int lbp_len = 6;

  hdsz::PipelineConfig Pipeline() const {
    hdsz::PipelineConfig cfg;
    cfg.hd = hdsz::HdConfig{d, seed};
    cfg.lbp.code_length = lbp_len;
    cfg.hd.Validate();
    cfg.lbp.Validate();
    return cfg;
  }
};

std::string Format(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, value);
  return buf;
}

// Writes to `path`, or stdout when path is empty or "-".
template <typename Fn>
void Emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hdsz::DataError("cannot open output file: " + path);
  fn(out);
  if (!out) throw hdsz::DataError("failed writing output file: " + path);
}

std::vector<hdsz::EncodedRecording> EncodeAll(const std::vector<std::string>& paths,
                                              const hdsz::PipelineConfig& cfg,
                                              std::size_t expect_n = 0) {
  std::vector<hdsz::EncodedRecording> out;
  std::map<std::size_t, hdsz::ItemMemory> memories;
  for (const std::string& path : paths) {
    const hdsz::Recording rec = hdsz::LoadRecording(path);
    if (expect_n != 0 && rec.n_electrodes != expect_n) {
      throw hdsz::DimensionMismatchError(path + ": recording has " +
                                         std::to_string(rec.n_electrodes) +
                                         " electrodes, model expects " + std::to_string(expect_n));
    }
    auto it = memories.find(rec.n_electrodes);
    if (it == memories.end()) {
      it = memories.emplace(rec.n_electrodes,
                            hdsz::ItemMemory(cfg.hd, cfg.lbp.code_length, rec.n_electrodes))
               .first;
    }
    out.push_back(hdsz::EncodeRecording(rec, it->second, cfg.lbp));
  }
  return out;
}

int CmdSynth(const hdsz::SynthParams& base, std::size_t count, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < count; ++i) {
    hdsz::SynthParams p = base;
    p.seed = base.seed + i;
    char name[32];
    std::snprintf(name, sizeof(name), "_%03zu.hdsr", i);
    const std::filesystem::path path = std::filesystem::path(out_dir) / (p.patient_id + name);
    hdsz::SaveRecording(path, hdsz::SynthRecording(p));
    std::cout << path.string() << '\n';
  }
  return kExitOk;
}

int CmdTrain(const Options& opt, const std::vector<std::string>& paths, const std::string& out) {
  if (paths.empty()) throw CLI::ValidationError("train", "needs at least one recording");
  const hdsz::PipelineConfig cfg = opt.Pipeline();
  const auto encoded = EncodeAll(paths, cfg);
  std::vector<const hdsz::EncodedRecording*> ptrs;
  for (const auto& e : encoded) ptrs.push_back(&e);
  const hdsz::DetectionModel model = hdsz::TrainModel(ptrs, cfg);
  hdsz::SaveModel(out, model);
  std::cout << "t_p=" << model.threshold << '\n';
  return kExitOk;
}

int CmdDetect(const std::string& model_path, const std::string& rec_path, const std::string& out) {
  const hdsz::DetectionModel model = hdsz::LoadModel(model_path);
  hdsz::PipelineConfig cfg;
  cfg.hd = model.hd;
  cfg.lbp.code_length = model.code_length;
  const auto encoded = EncodeAll({rec_path}, cfg, model.n_electrodes);
  const hdsz::DetectionRun run = hdsz::RunDetection(encoded.front(), model, cfg.vote_labels);
  Emit(out, [&](std::ostream& os) { hdsz::WriteDecisionLog(os, run.decisions); });
  std::ostream& summary = (out.empty() || out == "-") ? std::cerr : std::cout;
  summary << "detected=" << (run.outcome.detected ? 1 : 0) << " delay_s="
          << (run.outcome.delay_s ? Format("%.2f", *run.outcome.delay_s) : "NA")
          << " false_positive_decisions=" << run.outcome.false_positive_decisions << '/'
          << run.outcome.negative_decisions << " false_alarms=" << run.outcome.false_alarms
          << '\n';
  return kExitOk;
}

int CmdEval(const Options& opt, const std::vector<std::string>& paths,
            const std::string& protocol, std::size_t m, const std::string& out,
            const std::string& json_out) {
  if (paths.empty()) throw CLI::ValidationError("eval", "needs at least one recording");
  const hdsz::PipelineConfig cfg = opt.Pipeline();
  const auto encoded = EncodeAll(paths, cfg);

  // Group by patient, keeping the command-line (chronological) order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<hdsz::EncodedRecording>> by_patient;
  for (const auto& e : encoded) {
    auto [it, inserted] = by_patient.try_emplace(e.patient_id);
    if (inserted) order.push_back(e.patient_id);
    it->second.push_back(e);
  }
  std::vector<hdsz::EvalReport> reports;
  for (const std::string& id : order) {
    const auto& recs = by_patient[id];
    reports.push_back(protocol == "first-m" ? hdsz::ProtocolFirstM(recs, m, cfg)
                                            : hdsz::ProtocolKFold(recs, m, cfg));
  }
  hdsz::WriteReportTable(std::cout, reports);
  if (!out.empty() && out != "-") {
    Emit(out, [&](std::ostream& os) { hdsz::WriteReportTable(os, reports); });
  }
  if (!json_out.empty()) {
    Emit(json_out, [&](std::ostream& os) { hdsz::WriteReportJson(os, reports); });
  }
  return kExitOk;
}

int CmdReconstruct(const Options& opt, const std::string& rec_path, const std::string& out) {
  const hdsz::PipelineConfig cfg = opt.Pipeline();
  const hdsz::Recording rec = hdsz::LoadRecording(rec_path);
  const hdsz::ItemMemory im(cfg.hd, cfg.lbp.code_length, rec.n_electrodes);
  const hdsz::EncodedRecording encoded = hdsz::EncodeRecording(rec, im, cfg.lbp);
  Emit(out, [&](std::ostream& os) {
    for (const auto& h : encoded.windows) {
      const auto est = hdsz::ReconstructHistogram(h, im);
      for (std::size_t i = 0; i < est.size(); ++i) {
        os << (i ? "," : "") << Format("%.6f", est[i]);
      }
      os << '\n';
    }
  });
  return kExitOk;
}

int CmdBench(const Options& opt, std::vector<std::size_t> ns, std::vector<std::size_t> ds,
             double seconds) {
  if (ns.empty()) ns = {36, 64, 100};
  if (ds.empty()) ds = {1000, 10000};
  std::cout << "n,d,windows,windows_per_s,ms_per_window,realtime_factor\n";
  for (std::size_t n : ns) {
    for (std::size_t d : ds) {
      const hdsz::BenchResult r = hdsz::BenchmarkPipeline(n, d, seconds, opt.seed);
      std::cout << n << ',' << d << ',' << r.windows << ',' << Format("%.1f", r.windows_per_second)
                << ',' << Format("%.3f", r.ms_per_window) << ','
                << Format("%.1f", r.realtime_factor) << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HD-computing iEEG seizure detector"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI config file; flags on the command line win");

  Options opt;
  app.add_option("--d", opt.d, "hypervector dimension")->capture_default_str();
  app.add_option("--seed", opt.seed, "item-memory seed")->capture_default_str();
  app.add_option("--lbp-len", opt.lbp_len, "LBP code length l")
      ->check(CLI::Range(1, 6))
      ->capture_default_str();

  std::vector<std::string> recordings;
  std::string out;
  int code = kExitOk;

  auto* synth = app.add_subcommand("synth", "write synthetic HDSR recordings");
  hdsz::SynthParams sp;
  sp.patient_id = "synth";
  std::size_t synth_count = 1;
  synth->add_option("--patient-id", sp.patient_id)->capture_default_str();
  synth->add_option("--n", sp.n_electrodes, "electrodes")->capture_default_str();
  synth->add_option("--count", synth_count, "recordings to write")->capture_default_str();
  synth->add_option("--seizure-len", sp.seizure_len_s, "seconds")->capture_default_str();
  synth->add_option("--ictal-freq", sp.ictal_freq_hz, "Hz")->capture_default_str();
  synth->add_option("--asymmetry", sp.asymmetry)->capture_default_str();
  synth->add_option("--noise-amp", sp.noise_amp)->capture_default_str();
  synth->add_option("--interictal", sp.interictal_s, "seconds before onset")->capture_default_str();
  synth->add_option("--postictal", sp.postictal_s, "seconds after offset")->capture_default_str();
  synth->add_option("--fs", sp.fs, "sampling rate, multiple of 512")->capture_default_str();
  synth->add_option("--synth-seed", sp.seed, "seed of the first recording")->capture_default_str();
  synth->add_option("--patient-seed", sp.patient_seed, "selects involved electrodes")
      ->capture_default_str();
  synth->add_option("--out", out, "output directory")->required();
  synth->callback([&] { code = CmdSynth(sp, synth_count, out); });

  auto* train = app.add_subcommand("train", "train a model from annotated recordings");
  train->add_option("recordings", recordings, "HDSR files")->check(CLI::ExistingFile);
  train->add_option("--out", out, "model file")->required();
  train->callback([&] { code = CmdTrain(opt, recordings, out); });

  auto* detect = app.add_subcommand("detect", "run a model over one recording");
  std::string model_path;
  std::string detect_rec;
  detect->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  detect->add_option("recording", detect_rec)->required()->check(CLI::ExistingFile);
  detect->add_option("--out", out, "decision log (default stdout)");
  detect->callback([&] { code = CmdDetect(model_path, detect_rec, out); });

  auto* eval = app.add_subcommand("eval", "evaluate a protocol per patient");
  std::string protocol = "kfold";
  std::size_t m = 1;
  std::string json_out;
  eval->add_option("recordings", recordings, "HDSR files, chronological per patient")
      ->check(CLI::ExistingFile);
  eval->add_option("--protocol", protocol)
      ->check(CLI::IsMember({"kfold", "first-m"}))
      ->capture_default_str();
  eval->add_option("--m", m, "training seizures per fold")->capture_default_str();
  eval->add_option("--out", out, "also write the table here");
  eval->add_option("--json", json_out, "write the structured report here");
  eval->callback([&] { code = CmdEval(opt, recordings, protocol, m, out, json_out); });

  auto* recon = app.add_subcommand("reconstruct-hist", "dump per-window histogram estimates");
  std::string recon_rec;
  recon->add_option("recording", recon_rec)->required()->check(CLI::ExistingFile);
  recon->add_option("--out", out, "output file (default stdout)");
  recon->callback([&] { code = CmdReconstruct(opt, recon_rec, out); });

  auto* bench = app.add_subcommand("bench", "throughput of the detection pipeline");
  std::vector<std::size_t> bench_n;
  std::vector<std::size_t> bench_d;
  double bench_seconds = 60.0;
  bench->add_option("--n", bench_n, "electrode counts (default 36 64 100)");
  bench->add_option("--dims", bench_d, "dimensions (default 1000 10000)");
  bench->add_option("--seconds", bench_seconds, "signal length")->capture_default_str();
  bench->callback([&] { code = CmdBench(opt, bench_n, bench_d, bench_seconds); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const hdsz::TrainingFailure& e) {
    std::cerr << "training failure: " << e.what() << '\n';
    return kExitTraining;
  } catch (const hdsz::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return code;
}
