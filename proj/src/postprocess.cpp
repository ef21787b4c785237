#include "hdsz/postprocess.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "hdsz/error.hpp"

namespace hdsz {

void VoteConfig::Validate() const {
  if (window_labels < 1) throw std::invalid_argument("vote window needs at least one label");
  if (threshold < 1 || static_cast<std::size_t>(threshold) > window_labels) {
    throw std::invalid_argument("vote threshold must lie in [1, window_labels], got " +
                                std::to_string(threshold));
  }
}

std::optional<Decision> Vote(std::span<const Label> history, const VoteConfig& cfg,
                             double time_s) {
  cfg.Validate();
  if (history.size() < cfg.window_labels) return std::nullopt;
  if (history.size() > cfg.window_labels) {
    throw std::invalid_argument("vote history longer than the vote window");
  }
  const auto votes = static_cast<int>(
      std::ranges::count_if(history, [](const Label& l) { return l.IsIctal(); }));
  return Decision{time_s, votes, votes >= cfg.threshold};
}

std::vector<Decision> VoteStream(std::span<const Label> labels,
                                 std::span<const double> label_times, const VoteConfig& cfg) {
  cfg.Validate();
  if (labels.size() != label_times.size()) {
    throw DimensionMismatchError("label and time streams differ in length");
  }
  std::vector<Decision> decisions;
  if (labels.size() < cfg.window_labels) return decisions;
  decisions.reserve(labels.size() - cfg.window_labels + 1);
  int votes = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    votes += labels[i].IsIctal() ? 1 : 0;
    if (i >= cfg.window_labels) votes -= labels[i - cfg.window_labels].IsIctal() ? 1 : 0;
    if (i + 1 >= cfg.window_labels) {
      decisions.push_back(Decision{label_times[i], votes, votes >= cfg.threshold});
    }
  }
  return decisions;
}

std::vector<Decision> ApplyThreshold(std::span<const Decision> decisions, int threshold) {
  std::vector<Decision> out(decisions.begin(), decisions.end());
  for (Decision& d : out) d.is_seizure = d.ictal_votes >= threshold;
  return out;
}

int FitThreshold(std::span<const Decision> decisions, double onset_s, double offset_s) {
  int best = 0;
  for (const Decision& d : decisions) {
    if (d.time_s >= onset_s && d.time_s <= offset_s) best = std::max(best, d.ictal_votes);
  }
  if (best < 1) {
    throw TrainingFailure("no vote threshold detects the training seizure");
  }
  return std::min(best, kMaxThreshold);
}

int CombineThresholds(std::span<const int> per_seizure) {
  if (per_seizure.empty()) throw std::invalid_argument("no per-seizure thresholds");
  return *std::ranges::min_element(per_seizure);
}

std::vector<Alarm> Alarms(std::span<const Decision> decisions, std::size_t clear_labels) {
  std::vector<Alarm> alarms;
  bool active = false;
  std::size_t quiet = 0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    if (decisions[i].is_seizure) {
      if (!active) {
        alarms.push_back(Alarm{i, i, decisions[i].time_s});
        active = true;
      }
      alarms.back().last_decision = i;
      quiet = 0;
    } else if (active && ++quiet >= clear_labels) {
      active = false;
    }
  }
  return alarms;
}

void WriteDecisionLog(std::ostream& out, std::span<const Decision> decisions) {
  char line[96];
  for (const Decision& d : decisions) {
    const int len = std::snprintf(line, sizeof(line), "%.9f,%d,%d\n", d.time_s, d.ictal_votes,
                                  d.is_seizure ? 1 : 0);
    out.write(line, len);
  }
}

std::vector<Decision> ReadDecisionLog(std::istream& in) {
  std::vector<Decision> decisions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw DataError("decision log line " + std::to_string(line_no) + ": expected 3 fields");
    }
    Decision d;
    int flag = 0;
    try {
      d.time_s = std::stod(line.substr(0, c1));
      d.ictal_votes = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
      flag = std::stoi(line.substr(c2 + 1));
    } catch (const std::exception&) {
      throw DataError("decision log line " + std::to_string(line_no) + ": malformed number");
    }
    if (flag != 0 && flag != 1) {
      throw DataError("decision log line " + std::to_string(line_no) + ": is_seizure not 0/1");
    }
    d.is_seizure = flag == 1;
    decisions.push_back(d);
  }
  return decisions;
}

}  // namespace hdsz
