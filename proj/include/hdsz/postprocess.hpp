#pragma once

// Threshold voting over the last 10 labels (5 s), patient threshold fitting,
// alarm episodes, and the plain-text decision log.

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "hdsz/classifier.hpp"

namespace hdsz {

inline constexpr std::size_t kVoteLabels = 10;
inline constexpr int kMaxThreshold = 10;

struct VoteConfig {
  std::size_t window_labels = kVoteLabels;
  int threshold = kMaxThreshold;

  // Throws std::invalid_argument unless 1 <= threshold <= window_labels.
  void Validate() const;
};

struct Decision {
  double time_s = 0.0;  // time at which the newest label's window is complete
  int ictal_votes = 0;
  bool is_seizure = false;

  bool operator==(const Decision&) const = default;
};

// Decision over exactly cfg.window_labels labels, or nullopt while the
// history is still filling.
std::optional<Decision> Vote(std::span<const Label> history, const VoteConfig& cfg,
                             double time_s);

// Sliding vote over a whole label stream; one decision per label once the
// history is full. label_times[i] is the completion time of label i.
std::vector<Decision> VoteStream(std::span<const Label> labels,
                                 std::span<const double> label_times, const VoteConfig& cfg);

// Re-evaluates is_seizure for another threshold; votes and times are kept.
std::vector<Decision> ApplyThreshold(std::span<const Decision> decisions, int threshold);

// Largest t_p in [1, 10] for which some decision timed inside [onset, offset]
// fires. Throws TrainingFailure if none does.
int FitThreshold(std::span<const Decision> decisions, double onset_s, double offset_s);
// Several training seizures: the minimum of the per-seizure thresholds.
int CombineThresholds(std::span<const int> per_seizure);

// A run of positive decisions collapsed into one alarm: it starts at a
// positive decision while idle and ends once `clear_labels` consecutive
// decisions are negative.
struct Alarm {
  std::size_t first_decision = 0;
  std::size_t last_decision = 0;  // last positive decision of the episode
  double time_s = 0.0;

  bool operator==(const Alarm&) const = default;
};

std::vector<Alarm> Alarms(std::span<const Decision> decisions,
                          std::size_t clear_labels = kVoteLabels);

// Decision log: one "time_s,ictal_votes,is_seizure" line per decision. Times
// are multiples of 1/512 s, so nine decimals store them exactly.
void WriteDecisionLog(std::ostream& out, std::span<const Decision> decisions);
std::vector<Decision> ReadDecisionLog(std::istream& in);

}  // namespace hdsz
