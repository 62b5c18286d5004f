#ifndef AUTORISK_LABELING_HPP
#define AUTORISK_LABELING_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autorisk/worker.hpp"

namespace autorisk {

// Per-expert yes/no votes on each occupation. votes[i][e] is expert e's
// answer for occupations[i]; absent means the expert skipped the question.
struct ExpertVoteSet {
  std::vector<std::string> occupations;  // isco4 codes
  std::vector<std::string> expert_ids;
  std::vector<std::vector<std::optional<bool>>> votes;
};

struct OccupationLabel {
  std::string isco4;
  double mean = 0;  // yes share over responding experts, exact ratio
  int mode = 0;
  std::optional<int> consensus;  // present iff >= threshold share agree
  std::size_t n_votes = 0;       // responding experts

  bool operator==(const OccupationLabel&) const = default;
};

inline constexpr double kConsensusThreshold = 0.75;

// mean = yes/n exactly; mode ties (mean 0.5) resolve to 0; consensus is
// present iff max(share_yes, share_no) >= threshold, and then equals mode.
std::vector<OccupationLabel> aggregate_labels(
    const ExpertVoteSet& votes, double threshold = kConsensusThreshold);

// Per-record label lookup by exact isco4 match; absent for occupations
// no expert judged (those are predicted later, never fitted on).
struct LabelJoin {
  std::vector<std::string> worker_ids;
  std::vector<std::optional<OccupationLabel>> labels;  // parallel
};

LabelJoin attach_labels(std::span<const WorkerRecord> records,
                        std::span<const OccupationLabel> labels);

// votes.csv: header isco4,expert_id,vote with vote in {0,1,} (empty =
// skipped). Experts and occupations keep first-appearance order.
ExpertVoteSet parse_votes_csv(const std::filesystem::path& path);
ExpertVoteSet parse_votes_csv_string(const std::string& text);
std::string votes_csv_string(const ExpertVoteSet& votes);
void write_votes_csv(const std::filesystem::path& path,
                     const ExpertVoteSet& votes);

// labels.csv: header isco4,mean,mode,consensus,n_votes; mean printed with
// three decimals, consensus empty when absent.
std::string labels_csv_string(std::span<const OccupationLabel> labels);
void write_labels_csv(const std::filesystem::path& path,
                      std::span<const OccupationLabel> labels);
std::vector<OccupationLabel> parse_labels_csv(
    const std::filesystem::path& path);
std::vector<OccupationLabel> parse_labels_csv_string(const std::string& text);

}  // namespace autorisk

#endif
