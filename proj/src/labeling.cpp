#include "autorisk/labeling.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "autorisk/csv.hpp"
#include "autorisk/errors.hpp"

namespace autorisk {

std::vector<OccupationLabel> aggregate_labels(const ExpertVoteSet& votes,
                                              double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InvalidConfig("consensus threshold must lie in (0, 1]");
  }
  {
    std::unordered_map<std::string, std::size_t> seen;
    seen.reserve(votes.occupations.size());
    for (const auto& code : votes.occupations) {
      if (++seen[code] > 1) {
        throw DuplicateLabel("occupation " + code +
                             " appears twice in the vote set");
      }
    }
  }
  std::vector<OccupationLabel> out;
  out.reserve(votes.occupations.size());
  for (std::size_t i = 0; i < votes.occupations.size(); ++i) {
    std::size_t yes = 0, no = 0;
    for (const auto& v : votes.votes[i]) {
      if (!v) continue;
      if (*v) {
        ++yes;
      } else {
        ++no;
      }
    }
    const std::size_t n = yes + no;
    if (n == 0) {
      throw NoVotes("occupation " + votes.occupations[i] +
                    " received no responses");
    }
    OccupationLabel label;
    label.isco4 = votes.occupations[i];
    label.n_votes = n;
    label.mean = static_cast<double>(yes) / static_cast<double>(n);
    label.mode = yes > no ? 1 : 0;  // exact tie resolves to 0
    const double share_yes = label.mean;
    const double share_no = static_cast<double>(no) / static_cast<double>(n);
    if (std::max(share_yes, share_no) >= threshold) {
      label.consensus = label.mode;
    }
    out.push_back(std::move(label));
  }
  return out;
}

LabelJoin attach_labels(std::span<const WorkerRecord> records,
                        std::span<const OccupationLabel> labels) {
  std::unordered_map<std::string, const OccupationLabel*> by_code;
  by_code.reserve(labels.size());
  for (const auto& label : labels) {
    if (!by_code.emplace(label.isco4, &label).second) {
      throw DuplicateLabel("duplicate label for occupation " + label.isco4);
    }
  }
  LabelJoin join;
  join.worker_ids.reserve(records.size());
  join.labels.reserve(records.size());
  for (const auto& rec : records) {
    join.worker_ids.push_back(rec.id);
    auto it = by_code.find(rec.isco4);
    if (it == by_code.end()) {
      join.labels.emplace_back(std::nullopt);
    } else {
      join.labels.emplace_back(*it->second);
    }
  }
  return join;
}

namespace {

ExpertVoteSet parse_votes(const csv::Table& table) {
  const std::size_t c_isco = table.column("isco4");
  const std::size_t c_expert = table.column("expert_id");
  const std::size_t c_vote = table.column("vote");
  for (auto [idx, name] : {std::pair{c_isco, "isco4"},
                           std::pair{c_expert, "expert_id"},
                           std::pair{c_vote, "vote"}}) {
    if (idx == csv::Table::npos) {
      throw MissingColumn(std::string("votes.csv is missing column '") +
                          name + "'");
    }
  }

  ExpertVoteSet set;
  std::unordered_map<std::string, std::size_t> occ_index;
  std::unordered_map<std::string, std::size_t> expert_index;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string& isco = row[c_isco];
    if (!valid_isco4(isco)) {
      throw BadIscoCode("invalid ISCO-08 code '" + isco + "' at votes.csv row " +
                        std::to_string(r + 1));
    }
    auto [occ_it, occ_new] = occ_index.emplace(isco, set.occupations.size());
    if (occ_new) {
      set.occupations.push_back(isco);
      set.votes.emplace_back();
    }
    auto [exp_it, exp_new] =
        expert_index.emplace(row[c_expert], set.expert_ids.size());
    if (exp_new) set.expert_ids.push_back(row[c_expert]);

    const std::size_t occ = occ_it->second;
    const std::size_t expert = exp_it->second;
    if (set.votes[occ].size() <= expert) set.votes[occ].resize(expert + 1);

    const std::string& vote = row[c_vote];
    if (vote == "1") {
      set.votes[occ][expert] = true;
    } else if (vote == "0") {
      set.votes[occ][expert] = false;
    } else if (!vote.empty()) {
      throw BadEnumValue("expected vote 0, 1 or empty at votes.csv row " +
                         std::to_string(r + 1) + ", got '" + vote + "'");
    }
  }
  for (auto& v : set.votes) v.resize(set.expert_ids.size());
  return set;
}

}  // namespace

ExpertVoteSet parse_votes_csv(const std::filesystem::path& path) {
  return parse_votes(csv::read_file(path));
}

ExpertVoteSet parse_votes_csv_string(const std::string& text) {
  return parse_votes(csv::parse_string(text, "votes.csv"));
}

std::string votes_csv_string(const ExpertVoteSet& votes) {
  std::ostringstream out;
  out << "isco4,expert_id,vote\n";
  for (std::size_t i = 0; i < votes.occupations.size(); ++i) {
    for (std::size_t e = 0; e < votes.expert_ids.size(); ++e) {
      out << votes.occupations[i] << ',' << votes.expert_ids[e] << ',';
      const auto& v = votes.votes[i][e];
      if (v) out << (*v ? '1' : '0');
      out << '\n';
    }
  }
  return out.str();
}

void write_votes_csv(const std::filesystem::path& path,
                     const ExpertVoteSet& votes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << votes_csv_string(votes);
}

std::string labels_csv_string(std::span<const OccupationLabel> labels) {
  std::ostringstream out;
  out << "isco4,mean,mode,consensus,n_votes\n";
  char buf[32];
  for (const auto& label : labels) {
    std::snprintf(buf, sizeof(buf), "%.3f", label.mean);
    out << label.isco4 << ',' << buf << ',' << label.mode << ',';
    if (label.consensus) out << *label.consensus;
    out << ',' << label.n_votes << '\n';
  }
  return out.str();
}

void write_labels_csv(const std::filesystem::path& path,
                      std::span<const OccupationLabel> labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << labels_csv_string(labels);
}

namespace {

std::vector<OccupationLabel> parse_labels(const csv::Table& table) {
  for (const char* name : {"isco4", "mean", "mode", "consensus", "n_votes"}) {
    if (table.column(name) == csv::Table::npos) {
      throw MissingColumn(std::string("labels.csv is missing column '") +
                          name + "'");
    }
  }
  const std::size_t c_isco = table.column("isco4");
  const std::size_t c_mean = table.column("mean");
  const std::size_t c_mode = table.column("mode");
  const std::size_t c_cons = table.column("consensus");
  const std::size_t c_n = table.column("n_votes");

  std::vector<OccupationLabel> labels;
  labels.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    OccupationLabel label;
    label.isco4 = row[c_isco];
    if (!valid_isco4(label.isco4)) {
      throw BadIscoCode("invalid ISCO-08 code '" + label.isco4 +
                        "' at labels.csv row " + std::to_string(r + 1));
    }
    try {
      label.mean = std::stod(row[c_mean]);
      label.mode = std::stoi(row[c_mode]);
      label.n_votes = static_cast<std::size_t>(std::stoul(row[c_n]));
    } catch (const std::exception&) {
      throw BadEnumValue("malformed numeric cell at labels.csv row " +
                         std::to_string(r + 1));
    }
    if (!row[c_cons].empty()) {
      if (row[c_cons] != "0" && row[c_cons] != "1") {
        throw BadEnumValue("expected consensus 0, 1 or empty at labels.csv row " +
                           std::to_string(r + 1));
      }
      label.consensus = row[c_cons] == "1" ? 1 : 0;
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

}  // namespace

std::vector<OccupationLabel> parse_labels_csv(
    const std::filesystem::path& path) {
  return parse_labels(csv::read_file(path));
}

std::vector<OccupationLabel> parse_labels_csv_string(const std::string& text) {
  return parse_labels(csv::parse_string(text, "labels.csv"));
}

}  // namespace autorisk
