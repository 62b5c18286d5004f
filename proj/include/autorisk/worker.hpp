#ifndef AUTORISK_WORKER_HPP
#define AUTORISK_WORKER_HPP

#include <array>
#include <bitset>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autorisk/tasks.hpp"

namespace autorisk {

// Survey answer on how often a task is performed. NoResponse is a skipped
// question, distinct from Never.
enum class FrequencyAnswer {
  Never,
  LessThanMonthly,
  MonthlyToWeekly,
  WeeklyToDaily,
  Daily,
  NoResponse,
};

// Frequency normalized to a share of working days: daily 1, weekly 1/2,
// monthly 1/7, less than monthly 1/30, never 0. NoResponse stays absent.
std::optional<double> encode_frequency(FrequencyAnswer answer);

enum class Country { AT, DE };
enum class Gender { Male, Female };
enum class FirmSector { PublicOrNgo, Private };

std::string_view to_string(Country c);
std::string_view to_string(Gender g);
std::string_view to_string(FirmSector s);
std::string_view to_string(FrequencyAnswer a);

// Cells filled in by impute_means rather than observed in the survey.
struct ImputedFlags {
  bool education = false;
  bool responsibility = false;
  bool skill_ps = false;
  bool skill_num = false;
  bool skill_lit = false;
  std::bitset<kTaskCount> tasks;

  bool any() const {
    return education || responsibility || skill_ps || skill_num ||
           skill_lit || tasks.any();
  }
  bool operator==(const ImputedFlags&) const = default;
};

// One survey respondent. Optional fields are absent on non-response until
// impute_means fills them. task_values holds the encoded frequency per
// task (absent for NoResponse before imputation).
struct WorkerRecord {
  std::string id;
  Country country = Country::AT;
  std::string isco4;  // 4 digits, first in 1-9
  int age_group = 0;  // ordinal 0-9
  Gender gender = Gender::Male;
  std::optional<double> education_years;  // [4, 20]
  FirmSector firm_sector = FirmSector::PublicOrNgo;
  int firm_size = 0;       // ordinal 0-4
  std::optional<bool> job_responsibility;
  int job_experience = 0;  // ordinal 0-4
  int job_education = 0;   // ordinal 0-2, ISCED bands
  std::optional<double> skill_ps;   // [0, 500]
  std::optional<double> skill_num;  // [0, 500]
  std::optional<double> skill_lit;  // [0, 500]
  std::array<FrequencyAnswer, kTaskCount> tasks{};
  std::array<std::optional<double>, kTaskCount> task_values{};
  ImputedFlags imputed;

  bool operator==(const WorkerRecord&) const = default;
};

bool valid_isco4(const std::string& code);

// Reads workers.csv. Header: id,country,isco4,age_group,gender,
// education_years,firm_sector,firm_size,job_responsibility,job_experience,
// job_education,skill_ps,skill_num,skill_lit,<39 task codes>. Task cells
// hold daily|weekly|monthly|rarely|never| (empty = non-response).
// Unparseable optional fields become absent; malformed mandatory fields
// abort with a typed error naming row and column.
std::vector<WorkerRecord> parse_worker_csv(const std::filesystem::path& path);
std::vector<WorkerRecord> parse_worker_csv_string(const std::string& text);

// Writes the same schema parse_worker_csv reads, emitting each record's
// current cell values. Task cells are written as survey answers, so imputed
// task values (which only exist in encoded form) come back absent when the
// file is parsed again.
void write_workers_csv(const std::filesystem::path& path,
                       std::span<const WorkerRecord> records);
std::string workers_csv_string(std::span<const WorkerRecord> records);

// Replaces every absent numeric cell (education, skills, encoded task
// values) with the mean of the observed values for that field and absent
// job_responsibility with the modal category. Observed cells are left
// untouched; the result flags what was filled. Raises AllMissingField when
// a field with missing entries has no observed value at all.
std::vector<WorkerRecord> impute_means(std::span<const WorkerRecord> records);

struct LevelCount {
  std::string level;
  std::size_t count = 0;
};

struct NumericSummary {
  double min = 0, q25 = 0, mean = 0, q75 = 0, max = 0;
  std::size_t n_observed = 0;
};

// Per-field description: categorical fields carry level counts, numeric
// fields min/25%/mean/75%/max over observed values.
struct FieldSummary {
  std::string field;
  std::vector<LevelCount> levels;
  std::optional<NumericSummary> numeric;
};

std::vector<FieldSummary> summary_stats(std::span<const WorkerRecord> records);
std::string summary_stats_csv(std::span<const FieldSummary> fields);

}  // namespace autorisk

#endif
