#include "autorisk/worker.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "autorisk/csv.hpp"
#include "autorisk/errors.hpp"

namespace autorisk {

std::optional<double> encode_frequency(FrequencyAnswer answer) {
  switch (answer) {
    case FrequencyAnswer::Daily:
      return 1.0;
    case FrequencyAnswer::WeeklyToDaily:
      return 1.0 / 2.0;
    case FrequencyAnswer::MonthlyToWeekly:
      return 1.0 / 7.0;
    case FrequencyAnswer::LessThanMonthly:
      return 1.0 / 30.0;
    case FrequencyAnswer::Never:
      return 0.0;
    case FrequencyAnswer::NoResponse:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string_view to_string(Country c) {
  return c == Country::AT ? "AT" : "DE";
}

std::string_view to_string(Gender g) {
  return g == Gender::Male ? "male" : "female";
}

std::string_view to_string(FirmSector s) {
  return s == FirmSector::PublicOrNgo ? "public" : "private";
}

std::string_view to_string(FrequencyAnswer a) {
  switch (a) {
    case FrequencyAnswer::Never:
      return "never";
    case FrequencyAnswer::LessThanMonthly:
      return "rarely";
    case FrequencyAnswer::MonthlyToWeekly:
      return "monthly";
    case FrequencyAnswer::WeeklyToDaily:
      return "weekly";
    case FrequencyAnswer::Daily:
      return "daily";
    case FrequencyAnswer::NoResponse:
      return "";
  }
  return "";
}

bool valid_isco4(const std::string& code) {
  if (code.size() != 4) return false;
  if (code[0] < '1' || code[0] > '9') return false;
  return std::all_of(code.begin(), code.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

namespace {

std::string cell_ref(std::size_t row, const std::string& column) {
  // row is 1-based over data rows, matching what a spreadsheet user sees
  // once the header line is counted as line 1.
  return "row " + std::to_string(row) + ", column '" + column + "'";
}

std::optional<double> parse_double(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* begin = text.data();
  const char* end = begin + text.size();
  double value = 0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<long> parse_int(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* begin = text.data();
  const char* end = begin + text.size();
  long value = 0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

int parse_ordinal(const std::string& text, long lo, long hi, std::size_t row,
                  const std::string& column) {
  auto v = parse_int(text);
  if (!v || *v < lo || *v > hi) {
    throw BadEnumValue("expected integer in [" + std::to_string(lo) + "," +
                       std::to_string(hi) + "] at " + cell_ref(row, column) +
                       ", got '" + text + "'");
  }
  return static_cast<int>(*v);
}

std::optional<FrequencyAnswer> parse_frequency(const std::string& text) {
  if (text.empty()) return FrequencyAnswer::NoResponse;
  if (text == "daily") return FrequencyAnswer::Daily;
  if (text == "weekly") return FrequencyAnswer::WeeklyToDaily;
  if (text == "monthly") return FrequencyAnswer::MonthlyToWeekly;
  if (text == "rarely") return FrequencyAnswer::LessThanMonthly;
  if (text == "never") return FrequencyAnswer::Never;
  return std::nullopt;
}

std::optional<double> parse_bounded(const std::string& text, double lo,
                                    double hi) {
  auto v = parse_double(text);
  if (!v || *v < lo || *v > hi) return std::nullopt;
  return v;
}

const std::vector<std::string>& base_columns() {
  static const std::vector<std::string> cols = {
      "id",          "country",      "isco4",
      "age_group",   "gender",       "education_years",
      "firm_sector", "firm_size",    "job_responsibility",
      "job_experience", "job_education", "skill_ps",
      "skill_num",   "skill_lit",
  };
  return cols;
}

std::vector<WorkerRecord> parse_workers(const csv::Table& table) {
  std::vector<std::size_t> col;
  for (const auto& name : base_columns()) {
    std::size_t idx = table.column(name);
    if (idx == csv::Table::npos) {
      throw MissingColumn("workers.csv is missing column '" + name + "'");
    }
    col.push_back(idx);
  }
  std::array<std::size_t, kTaskCount> task_col{};
  for (std::size_t t = 0; t < kTaskCount; ++t) {
    std::size_t idx = table.column(std::string(task_codes()[t]));
    if (idx == csv::Table::npos) {
      throw MissingColumn("workers.csv is missing task column '" +
                          std::string(task_codes()[t]) + "'");
    }
    task_col[t] = idx;
  }

  std::vector<WorkerRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t rowno = r + 1;
    WorkerRecord rec;

    rec.id = row[col[0]];
    if (rec.id.empty()) {
      throw BadEnumValue("empty worker id at " + cell_ref(rowno, "id"));
    }

    const std::string& country = row[col[1]];
    if (country == "AT") {
      rec.country = Country::AT;
    } else if (country == "DE") {
      rec.country = Country::DE;
    } else {
      throw BadEnumValue("expected AT or DE at " + cell_ref(rowno, "country") +
                         ", got '" + country + "'");
    }

    rec.isco4 = row[col[2]];
    if (!valid_isco4(rec.isco4)) {
      throw BadIscoCode("invalid ISCO-08 code '" + rec.isco4 + "' at " +
                        cell_ref(rowno, "isco4"));
    }

    rec.age_group = parse_ordinal(row[col[3]], 0, 9, rowno, "age_group");

    const std::string& gender = row[col[4]];
    if (gender == "male") {
      rec.gender = Gender::Male;
    } else if (gender == "female") {
      rec.gender = Gender::Female;
    } else {
      throw BadEnumValue("expected male or female at " +
                         cell_ref(rowno, "gender") + ", got '" + gender + "'");
    }

    rec.education_years = parse_bounded(row[col[5]], 4.0, 20.0);

    const std::string& sector = row[col[6]];
    if (sector == "public") {
      rec.firm_sector = FirmSector::PublicOrNgo;
    } else if (sector == "private") {
      rec.firm_sector = FirmSector::Private;
    } else {
      throw BadEnumValue("expected public or private at " +
                         cell_ref(rowno, "firm_sector") + ", got '" + sector +
                         "'");
    }

    rec.firm_size = parse_ordinal(row[col[7]], 0, 4, rowno, "firm_size");

    const std::string& resp = row[col[8]];
    if (resp == "yes" || resp == "1") {
      rec.job_responsibility = true;
    } else if (resp == "no" || resp == "0") {
      rec.job_responsibility = false;
    }  // anything else, including empty, stays absent

    rec.job_experience =
        parse_ordinal(row[col[9]], 0, 4, rowno, "job_experience");
    rec.job_education =
        parse_ordinal(row[col[10]], 0, 2, rowno, "job_education");

    rec.skill_ps = parse_bounded(row[col[11]], 0.0, 500.0);
    rec.skill_num = parse_bounded(row[col[12]], 0.0, 500.0);
    rec.skill_lit = parse_bounded(row[col[13]], 0.0, 500.0);

    for (std::size_t t = 0; t < kTaskCount; ++t) {
      auto answer = parse_frequency(row[task_col[t]]);
      // an unrecognized token is a skipped answer
      rec.tasks[t] = answer.value_or(FrequencyAnswer::NoResponse);
      rec.task_values[t] = encode_frequency(rec.tasks[t]);
    }

    records.push_back(std::move(rec));
  }
  return records;
}

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value) {
  char buf[32];
  for (int precision : {15, 16, 17}) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    if (back == value) break;
  }
  return buf;
}

}  // namespace

std::vector<WorkerRecord> parse_worker_csv(const std::filesystem::path& path) {
  return parse_workers(csv::read_file(path));
}

std::vector<WorkerRecord> parse_worker_csv_string(const std::string& text) {
  return parse_workers(csv::parse_string(text, "workers.csv"));
}

std::string workers_csv_string(std::span<const WorkerRecord> records) {
  std::ostringstream out;
  for (std::size_t i = 0; i < base_columns().size(); ++i) {
    if (i) out << ',';
    out << base_columns()[i];
  }
  for (const auto& code : task_codes()) out << ',' << code;
  out << '\n';

  for (const auto& rec : records) {
    out << rec.id << ',' << to_string(rec.country) << ',' << rec.isco4 << ','
        << rec.age_group << ',' << to_string(rec.gender) << ',';
    if (rec.education_years) out << format_double(*rec.education_years);
    out << ',' << to_string(rec.firm_sector) << ',' << rec.firm_size << ',';
    if (rec.job_responsibility) out << (*rec.job_responsibility ? "yes" : "no");
    out << ',' << rec.job_experience << ',' << rec.job_education << ',';
    if (rec.skill_ps) out << format_double(*rec.skill_ps);
    out << ',';
    if (rec.skill_num) out << format_double(*rec.skill_num);
    out << ',';
    if (rec.skill_lit) out << format_double(*rec.skill_lit);
    for (std::size_t t = 0; t < kTaskCount; ++t) {
      out << ',' << to_string(rec.tasks[t]);
    }
    out << '\n';
  }
  return out.str();
}

void write_workers_csv(const std::filesystem::path& path,
                       std::span<const WorkerRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << workers_csv_string(records);
}

namespace {

struct FieldAccessor {
  std::string name;
  std::optional<double> (*get)(const WorkerRecord&);
  void (*set)(WorkerRecord&, double);
  bool (*flag)(const ImputedFlags&);
  void (*mark)(ImputedFlags&);
};

const std::vector<FieldAccessor>& numeric_fields() {
  static const std::vector<FieldAccessor> fields = {
      {"education_years",
       [](const WorkerRecord& r) { return r.education_years; },
       [](WorkerRecord& r, double v) { r.education_years = v; },
       [](const ImputedFlags& f) { return f.education; },
       [](ImputedFlags& f) { f.education = true; }},
      {"skill_ps", [](const WorkerRecord& r) { return r.skill_ps; },
       [](WorkerRecord& r, double v) { r.skill_ps = v; },
       [](const ImputedFlags& f) { return f.skill_ps; },
       [](ImputedFlags& f) { f.skill_ps = true; }},
      {"skill_num", [](const WorkerRecord& r) { return r.skill_num; },
       [](WorkerRecord& r, double v) { r.skill_num = v; },
       [](const ImputedFlags& f) { return f.skill_num; },
       [](ImputedFlags& f) { f.skill_num = true; }},
      {"skill_lit", [](const WorkerRecord& r) { return r.skill_lit; },
       [](WorkerRecord& r, double v) { r.skill_lit = v; },
       [](const ImputedFlags& f) { return f.skill_lit; },
       [](ImputedFlags& f) { f.skill_lit = true; }},
  };
  return fields;
}

}  // namespace

std::vector<WorkerRecord> impute_means(std::span<const WorkerRecord> records) {
  std::vector<WorkerRecord> out(records.begin(), records.end());
  if (out.empty()) return out;

  for (const auto& field : numeric_fields()) {
    double sum = 0;
    std::size_t n = 0, missing = 0;
    for (const auto& rec : out) {
      if (auto v = field.get(rec)) {
        sum += *v;
        ++n;
      } else {
        ++missing;
      }
    }
    if (missing == 0) continue;
    if (n == 0) {
      throw AllMissingField("field '" + field.name +
                            "' has no observed values to impute from");
    }
    const double mean = sum / static_cast<double>(n);
    for (auto& rec : out) {
      if (!field.get(rec)) {
        field.set(rec, mean);
        field.mark(rec.imputed);
      }
    }
  }

  // encoded task values, one mean per task item
  for (std::size_t t = 0; t < kTaskCount; ++t) {
    double sum = 0;
    std::size_t n = 0, missing = 0;
    for (const auto& rec : out) {
      if (rec.task_values[t]) {
        sum += *rec.task_values[t];
        ++n;
      } else {
        ++missing;
      }
    }
    if (missing == 0) continue;
    if (n == 0) {
      throw AllMissingField("task '" + std::string(task_codes()[t]) +
                            "' has no observed values to impute from");
    }
    const double mean = sum / static_cast<double>(n);
    for (auto& rec : out) {
      if (!rec.task_values[t]) {
        rec.task_values[t] = mean;
        rec.imputed.tasks.set(t);
      }
    }
  }

  // modal category for the one optional categorical field
  std::size_t yes = 0, no = 0, resp_missing = 0;
  for (const auto& rec : out) {
    if (!rec.job_responsibility) {
      ++resp_missing;
    } else if (*rec.job_responsibility) {
      ++yes;
    } else {
      ++no;
    }
  }
  if (resp_missing > 0) {
    if (yes + no == 0) {
      throw AllMissingField(
          "field 'job_responsibility' has no observed values to impute from");
    }
    const bool modal = yes > no;  // tie resolves to the reference category
    for (auto& rec : out) {
      if (!rec.job_responsibility) {
        rec.job_responsibility = modal;
        rec.imputed.responsibility = true;
      }
    }
  }

  return out;
}

namespace {

NumericSummary summarize_numeric(std::vector<double> values) {
  NumericSummary s;
  s.n_observed = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
  };
  s.min = values.front();
  s.max = values.back();
  s.q25 = quantile(0.25);
  s.q75 = quantile(0.75);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  return s;
}

}  // namespace

std::vector<FieldSummary> summary_stats(std::span<const WorkerRecord> records) {
  std::vector<FieldSummary> out;

  auto count_levels = [&](const std::string& field,
                          auto&& level_of, std::vector<std::string> levels) {
    FieldSummary fs;
    fs.field = field;
    std::vector<std::size_t> counts(levels.size(), 0);
    std::size_t missing = 0;
    for (const auto& rec : records) {
      auto lv = level_of(rec);
      if (!lv) {
        ++missing;
        continue;
      }
      for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] == *lv) {
          ++counts[i];
          break;
        }
      }
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
      fs.levels.push_back({levels[i], counts[i]});
    }
    if (missing > 0) fs.levels.push_back({"missing", missing});
    out.push_back(std::move(fs));
  };

  auto ordinal_levels = [](int lo, int hi) {
    std::vector<std::string> lv;
    for (int i = lo; i <= hi; ++i) lv.push_back(std::to_string(i));
    return lv;
  };

  count_levels(
      "country",
      [](const WorkerRecord& r) {
        return std::optional<std::string>(std::string(to_string(r.country)));
      },
      {"AT", "DE"});
  count_levels(
      "age_group",
      [](const WorkerRecord& r) {
        return std::optional<std::string>(std::to_string(r.age_group));
      },
      ordinal_levels(0, 9));
  count_levels(
      "gender",
      [](const WorkerRecord& r) {
        return std::optional<std::string>(std::string(to_string(r.gender)));
      },
      {"male", "female"});
  count_levels(
      "firm_sector",
      [](const WorkerRecord& r) {
        return std::optional<std::string>(
            std::string(to_string(r.firm_sector)));
      },
      {"public", "private"});
  count_levels(
      "firm_size",
      [](const WorkerRecord& r) {
        return std::optional<std::string>(std::to_string(r.firm_size));
      },
      ordinal_levels(0, 4));
  count_levels(
      "job_responsibility",
      [](const WorkerRecord& r) -> std::optional<std::string> {
        if (!r.job_responsibility) return std::nullopt;
        return std::string(*r.job_responsibility ? "yes" : "no");
      },
      {"yes", "no"});
  count_levels(
      "job_experience",
      [](const WorkerRecord& r) {
        return std::optional<std::string>(std::to_string(r.job_experience));
      },
      ordinal_levels(0, 4));
  count_levels(
      "job_education",
      [](const WorkerRecord& r) {
        return std::optional<std::string>(std::to_string(r.job_education));
      },
      ordinal_levels(0, 2));

  auto numeric_field = [&](const std::string& name, auto&& get) {
    FieldSummary fs;
    fs.field = name;
    std::vector<double> values;
    for (const auto& rec : records) {
      if (auto v = get(rec)) values.push_back(*v);
    }
    fs.numeric = summarize_numeric(std::move(values));
    out.push_back(std::move(fs));
  };

  numeric_field("education_years",
                [](const WorkerRecord& r) { return r.education_years; });
  numeric_field("skill_ps", [](const WorkerRecord& r) { return r.skill_ps; });
  numeric_field("skill_num", [](const WorkerRecord& r) { return r.skill_num; });
  numeric_field("skill_lit", [](const WorkerRecord& r) { return r.skill_lit; });

  return out;
}

std::string summary_stats_csv(std::span<const FieldSummary> fields) {
  std::ostringstream out;
  out << "field,level,count,min,q25,mean,q75,max\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  for (const auto& fs : fields) {
    for (const auto& lv : fs.levels) {
      out << fs.field << ',' << lv.level << ',' << lv.count << ",,,,,\n";
    }
    if (fs.numeric) {
      const auto& s = *fs.numeric;
      out << fs.field << ",," << s.n_observed << ',' << num(s.min) << ','
          << num(s.q25) << ',' << num(s.mean) << ',' << num(s.q75) << ','
          << num(s.max) << '\n';
    }
  }
  return out.str();
}

}  // namespace autorisk
