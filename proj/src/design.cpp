#include "autorisk/design.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "autorisk/errors.hpp"

namespace autorisk {

std::string_view to_string(ResponseKind kind) {
  return kind == ResponseKind::Binary ? "binary" : "fractional";
}

namespace {

struct Blocks {
  bool personal = false;
  bool firm = false;
  bool job = false;
  bool tasks = false;
};

Blocks tier_blocks(int tier) {
  switch (tier) {
    case 1:
      return {.personal = true};
    case 2:
      return {.personal = true, .firm = true};
    case 3:
      return {.personal = true, .firm = true, .job = true};
    case 4:
      return {.personal = true, .tasks = true};
    case 5:
      return {.tasks = true};
    case 6:
      return {.personal = true, .firm = true, .job = true, .tasks = true};
    default:
      throw InvalidConfig("feature tier must be 1-6, got " +
                          std::to_string(tier));
  }
}

double require(const std::optional<double>& v, const WorkerRecord& rec,
               const char* field) {
  if (!v) {
    throw InvalidConfig("worker " + rec.id + " has no value for " + field +
                        "; impute before building a design");
  }
  return *v;
}

void fill_row(Eigen::MatrixXd& m, Eigen::Index r, const WorkerRecord& rec,
              const Blocks& blocks) {
  Eigen::Index c = 0;
  m(r, c++) = 1.0;
  if (blocks.personal) {
    m(r, c++) = rec.age_group;
    m(r, c++) = rec.gender == Gender::Female ? 1.0 : 0.0;
    const double edu = require(rec.education_years, rec, "education_years");
    m(r, c++) = edu;
    m(r, c++) = edu * edu;
  }
  if (blocks.firm) {
    m(r, c++) = rec.firm_sector == FirmSector::Private ? 1.0 : 0.0;
    m(r, c++) = rec.firm_size;
  }
  if (blocks.job) {
    if (!rec.job_responsibility) {
      throw InvalidConfig("worker " + rec.id +
                          " has no value for job_responsibility; impute "
                          "before building a design");
    }
    m(r, c++) = *rec.job_responsibility ? 1.0 : 0.0;
    m(r, c++) = rec.job_experience;
    m(r, c++) = rec.job_education;
    m(r, c++) = require(rec.skill_ps, rec, "skill_ps");
    m(r, c++) = require(rec.skill_num, rec, "skill_num");
    m(r, c++) = require(rec.skill_lit, rec, "skill_lit");
  }
  if (blocks.tasks) {
    for (std::size_t t = 0; t < kTaskCount; ++t) {
      m(r, c++) = require(rec.task_values[t], rec, "task value");
    }
  }
}

void check_full_rank(const DesignMatrix& design) {
  for (std::size_t j = 1; j < design.k(); ++j) {
    const auto col = design.rows.col(static_cast<Eigen::Index>(j));
    if (col.maxCoeff() == col.minCoeff()) {
      throw RankDeficient("column '" + design.feature_names[j] +
                          "' is constant");
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.rows);
  const auto rank = qr.rank();
  if (rank < design.rows.cols()) {
    // the first column the pivoting left out is one of the dependent ones
    const auto culprit =
        static_cast<std::size_t>(qr.colsPermutation().indices()(rank));
    throw RankDeficient("column '" + design.feature_names[culprit] +
                        "' is a linear combination of the others");
  }
}

}  // namespace

std::vector<std::string> tier_feature_names(int tier) {
  const Blocks blocks = tier_blocks(tier);
  std::vector<std::string> names;
  names.emplace_back("intercept");
  if (blocks.personal) {
    names.emplace_back("age_group");
    names.emplace_back("gender_female");
    names.emplace_back("education");
    names.emplace_back("education_sq");
  }
  if (blocks.firm) {
    names.emplace_back("firm_private");
    names.emplace_back("firm_size");
  }
  if (blocks.job) {
    names.emplace_back("job_responsibility");
    names.emplace_back("job_experience");
    names.emplace_back("job_education");
    names.emplace_back("skill_ps");
    names.emplace_back("skill_num");
    names.emplace_back("skill_lit");
  }
  if (blocks.tasks) {
    for (const auto& code : task_codes()) names.emplace_back(code);
  }
  return names;
}

DesignMatrix build_design_matrix(std::span<const WorkerRecord> records,
                                 std::span<const OccupationLabel> labels,
                                 ResponseKind kind, int tier,
                                 std::optional<Country> country) {
  const Blocks blocks = tier_blocks(tier);
  const LabelJoin join = attach_labels(records, labels);

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (country && records[i].country != *country) continue;
    const auto& label = join.labels[i];
    if (!label) continue;
    if (kind == ResponseKind::Binary && !label->consensus) continue;
    keep.push_back(i);
  }
  if (keep.empty()) {
    throw EmptyDesign("no worker has a defined " +
                      std::string(to_string(kind)) + " response");
  }

  DesignMatrix design;
  design.feature_names = tier_feature_names(tier);
  design.response_kind = kind;
  design.rows.resize(static_cast<Eigen::Index>(keep.size()),
                     static_cast<Eigen::Index>(design.feature_names.size()));
  design.response.resize(static_cast<Eigen::Index>(keep.size()));
  design.row_ids.reserve(keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const auto& rec = records[keep[r]];
    const auto& label = *join.labels[keep[r]];
    fill_row(design.rows, static_cast<Eigen::Index>(r), rec, blocks);
    design.response(static_cast<Eigen::Index>(r)) =
        kind == ResponseKind::Binary ? static_cast<double>(*label.consensus)
                                     : label.mean;
    design.row_ids.push_back(rec.id);
  }
  check_full_rank(design);
  return design;
}

DesignMatrix build_feature_matrix(std::span<const WorkerRecord> records,
                                  int tier, std::optional<Country> country) {
  const Blocks blocks = tier_blocks(tier);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (country && records[i].country != *country) continue;
    keep.push_back(i);
  }
  if (keep.empty()) throw EmptyDesign("no worker matches the filter");

  DesignMatrix design;
  design.feature_names = tier_feature_names(tier);
  design.rows.resize(static_cast<Eigen::Index>(keep.size()),
                     static_cast<Eigen::Index>(design.feature_names.size()));
  design.row_ids.reserve(keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    fill_row(design.rows, static_cast<Eigen::Index>(r), records[keep[r]],
             blocks);
    design.row_ids.push_back(records[keep[r]].id);
  }
  return design;
}

namespace {

std::vector<std::size_t> resolve_columns(const DesignMatrix& design,
                                         std::span<const std::string> names) {
  std::vector<std::size_t> cols;
  if (names.empty()) {
    for (std::size_t j = 0; j < design.k(); ++j) {
      if (design.feature_names[j] != "intercept") cols.push_back(j);
    }
    return cols;
  }
  for (const auto& name : names) {
    bool found = false;
    for (std::size_t j = 0; j < design.k(); ++j) {
      if (design.feature_names[j] == name) {
        cols.push_back(j);
        found = true;
        break;
      }
    }
    if (!found) throw FeatureMismatch("no column named '" + name + "'");
  }
  return cols;
}

}  // namespace

Eigen::MatrixXd correlation_matrix(const DesignMatrix& design,
                                   std::span<const std::string> names) {
  if (design.n() < 3) throw TooFewPoints("correlations need >= 3 rows");
  const auto cols = resolve_columns(design, names);
  const auto n = static_cast<double>(design.n());
  const auto p = static_cast<Eigen::Index>(cols.size());

  Eigen::MatrixXd centered(design.rows.rows(), p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto col = design.rows.col(static_cast<Eigen::Index>(cols[j]));
    centered.col(j) = col.array() - col.mean();
    const double sd = std::sqrt(centered.col(j).squaredNorm() / n);
    if (sd == 0.0) {
      throw ZeroVariance("column '" +
                         design.feature_names[cols[static_cast<std::size_t>(j)]] +
                         "' has zero variance");
    }
    centered.col(j) /= sd;
  }
  Eigen::MatrixXd corr = (centered.transpose() * centered) / n;
  // exact unit diagonal and symmetry, killing accumulated rounding
  corr = ((corr + corr.transpose()) / 2.0).eval();
  corr.diagonal().setOnes();
  return corr;
}

std::string correlation_csv(const DesignMatrix& design,
                            std::span<const std::string> names) {
  const auto cols = resolve_columns(design, names);
  const Eigen::MatrixXd corr = correlation_matrix(design, names);
  std::ostringstream out;
  out << "variable";
  for (auto j : cols) out << ',' << design.feature_names[j];
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < corr.rows(); ++i) {
    out << design.feature_names[cols[static_cast<std::size_t>(i)]];
    for (Eigen::Index j = 0; j < corr.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.4f", corr(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace autorisk
