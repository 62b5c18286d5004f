#include "autorisk/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "autorisk/errors.hpp"
#include "autorisk/rng.hpp"

namespace autorisk {

namespace {

DesignMatrix take_rows(const DesignMatrix& design,
                       std::span<const std::size_t> idx) {
  DesignMatrix out;
  out.feature_names = design.feature_names;
  out.response_kind = design.response_kind;
  out.rows.resize(static_cast<Eigen::Index>(idx.size()),
                  design.rows.cols());
  if (design.has_response()) {
    out.response.resize(static_cast<Eigen::Index>(idx.size()));
  }
  out.row_ids.reserve(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.rows.row(static_cast<Eigen::Index>(r)) =
        design.rows.row(static_cast<Eigen::Index>(idx[r]));
    if (design.has_response()) {
      out.response(static_cast<Eigen::Index>(r)) =
          design.response(static_cast<Eigen::Index>(idx[r]));
    }
    out.row_ids.push_back(design.row_ids[idx[r]]);
  }
  return out;
}

bool one_class(const DesignMatrix& design) {
  if (design.response_kind != ResponseKind::Binary) return false;
  bool saw0 = false, saw1 = false;
  for (Eigen::Index i = 0; i < design.response.size(); ++i) {
    (design.response(i) == 1.0 ? saw1 : saw0) = true;
  }
  return !(saw0 && saw1);
}

}  // namespace

SplitResult train_test_split(const DesignMatrix& design,
                             double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidConfig("train fraction must lie in (0,1)");
  }
  if (!design.has_response()) {
    throw EmptyDesign("cannot split a design without a response");
  }
  const std::size_t n = design.n();
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) {
    throw DegenerateSplit("split leaves one side empty");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  // Fisher-Yates over the documented uniform01 stream
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.pick(i + 1)]);
  }
  std::vector<std::size_t> train_idx(order.begin(),
                                     order.begin() + static_cast<long>(n_train));
  std::vector<std::size_t> test_idx(order.begin() + static_cast<long>(n_train),
                                    order.end());

  SplitResult split{take_rows(design, train_idx), take_rows(design, test_idx)};
  if (one_class(split.train) || one_class(split.test)) {
    throw DegenerateSplit("a side of the split holds a single class");
  }
  return split;
}

RocResult roc_auc(std::span<const double> scores,
                  std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw FeatureMismatch("scores and labels differ in length");
  }
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw InvalidConfig("scores must be finite");
    }
    if (labels[i] == 1) {
      ++pos;
    } else if (labels[i] == 0) {
      ++neg;
    } else {
      throw InvalidConfig("labels must be 0 or 1");
    }
  }
  if (pos == 0 || neg == 0) {
    throw OneClassOnly("ROC needs both classes present");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocResult result;
  result.curve.points.push_back({0.0, 0.0});
  result.curve.thresholds.push_back(std::numeric_limits<double>::infinity());

  // Walk tie groups in descending score order. Within a group of p_g
  // positives and n_g negatives, every one of the p_g*n_g pairs is a tie
  // (half credit); pairs against earlier groups are fully concordant.
  double concordant = 0;
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t p_g = 0, n_g = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] == 1) {
        ++p_g;
      } else {
        ++n_g;
      }
      ++j;
    }
    concordant += static_cast<double>(tp) * static_cast<double>(n_g) +
                  0.5 * static_cast<double>(p_g) * static_cast<double>(n_g);
    tp += p_g;
    fp += n_g;
    result.curve.points.push_back(
        {static_cast<double>(fp) / static_cast<double>(neg),
         static_cast<double>(tp) / static_cast<double>(pos)});
    result.curve.thresholds.push_back(scores[order[i]]);
    i = j;
  }
  result.auc = concordant /
               (static_cast<double>(pos) * static_cast<double>(neg));
  return result;
}

ModelComparison compare_models(std::span<const AnyModel> fits,
                               const DesignMatrix& test, double threshold,
                               const DesignMatrix* population) {
  ModelComparison comparison;
  const bool test_binary =
      test.has_response() && test.response_kind == ResponseKind::Binary;
  std::vector<int> labels;
  if (test_binary) {
    labels.reserve(test.n());
    for (Eigen::Index i = 0; i < test.response.size(); ++i) {
      labels.push_back(test.response(i) == 1.0 ? 1 : 0);
    }
  }

  for (const auto& fit : fits) {
    ComparisonRow row;
    row.model = std::string(model_kind(fit));
    row.input = row.model == "fractional" ? "discrete" : "binary";

    const Eigen::VectorXd test_p = predict_proba(fit, test);
    if (test_binary && row.input == "binary") {
      std::vector<double> scores(test_p.data(), test_p.data() + test_p.size());
      row.auc = roc_auc(scores, labels).auc;
    }
    if (const auto* glm = std::get_if<FittedGlm>(&fit)) {
      row.aic = glm->aic;
    }

    std::vector<double> probs;
    if (population != nullptr) {
      const Eigen::VectorXd pop_p = predict_proba(fit, *population);
      probs.assign(pop_p.data(), pop_p.data() + pop_p.size());
    } else {
      probs.assign(test_p.data(), test_p.data() + test_p.size());
    }
    row.high_risk_share = high_risk_share(probs, threshold);
    row.shape = classify_shape(bimodality_coefficient(probs));
    comparison.rows.push_back(std::move(row));
  }
  return comparison;
}

std::string comparison_csv(const ModelComparison& comparison) {
  std::ostringstream out;
  out << "model,input,auc,aic,high_risk_share,shape\n";
  char buf[32];
  for (const auto& row : comparison.rows) {
    out << row.model << ',' << row.input << ',';
    if (row.auc) {
      std::snprintf(buf, sizeof(buf), "%.6f", *row.auc);
      out << buf;
    }
    out << ',';
    if (row.aic) {
      std::snprintf(buf, sizeof(buf), "%.3f", *row.aic);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.6f", row.high_risk_share);
    out << ',' << buf << ',' << to_string(row.shape) << '\n';
  }
  return out.str();
}

std::string comparison_json(const ModelComparison& comparison) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : comparison.rows) {
    nlohmann::json r;
    r["model"] = row.model;
    r["input"] = row.input;
    if (row.auc) {
      r["auc"] = *row.auc;
    } else {
      r["auc"] = nullptr;
    }
    if (row.aic) {
      r["aic"] = *row.aic;
    } else {
      r["aic"] = nullptr;
    }
    r["high_risk_share"] = row.high_risk_share;
    r["shape"] = std::string(to_string(row.shape));
    rows.push_back(std::move(r));
  }
  nlohmann::json j;
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace autorisk
