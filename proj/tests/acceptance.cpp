// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Run through ctest or directly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "autorisk/csv.hpp"
#include "autorisk/design.hpp"
#include "autorisk/diagnostics.hpp"
#include "autorisk/evaluation.hpp"
#include "autorisk/glm.hpp"
#include "autorisk/labeling.hpp"
#include "autorisk/lda.hpp"
#include "autorisk/rng.hpp"
#include "autorisk/synth.hpp"

#ifndef AUTORISK_CLI_PATH
#error "AUTORISK_CLI_PATH must point at the command line binary"
#endif

using namespace autorisk;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("%s  %d. %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

DesignMatrix random_binary_design(std::size_t n, std::size_t k,
                                  std::uint64_t seed) {
  Rng rng(seed);
  DesignMatrix d;
  d.feature_names.emplace_back("intercept");
  for (std::size_t j = 1; j < k; ++j)
    d.feature_names.push_back("f" + std::to_string(j));
  d.rows = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n),
                                 static_cast<Eigen::Index>(k));
  Eigen::VectorXd beta(static_cast<Eigen::Index>(k));
  beta(0) = -0.3;
  for (std::size_t j = 1; j < k; ++j) {
    beta(static_cast<Eigen::Index>(j)) = (j % 2 == 0 ? 0.7 : -0.5);
    for (std::size_t i = 0; i < n; ++i)
      d.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rng.normal();
  }
  d.response.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double p = logistic(d.rows.row(static_cast<Eigen::Index>(i)) * beta);
    d.response(static_cast<Eigen::Index>(i)) = rng.below(p) ? 1.0 : 0.0;
  }
  d.response_kind = ResponseKind::Binary;
  for (std::size_t i = 0; i < n; ++i)
    d.row_ids.push_back("r" + std::to_string(i));
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(AUTORISK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || (status & 0x7f) != 0) return -1;
  return (status >> 8) & 0xff;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("autorisk_accept_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct ComparisonRowText {
  double auc = -1;       // -1 when the cell is empty
  double aic = -1;
  double share = -1;
  std::string shape;
};

ComparisonRowText parse_row(const csv::Table& t, const std::string& model) {
  for (const auto& row : t.rows) {
    if (row[t.column("model")] != model) continue;
    ComparisonRowText r;
    const auto cell = [&](const char* name) {
      return row[t.column(name)];
    };
    if (!cell("auc").empty()) r.auc = std::stod(cell("auc"));
    if (!cell("aic").empty()) r.aic = std::stod(cell("aic"));
    r.share = std::stod(cell("high_risk_share"));
    r.shape = cell("shape");
    return r;
  }
  throw Error("comparison.csv has no row for " + model);
}

}  // namespace

int main() {
  std::printf("acceptance checks\n=================\n");

  criterion(1, "fractional QMLE equals logit MLE on binary data", [](std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto d = random_binary_design(500, 10, 1001);
    auto frac = d;
    frac.response_kind = ResponseKind::Fractional;
    const auto a = fit_logit(d);
    const auto b = fit_fractional(frac);
    double worst = 0;
    for (Eigen::Index j = 0; j < a.coefficients.size(); ++j) {
      const double denom = std::max(1e-12, std::abs(a.coefficients(j)));
      worst = std::max(worst,
                       std::abs(a.coefficients(j) - b.coefficients(j)) / denom);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::ostringstream os;
    os << "max relative gap " << worst << ", " << secs << "s";
    detail = os.str();
    return a.converged && b.converged && worst < 1e-6 && secs < 1.0;
  });

  criterion(2, "score vanishes at the optimum; grid search agrees", [](std::string& detail) {
    // every converged fit in a basket spanning tiers, families and data
    double worst_score = 0;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto d = random_binary_design(400, 8, seed);
      const auto fit = fit_logit(d);
      if (!fit.converged) return false;
      worst_score = std::max(
          worst_score,
          quasi_score(d.rows, d.response, fit.coefficients)
              .lpNorm<Eigen::Infinity>());
    }
    SynthConfig cfg;
    cfg.seed = 7;
    const auto art = run_pipeline(cfg);
    const auto labels = art.labels;
    const auto& workers = art.imputed;
    for (int tier : {1, 2, 3, 4, 5, 6}) {
      const auto design = build_design_matrix(workers, labels,
                                              ResponseKind::Binary, tier,
                                              Country::DE);
      const auto fit = fit_logit(design);
      if (!fit.converged) return false;
      worst_score = std::max(
          worst_score,
          quasi_score(design.rows, design.response, fit.coefficients)
              .lpNorm<Eigen::Infinity>());
      const auto fdesign = build_design_matrix(workers, labels,
                                               ResponseKind::Fractional, tier,
                                               Country::DE);
      const auto ffit = fit_fractional(fdesign);
      if (!ffit.converged) return false;
      worst_score = std::max(
          worst_score,
          quasi_score(fdesign.rows, fdesign.response, ffit.coefficients)
              .lpNorm<Eigen::Infinity>());
    }

    // two-coefficient toy problem vs a refined brute-force grid
    const auto toy = random_binary_design(60, 2, 1717);
    const auto fit = fit_logit(toy);
    double b0 = 0, b1 = 0, half = 5.0, step = 0.1;
    while (step >= 1e-4 / 2) {
      double best = -1e300, best0 = b0, best1 = b1;
      for (double c0 = b0 - half; c0 <= b0 + half + step / 2; c0 += step)
        for (double c1 = b1 - half; c1 <= b1 + half + step / 2; c1 += step) {
          Eigen::Vector2d beta(c0, c1);
          const double ll = quasi_log_likelihood(toy.rows, toy.response, beta);
          if (ll > best) {
            best = ll;
            best0 = c0;
            best1 = c1;
          }
        }
      b0 = best0;
      b1 = best1;
      half = 2 * step;
      step /= 10;
    }
    const double grid_gap = std::max(std::abs(fit.coefficients(0) - b0),
                                     std::abs(fit.coefficients(1) - b1));
    std::ostringstream os;
    os << "worst score norm " << worst_score << ", grid gap " << grid_gap;
    detail = os.str();
    return worst_score < 1e-8 && grid_gap < 1e-4;
  });

  criterion(3, "AUC equals pairwise concordance and survives transforms", [](std::string& detail) {
    Rng rng(3003);
    std::size_t checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 20 + rng.pick(481);
      std::vector<double> scores(n);
      std::vector<int> labels(n);
      bool has0 = false, has1 = false;
      for (std::size_t i = 0; i < n; ++i) {
        const double raw = rng.uniform01();
        scores[i] = trial % 2 == 0 ? std::round(raw * 25.0) / 25.0 : raw;
        labels[i] = rng.below(0.4) ? 1 : 0;
        (labels[i] ? has1 : has0) = true;
      }
      if (!has0 || !has1) continue;

      double concordant = 0;
      std::size_t pairs = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (labels[j] != 0) continue;
          ++pairs;
          if (scores[i] > scores[j])
            concordant += 1.0;
          else if (scores[i] == scores[j])
            concordant += 0.5;
        }
      }
      const double oracle = concordant / static_cast<double>(pairs);
      const double got = roc_auc(scores, labels).auc;
      if (got != oracle) return false;

      std::vector<double> affine(n), expo(n);
      for (std::size_t i = 0; i < n; ++i) {
        affine[i] = 7.0 * scores[i] - 2.0;
        expo[i] = std::exp(scores[i]);
      }
      if (roc_auc(affine, labels).auc != got) return false;
      if (roc_auc(expo, labels).auc != got) return false;
      ++checked;
    }
    detail = std::to_string(checked) + " score sets";
    return checked >= 90;
  });

  criterion(4, "consensus rule and expert-panel boundary rows", [](std::string& detail) {
    const auto panel = [](std::size_t yes, std::size_t no, std::size_t skip) {
      ExpertVoteSet v;
      v.occupations = {"5223"};
      std::vector<std::optional<bool>> row;
      for (std::size_t i = 0; i < yes; ++i) row.emplace_back(true);
      for (std::size_t i = 0; i < no; ++i) row.emplace_back(false);
      for (std::size_t i = 0; i < skip; ++i) row.emplace_back(std::nullopt);
      for (std::size_t e = 0; e < row.size(); ++e)
        v.expert_ids.push_back("e" + std::to_string(e));
      v.votes = {row};
      return aggregate_labels(v)[0];
    };

    Rng rng(4004);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t yes = rng.pick(30);
      const std::size_t no = rng.pick(30);
      if (yes + no == 0) continue;
      const auto l = panel(yes, no, rng.pick(5));
      const double n = static_cast<double>(yes + no);
      const double share_yes = static_cast<double>(yes) / n;
      const double share_no = static_cast<double>(no) / n;
      const bool expect = std::max(share_yes, share_no) >= 0.75;
      const int mode = yes > no ? 1 : 0;
      if (l.consensus.has_value() != expect) return false;
      if (expect && *l.consensus != mode) return false;
      if (l.mode != mode) return false;
      if (std::abs(l.mean - share_yes) > 1e-12) return false;
    }

    const auto a = panel(28, 2, 0);
    const auto b = panel(1, 3, 0);
    const auto c = panel(13, 13, 0);
    const bool rows_ok =
        a.mean == 28.0 / 30.0 && a.mode == 1 &&
        a.consensus.has_value() && *a.consensus == 1 &&
        b.mean == 0.25 && b.mode == 0 && b.consensus.has_value() &&
        *b.consensus == 0 && c.mean == 0.5 && c.mode == 0 &&
        !c.consensus.has_value();
    detail = "1000 random panels + 3 boundary rows";
    return rows_ok;
  });

  criterion(5, "reproduce --seed 7: bimodal logit/LDA, unimodal fractional", [](std::string& detail) {
    const fs::path dir = fresh_dir("c5");
    const auto t0 = std::chrono::steady_clock::now();
    if (run_cli("reproduce --seed 7 --out " + dir.string()) != 0) {
      detail = "CLI run failed";
      return false;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const auto table = csv::parse_string(slurp(dir / "comparison.csv"));
    const auto logit = parse_row(table, "logit");
    const auto frac = parse_row(table, "fractional");
    const auto lda = parse_row(table, "lda");

    std::ostringstream os;
    os << "logit " << logit.share << " " << logit.shape << ", lda "
       << lda.share << " " << lda.shape << ", fractional " << frac.share
       << " " << frac.shape << ", " << secs << "s";
    detail = os.str();

    const bool logit_ok = logit.shape == "bimodal" && logit.share >= 0.35 &&
                          logit.share <= 0.55;
    const bool lda_ok = lda.shape == "bimodal" && lda.share >= 0.35 &&
                        lda.share <= 0.55;
    const bool frac_ok = frac.shape == "unimodal" && frac.share >= 0.05 &&
                         frac.share <= 0.20;
    const bool ratio_ok = logit.share >= 2.0 * frac.share;
    return logit_ok && lda_ok && frac_ok && ratio_ok && secs < 10.0;
  });

  criterion(6, "AIC ladder: full model beats personal-only and tasks-only", [](std::string& detail) {
    SynthConfig cfg;
    cfg.seed = 7;
    const auto out = generate_population(cfg);
    const auto labels = aggregate_labels(out.votes);
    const auto workers = impute_means(out.workers);
    const auto fit_tier = [&](int tier) {
      return fit_logit(build_design_matrix(workers, labels,
                                           ResponseKind::Binary, tier,
                                           Country::DE));
    };
    const double aic1 = fit_tier(1).aic;
    const double aic5 = fit_tier(5).aic;
    const double aic6 = fit_tier(6).aic;
    std::ostringstream os;
    os << "tier1 " << aic1 << ", tier5 " << aic5 << ", tier6 " << aic6;
    detail = os.str();
    return aic6 < aic1 && aic6 < aic5;
  });

  criterion(7, "LDA matches the direct Bayes oracle", [](std::string& detail) {
    Rng rng(7007);
    DesignMatrix d;
    d.feature_names = {"intercept", "x", "y"};
    const int n = 600;
    d.rows = Eigen::MatrixXd::Ones(n, 3);
    d.response.resize(n);
    for (int i = 0; i < n; ++i) {
      const bool cls = i % 2 == 1;
      const double e1 = rng.normal();
      const double e2 = rng.normal();
      d.rows(i, 1) = (cls ? 1.8 : 0.0) + e1;
      d.rows(i, 2) = (cls ? 0.9 : 0.0) + 0.4 * e1 + 0.9 * e2;
      d.response(i) = cls ? 1.0 : 0.0;
    }
    d.response_kind = ResponseKind::Binary;
    const auto m = fit_lda(d);
    const auto p = predict_proba(m, d);

    const Eigen::Matrix2d cov = m.pooled_covariance;
    const Eigen::Matrix2d inv = cov.inverse();
    const double det = cov.determinant();
    double worst = 0;
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d x(d.rows(i, 1), d.rows(i, 2));
      const auto density = [&](const Eigen::VectorXd& mu) {
        const Eigen::Vector2d c = x - mu;
        return std::exp(-0.5 * c.dot(inv * c)) /
               (2.0 * std::numbers::pi * std::sqrt(det));
      };
      const double f0 = m.priors[0] * density(m.mean0);
      const double f1 = m.priors[1] * density(m.mean1);
      worst = std::max(worst, std::abs(p(i) - f1 / (f0 + f1)));
    }

    // posterior of the class-flipped model is the complement
    auto flipped_design = d;
    flipped_design.response = Eigen::VectorXd::Ones(n) - d.response;
    const auto q = predict_proba(fit_lda(flipped_design), d);
    double worst_sum = 0;
    for (int i = 0; i < n; ++i)
      worst_sum = std::max(worst_sum, std::abs(p(i) + q(i) - 1.0));

    // symmetric two-class midpoint
    LdaModel sym = m;
    sym.priors = {0.5, 0.5};
    sym.mean1 = Eigen::Vector2d(1.0, 0.5);
    sym.mean0 = -sym.mean1;
    DesignMatrix mid;
    mid.feature_names = {"x", "y"};
    mid.rows = Eigen::MatrixXd::Zero(1, 2);
    const double pmid = predict_proba(sym, mid)(0);

    std::ostringstream os;
    os << "max Bayes gap " << worst << ", max 1-sum gap " << worst_sum
       << ", midpoint " << pmid;
    detail = os.str();
    return worst < 1e-10 && worst_sum < 1e-12 &&
           std::abs(pmid - 0.5) < 1e-12;
  });

  criterion(8, "byte-identical reruns", [](std::string& detail) {
    const fs::path a = fresh_dir("c8a");
    const fs::path b = fresh_dir("c8b");
    if (run_cli("reproduce --seed 7 --out " + a.string()) != 0) return false;
    if (run_cli("reproduce --seed 7 --out " + b.string()) != 0) return false;
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      const auto ext = entry.path().extension();
      if (ext != ".csv" && ext != ".svg") continue;
      ++compared;
      if (slurp(entry.path()) != slurp(b / entry.path().filename())) {
        detail = entry.path().filename().string() + " differs";
        return false;
      }
    }
    detail = std::to_string(compared) + " files identical";
    return compared >= 6;
  });

  criterion(9, "analytic score matches central finite differences", [](std::string& detail) {
    Rng rng(9009);
    const auto bd = random_binary_design(150, 6, 909);
    auto fd = random_binary_design(150, 6, 910);
    for (Eigen::Index i = 0; i < fd.response.size(); ++i) {
      const double u = rng.uniform01();
      fd.response(i) = u < 0.15 ? 0.0 : u > 0.85 ? 1.0 : rng.uniform01();
    }
    fd.response_kind = ResponseKind::Fractional;

    const double h = 1e-6;
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd beta(6);
      for (int j = 0; j < 6; ++j) beta(j) = 2.0 * rng.uniform01() - 1.0;
      for (const DesignMatrix* d :
           {&bd, static_cast<const DesignMatrix*>(&fd)}) {
        const auto g = quasi_score(d->rows, d->response, beta);
        for (int j = 0; j < 6; ++j) {
          Eigen::VectorXd up = beta, dn = beta;
          up(j) += h;
          dn(j) -= h;
          const double fd_j =
              (quasi_log_likelihood(d->rows, d->response, up) -
               quasi_log_likelihood(d->rows, d->response, dn)) /
              (2 * h);
          const double denom = std::max(1.0, std::abs(g(j)));
          worst = std::max(worst, std::abs(g(j) - fd_j) / denom);
        }
      }
    }
    std::ostringstream os;
    os << "worst relative gap " << worst;
    detail = os.str();
    return worst < 1e-5;
  });

  std::printf("=================\n%s (%d criteria failed)\n",
              g_failures == 0 ? "ALL CRITERIA PASS" : "ACCEPTANCE FAILED",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
