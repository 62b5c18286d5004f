#include "autorisk/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "autorisk/design.hpp"
#include "autorisk/diagnostics.hpp"
#include "autorisk/errors.hpp"
#include "autorisk/glm.hpp"
#include "autorisk/lda.hpp"

namespace autorisk {

namespace {

constexpr double kSkipRate = 0.12;          // expert skips a question
constexpr double kIntensityNoise = 0.05;    // occupation-level jitter
constexpr double kIntensityFloor = 0.02;
constexpr double kIntensityCeil = 0.98;
constexpr double kSizeTilt = 2.0;           // big occupations lean routine

struct OccupationSeed {
  const char* isco4;
  double anchor;
};

// Common occupations with anchor intensities spanning personal-service
// and professional work (low) through clerical and machine-operating work
// (high). Codes follow the ISCO-08 classification.
constexpr OccupationSeed kPool[] = {
    {"5311", 0.033}, {"5120", 0.034}, {"3255", 0.038}, {"2652", 0.067},
    {"5141", 0.067}, {"3412", 0.071}, {"5412", 0.071}, {"2341", 0.074},
    {"2635", 0.103}, {"3355", 0.103}, {"5321", 0.103}, {"6113", 0.111},
    {"2161", 0.148}, {"6130", 0.148}, {"7421", 0.160}, {"2212", 0.172},
    {"2310", 0.172}, {"5131", 0.179}, {"7126", 0.179}, {"7512", 0.185},
    {"1349", 0.192}, {"7412", 0.200}, {"1323", 0.207}, {"1411", 0.207},
    {"3221", 0.222}, {"2330", 0.231}, {"7411", 0.240}, {"3259", 0.250},
    {"5151", 0.250}, {"2142", 0.259}, {"2149", 0.261}, {"2642", 0.267},
    {"1321", 0.286}, {"2611", 0.296}, {"2359", 0.304}, {"2144", 0.308},
    {"3251", 0.321}, {"3411", 0.321}, {"3256", 0.333}, {"2166", 0.345},
    {"2631", 0.346}, {"7233", 0.346}, {"7522", 0.348}, {"2512", 0.357},
    {"5414", 0.357}, {"9112", 0.357}, {"7119", 0.360}, {"2421", 0.370},
    {"5153", 0.370}, {"7112", 0.370}, {"9412", 0.385}, {"3257", 0.400},
    {"7231", 0.400}, {"2431", 0.407}, {"7212", 0.407}, {"1324", 0.414},
    {"3359", 0.423}, {"5223", 0.423}, {"7543", 0.458}, {"3115", 0.462},
    {"2262", 0.500}, {"9629", 0.500}, {"7214", 0.520}, {"7523", 0.520},
    {"8219", 0.538}, {"3353", 0.556}, {"3352", 0.571}, {"8212", 0.577},
    {"9332", 0.577}, {"7223", 0.583}, {"3322", 0.593}, {"3323", 0.593},
    {"3334", 0.607}, {"4120", 0.607}, {"2411", 0.633}, {"7321", 0.640},
    {"9329", 0.640}, {"9333", 0.652}, {"8160", 0.667}, {"9334", 0.692},
    {"9621", 0.692}, {"3118", 0.720}, {"3313", 0.731}, {"4110", 0.750},
    {"8322", 0.759}, {"8131", 0.792}, {"8332", 0.793}, {"8121", 0.800},
    {"8122", 0.800}, {"4321", 0.828}, {"4412", 0.862}, {"3324", 0.867},
    {"4322", 0.875}, {"4312", 0.897}, {"5230", 0.897}, {"3321", 0.900},
    {"4222", 0.900}, {"4323", 0.926}, {"4311", 0.933},
};
constexpr std::size_t kPoolSize = std::size(kPool);

// Anchor for codes synthesized past the pool, by ISCO major group.
constexpr double kMajorAnchor[10] = {0,    0.30, 0.25, 0.45, 0.85,
                                     0.40, 0.15, 0.40, 0.65, 0.55};

// Per-task propensity model theta = base + routine_effect * loading *
// (intensity - 1/2) + noise. Routine clerical tasks load positive;
// interpersonal, physical and complex-content tasks load negative.
struct TaskShape {
  double base;
  double loading;
};

constexpr TaskShape kTaskShapes[kTaskCount] = {
    {0.70, -0.15},  // human_share
    {0.45, -0.55},  // human_train
    {0.28, -0.70},  // human_speech
    {0.45, 0.25},   // human_sell
    {0.55, -0.50},  // human_advise
    {0.45, -0.45},  // human_influence
    {0.40, -0.35},  // human_negotiate
    {0.72, 0.20},   // itusage_email
    {0.60, -0.10},  // itusage_internet
    {0.30, 0.30},   // itusage_buy
    {0.50, 0.60},   // itusage_excel
    {0.55, -0.25},  // itusage_word
    {0.12, -0.50},  // itusage_code
    {0.20, 0.25},   // itusage_discuss
    {0.50, -0.45},  // physical_long
    {0.50, -0.30},  // physical_accurate
    {0.65, -0.40},  // planning_own
    {0.40, -0.45},  // planning_others
    {0.65, -0.35},  // planning_time
    {0.60, 0.15},   // problem_simple
    {0.40, -0.65},  // problem_complex
    {0.55, -0.10},  // reading_instruction
    {0.65, 0.10},   // reading_letter
    {0.50, -0.20},  // reading_news
    {0.35, -0.60},  // reading_article
    {0.30, -0.65},  // reading_book
    {0.45, -0.40},  // reading_manual
    {0.45, 0.45},   // reading_bill
    {0.45, -0.30},  // reading_graph
    {0.60, 0.10},   // wricalc_letter
    {0.15, -0.40},  // wricalc_news
    {0.45, -0.50},  // wricalc_report
    {0.50, 0.55},   // wricalc_form
    {0.45, 0.35},   // wricalc_budget
    {0.45, 0.20},   // wricalc_fraction
    {0.55, 0.65},   // wricalc_calculator
    {0.35, 0.30},   // wricalc_chart
    {0.50, 0.25},   // wricalc_simple
    {0.15, -0.55},  // wricalc_advanced
};

FrequencyAnswer bucket_propensity(double theta) {
  if (theta >= 0.80) return FrequencyAnswer::Daily;
  if (theta >= 0.55) return FrequencyAnswer::WeeklyToDaily;
  if (theta >= 0.35) return FrequencyAnswer::MonthlyToWeekly;
  if (theta >= 0.15) return FrequencyAnswer::LessThanMonthly;
  return FrequencyAnswer::Never;
}

std::string padded_id(char prefix, std::size_t index, std::size_t total) {
  std::string digits = std::to_string(total);
  std::string num = std::to_string(index + 1);
  std::string out(1, prefix);
  out.append(digits.size() - std::min(digits.size(), num.size()), '0');
  out += num;
  return out;
}

double golden_frac(std::size_t i) {
  const double x = static_cast<double>(i + 1) * 0.6180339887498949;
  return x - std::floor(x);
}

}  // namespace

void validate(const SynthConfig& config) {
  if (config.n_experts == 0) throw InvalidConfig("n_experts must be positive");
  if (config.n_occupations == 0) {
    throw InvalidConfig("n_occupations must be positive");
  }
  if (config.n_workers == 0) throw InvalidConfig("n_workers must be positive");
  if (!(config.country_split >= 0.0 && config.country_split <= 1.0)) {
    throw InvalidConfig("country_split must lie in [0,1]");
  }
  if (!(config.missing_rate >= 0.0 && config.missing_rate < 1.0)) {
    throw InvalidConfig("missing_rate must lie in [0,1)");
  }
  if (!(config.routine_effect > 0.0)) {
    throw InvalidConfig("routine_effect must be positive");
  }
  if (!(config.noise_sd > 0.0)) {
    throw InvalidConfig("noise_sd must be positive");
  }
}

std::vector<LatentOccupation> draw_occupations(const SynthConfig& config,
                                               Rng& rng) {
  std::vector<LatentOccupation> occupations;
  occupations.reserve(config.n_occupations);
  std::set<std::string> used;
  // the pool is sorted by anchor, so a short run strides across it to keep
  // the intensity range covered; n >= pool size uses every entry
  const std::size_t from_pool = std::min(config.n_occupations, kPoolSize);
  for (std::size_t i = 0; i < config.n_occupations; ++i) {
    std::string code;
    double anchor;
    if (i < kPoolSize) {
      const std::size_t pick =
          from_pool < 2 ? 0
                        : (i * (kPoolSize - 1) + (from_pool - 1) / 2) /
                              (from_pool - 1);
      code = kPool[pick].isco4;
      anchor = kPool[pick].anchor;
    } else {
      // extend the pool: walk the code space deterministically
      const int major = static_cast<int>(i % 9) + 1;
      int minor = static_cast<int>((i * 7) % 1000);
      do {
        code = std::to_string(major * 1000 + minor);
        minor = (minor + 1) % 1000;
      } while (used.count(code) > 0);
      anchor = kMajorAnchor[major];
    }
    used.insert(code);
    const double intensity =
        std::clamp(anchor + kIntensityNoise * rng.normal(), kIntensityFloor,
                   kIntensityCeil);
    occupations.push_back({std::move(code), intensity});
  }
  return occupations;
}

ExpertVoteSet simulate_votes(std::span<const LatentOccupation> occupations,
                             std::size_t n_experts, Rng& rng) {
  ExpertVoteSet set;
  set.occupations.reserve(occupations.size());
  set.expert_ids.reserve(n_experts);
  for (std::size_t e = 0; e < n_experts; ++e) {
    set.expert_ids.push_back(padded_id('e', e, n_experts));
  }
  for (const auto& occ : occupations) {
    set.occupations.push_back(occ.isco4);
    std::vector<std::optional<bool>> votes(n_experts);
    for (std::size_t e = 0; e < n_experts; ++e) {
      const bool yes = rng.below(occ.routine_intensity);
      const bool skipped = rng.below(kSkipRate);
      if (!skipped) votes[e] = yes;
    }
    set.votes.push_back(std::move(votes));
  }
  return set;
}

namespace {

std::vector<double> occupation_weights(
    std::span<const LatentOccupation> occupations) {
  const std::size_t n = occupations.size();
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    // mild Zipf-like size skew, decoupled from the anchor ordering,
    // tilted so routine-heavy occupations employ more people
    const auto rank = static_cast<double>(
        std::floor(golden_frac(i) * static_cast<double>(n)));
    weights[i] = (1.0 / (1.0 + 0.05 * rank)) *
                 (1.0 + kSizeTilt * occupations[i].routine_intensity);
  }
  return weights;
}

WorkerRecord draw_worker(std::size_t index, const SynthConfig& config,
                         std::span<const LatentOccupation> occupations,
                         std::span<const double> occ_weights,
                         std::size_t n_austrian, Rng& rng) {
  WorkerRecord rec;
  rec.id = padded_id('w', index, config.n_workers);

  const std::size_t occ = rng.categorical(occ_weights);
  rec.isco4 = occupations[occ].isco4;
  const double intensity = occupations[occ].routine_intensity;
  rec.country = index < n_austrian ? Country::AT : Country::DE;

  static constexpr double kAgeWeights[10] = {0.06, 0.10, 0.12, 0.13, 0.13,
                                             0.12, 0.11, 0.10, 0.08, 0.05};
  rec.age_group = static_cast<int>(rng.categorical(kAgeWeights));

  rec.gender = rng.below(0.52) ? Gender::Female : Gender::Male;

  const double edu_raw = 16.0 - 4.0 * intensity + 2.0 * rng.normal();
  const double edu = std::clamp(std::round(edu_raw), 4.0, 20.0);
  rec.education_years = rng.below(config.missing_rate)
                            ? std::nullopt
                            : std::make_optional(edu);

  rec.firm_sector = rng.below(0.40 + 0.40 * intensity) ? FirmSector::Private
                                                       : FirmSector::PublicOrNgo;

  static constexpr double kSizeWeights[5] = {0.28, 0.27, 0.20, 0.15, 0.10};
  rec.firm_size = static_cast<int>(rng.categorical(kSizeWeights));

  const bool responsible = rng.below(0.55 - 0.35 * intensity);
  rec.job_responsibility = rng.below(config.missing_rate)
                               ? std::nullopt
                               : std::make_optional(responsible);

  static constexpr double kExperienceWeights[5] = {0.15, 0.20, 0.22, 0.23,
                                                   0.20};
  rec.job_experience = static_cast<int>(rng.categorical(kExperienceWeights));

  const double p_high = 0.55 - 0.40 * intensity;
  const double kJobEduWeights[3] = {1.0 - 0.35 - p_high, 0.35, p_high};
  rec.job_education = static_cast<int>(rng.categorical(kJobEduWeights));

  // three correlated test scores sharing one common factor
  const double common = rng.normal();
  static constexpr double kSkillBase[3] = {295.0, 290.0, 292.0};
  std::optional<double>* skills[3] = {&rec.skill_ps, &rec.skill_num,
                                      &rec.skill_lit};
  for (int s = 0; s < 3; ++s) {
    const double raw = kSkillBase[s] - 50.0 * intensity + 30.0 * common +
                       14.0 * rng.normal();
    const double value =
        std::clamp(std::round(raw * 10.0) / 10.0, 0.0, 500.0);
    *skills[s] = rng.below(config.missing_rate) ? std::nullopt
                                                : std::make_optional(value);
  }

  for (std::size_t t = 0; t < kTaskCount; ++t) {
    const double theta = kTaskShapes[t].base +
                         config.routine_effect * kTaskShapes[t].loading *
                             (intensity - 0.5) +
                         config.noise_sd * rng.normal();
    const FrequencyAnswer answer = bucket_propensity(theta);
    const bool missing = rng.below(config.missing_rate);
    rec.tasks[t] = missing ? FrequencyAnswer::NoResponse : answer;
    rec.task_values[t] = encode_frequency(rec.tasks[t]);
  }
  return rec;
}

}  // namespace

SynthOutput generate_population(const SynthConfig& config) {
  validate(config);
  Rng rng(config.seed);

  SynthOutput out;
  out.occupations = draw_occupations(config, rng);
  out.votes = simulate_votes(out.occupations, config.n_experts, rng);

  const auto weights = occupation_weights(out.occupations);
  const auto n_austrian = static_cast<std::size_t>(std::llround(
      config.country_split * static_cast<double>(config.n_workers)));
  out.workers.reserve(config.n_workers);
  for (std::size_t w = 0; w < config.n_workers; ++w) {
    out.workers.push_back(
        draw_worker(w, config, out.occupations, weights, n_austrian, rng));
  }
  return out;
}

PipelineArtifacts run_pipeline(const SynthConfig& config) {
  PipelineArtifacts art;
  art.data = generate_population(config);
  art.labels = aggregate_labels(art.data.votes);
  art.imputed = impute_means(art.data.workers);

  const DesignMatrix binary = build_design_matrix(
      art.imputed, art.labels, ResponseKind::Binary, 6, Country::DE);
  const DesignMatrix fractional = build_design_matrix(
      art.imputed, art.labels, ResponseKind::Fractional, 6, Country::DE);
  const DesignMatrix population =
      build_feature_matrix(art.imputed, 6, Country::AT);

  art.logit = fit_logit(binary);
  art.fractional = fit_fractional(fractional);
  art.lda = fit_lda(binary);

  // holdout AUC: refit on the 40% training split and score the held-out
  // rows, so the reported discrimination is out-of-sample
  const SplitResult split = train_test_split(binary, 0.4, config.seed);
  const FittedGlm logit_cv = fit_logit(split.train);
  const LdaModel lda_cv = fit_lda(split.train);
  std::vector<int> test_labels;
  test_labels.reserve(split.test.n());
  for (Eigen::Index i = 0; i < split.test.response.size(); ++i) {
    test_labels.push_back(split.test.response(i) == 1.0 ? 1 : 0);
  }
  auto auc_of = [&](const Eigen::VectorXd& p) {
    const std::vector<double> scores(p.data(), p.data() + p.size());
    return roc_auc(scores, test_labels).auc;
  };
  const double logit_auc = auc_of(predict_proba(logit_cv, split.test));
  const double lda_auc = auc_of(predict_proba(lda_cv, split.test));

  auto population_probs = [&](const Eigen::VectorXd& p) {
    return std::vector<double>(p.data(), p.data() + p.size());
  };
  art.logit_population = population_probs(predict_proba(art.logit, population));
  art.fractional_population =
      population_probs(predict_proba(art.fractional, population));
  art.lda_population = population_probs(predict_proba(art.lda, population));

  auto risk_row = [&](std::string model, std::string input,
                      std::optional<double> auc, std::optional<double> aic,
                      std::span<const double> probs) {
    ComparisonRow row;
    row.model = std::move(model);
    row.input = std::move(input);
    row.auc = auc;
    row.aic = aic;
    row.high_risk_share = high_risk_share(probs, 0.7);
    row.shape = classify_shape(bimodality_coefficient(probs));
    return row;
  };

  art.comparison.rows.push_back(risk_row("logit", "binary", logit_auc,
                                         art.logit.aic, art.logit_population));
  art.comparison.rows.push_back(risk_row("fractional", "discrete",
                                         std::nullopt, art.fractional.aic,
                                         art.fractional_population));
  art.comparison.rows.push_back(risk_row("lda", "binary", lda_auc,
                                         std::nullopt, art.lda_population));
  return art;
}

ModelComparison run_comparison(const SynthConfig& config) {
  return run_pipeline(config).comparison;
}

}  // namespace autorisk
