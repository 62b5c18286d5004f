// Command-line front door. Stages compose via files: synth writes the
// survey CSVs, label aggregates votes, fit/evaluate/predict/report work
// from those files, and reproduce chains the whole pipeline in one run.
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "autorisk/design.hpp"
#include "autorisk/diagnostics.hpp"
#include "autorisk/errors.hpp"
#include "autorisk/evaluation.hpp"
#include "autorisk/glm.hpp"
#include "autorisk/labeling.hpp"
#include "autorisk/lda.hpp"
#include "autorisk/manifest.hpp"
#include "autorisk/model.hpp"
#include "autorisk/svg.hpp"
#include "autorisk/synth.hpp"
#include "autorisk/worker.hpp"

namespace fs = std::filesystem;
using namespace autorisk;

namespace {

template <class... Args>
std::string strf(const char* fmt, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

struct GlobalArgs {
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string config_path;
  std::map<std::string, std::string> config;
};

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "n_experts",   "n_occupations",  "n_workers",
      "country_split",    "missing_rate",   "routine_effect",
      "noise_sd",    "threshold",      "consensus_threshold",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  const std::string text = read_bytes(path);
  std::map<std::string, std::string> values;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  const auto& known = known_config_keys();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfig(path + ":" + std::to_string(lineno) +
                          ": expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InvalidConfig(path + ":" + std::to_string(lineno) +
                          ": unknown key '" + key + "'");
    }
    values[key] = value;
  }
  return values;
}

double config_double(const std::map<std::string, std::string>& config,
                     const std::string& key, double fallback) {
  const auto it = config.find(key);
  if (it == config.end()) return fallback;
  double value = 0;
  const char* begin = it->second.data();
  const char* end = begin + it->second.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidConfig("config: bad number for " + key + ": '" + it->second +
                        "'");
  }
  return value;
}

std::size_t config_size(const std::map<std::string, std::string>& config,
                        const std::string& key, std::size_t fallback) {
  const auto it = config.find(key);
  if (it == config.end()) return fallback;
  unsigned long long value = 0;
  const char* begin = it->second.data();
  const char* end = begin + it->second.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidConfig("config: bad integer for " + key + ": '" + it->second +
                        "'");
  }
  return static_cast<std::size_t>(value);
}

// CLI options bound for synth-shaped commands; count() on the subcommand
// decides whether the flag overrides the config file.
struct SynthFlags {
  std::size_t n_experts = 35;
  std::size_t n_occupations = 100;
  std::size_t n_workers = 4438;
  double country_split = 2051.0 / 4438.0;
  double missing_rate = 0.15;
  double routine_effect = 1.0;
  double noise_sd = 0.30;

  void bind(CLI::App* sub) {
    sub->add_option("--n-experts", n_experts, "number of voting experts");
    sub->add_option("--n-occupations", n_occupations,
                    "number of occupations");
    sub->add_option("--n-workers", n_workers, "number of worker records");
    sub->add_option("--country-split", country_split, "Austrian fraction of workers");
    sub->add_option("--missing-rate", missing_rate,
                    "per-cell missingness probability");
    sub->add_option("--routine-effect", routine_effect,
                    "latent signal strength in task frequencies");
    sub->add_option("--noise-sd", noise_sd,
                    "worker-level noise on task propensities");
  }

  SynthConfig resolve(const GlobalArgs& g, const CLI::App* sub) const {
    SynthConfig c;
    c.seed = g.seed;
    c.n_experts = config_size(g.config, "n_experts", c.n_experts);
    c.n_occupations = config_size(g.config, "n_occupations", c.n_occupations);
    c.n_workers = config_size(g.config, "n_workers", c.n_workers);
    c.country_split = config_double(g.config, "country_split", c.country_split);
    c.missing_rate = config_double(g.config, "missing_rate", c.missing_rate);
    c.routine_effect =
        config_double(g.config, "routine_effect", c.routine_effect);
    c.noise_sd = config_double(g.config, "noise_sd", c.noise_sd);
    if (sub->count("--n-experts")) c.n_experts = n_experts;
    if (sub->count("--n-occupations")) c.n_occupations = n_occupations;
    if (sub->count("--n-workers")) c.n_workers = n_workers;
    if (sub->count("--country-split")) c.country_split = country_split;
    if (sub->count("--missing-rate")) c.missing_rate = missing_rate;
    if (sub->count("--routine-effect")) c.routine_effect = routine_effect;
    if (sub->count("--noise-sd")) c.noise_sd = noise_sd;
    return c;
  }
};

void add_synth_digest(DigestBuilder& d, const SynthConfig& c) {
  d.add("n_experts", std::to_string(c.n_experts));
  d.add("n_occupations", std::to_string(c.n_occupations));
  d.add("n_workers", std::to_string(c.n_workers));
  d.add("country_split", strf("%.17g", c.country_split));
  d.add("missing_rate", strf("%.17g", c.missing_rate));
  d.add("routine_effect", strf("%.17g", c.routine_effect));
  d.add("noise_sd", strf("%.17g", c.noise_sd));
}

RunManifest start_manifest(const std::string& command, const GlobalArgs& g) {
  RunManifest m;
  m.command = command;
  m.seed = g.seed;
  m.started_at = utc_timestamp();
  return m;
}

void finish_manifest(RunManifest& m, const DigestBuilder& d,
                     const GlobalArgs& g) {
  m.config_digest = d.hex();
  m.finished_at = utc_timestamp();
  write_manifest((fs::path(g.out) / "manifest.json").string(), m);
}

std::optional<Country> parse_country(const std::string& code) {
  if (code.empty()) return std::nullopt;
  if (code == "AT") return Country::AT;
  if (code == "DE") return Country::DE;
  throw InvalidConfig("unknown country '" + code + "' (expected AT or DE)");
}

int infer_tier(const std::vector<std::string>& names) {
  for (int tier = kMinTier; tier <= kMaxTier; ++tier) {
    const auto full = tier_feature_names(tier);
    if (names == full) return tier;
    if (full.size() == names.size() + 1 &&
        std::equal(full.begin() + 1, full.end(), names.begin())) {
      return tier;  // discriminant models store no intercept
    }
  }
  throw FeatureMismatch("model features match no covariate tier");
}

const std::vector<std::string>& model_feature_names(const AnyModel& model) {
  if (const auto* glm = std::get_if<FittedGlm>(&model)) {
    return glm->feature_names;
  }
  return std::get<LdaModel>(model).feature_names;
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

std::string coefficient_table(const FittedGlm& glm) {
  std::ostringstream out;
  out << to_string(glm.kind) << " fit, n = " << glm.n << ", "
      << (glm.converged ? "converged" : "NOT converged") << " in "
      << glm.iterations << " iterations\n\n";
  out << strf("%-24s%12s%14s  %s\n", "feature", "estimate", "std. error",
              "signif.");
  for (Eigen::Index i = 0; i < glm.coefficients.size(); ++i) {
    const double est = glm.coefficients(i);
    const double se = std::sqrt(glm.covariance(i, i));
    const double z = se > 0 ? est / se : 0.0;
    const double p = std::erfc(std::abs(z) / std::sqrt(2.0));
    out << strf("%-24s%12.4f%14s  %s\n", glm.feature_names[i].c_str(), est,
                strf("(%.4f)", se).c_str(), significance_stars(p).c_str());
  }
  out << "\nsignificance: * p<0.1, ** p<0.05, *** p<0.01\n";
  out << strf("log-likelihood: %.3f\n", glm.log_likelihood);
  out << strf("AIC: %.3f\n", glm.aic);
  return out.str();
}

std::string coefficient_table(const LdaModel& lda) {
  std::ostringstream out;
  out << "linear discriminant fit, n = " << lda.n << "\n";
  out << strf("class priors: class 0 = %.4f, class 1 = %.4f\n\n",
              lda.priors[0], lda.priors[1]);
  out << strf("%-24s%16s%16s\n", "feature", "mean (class 0)",
              "mean (class 1)");
  for (std::size_t i = 0; i < lda.feature_names.size(); ++i) {
    out << strf("%-24s%16.4f%16.4f\n", lda.feature_names[i].c_str(),
                lda.mean0(static_cast<Eigen::Index>(i)),
                lda.mean1(static_cast<Eigen::Index>(i)));
  }
  return out.str();
}

std::string model_table(const AnyModel& model) {
  if (const auto* glm = std::get_if<FittedGlm>(&model)) {
    return coefficient_table(*glm);
  }
  return coefficient_table(std::get<LdaModel>(model));
}

std::string predictions_csv(std::span<const std::string> ids,
                            const Eigen::VectorXd& probabilities) {
  std::ostringstream out;
  out << "id,probability\n";
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    out << ids[static_cast<std::size_t>(i)] << ','
        << strf("%.6f", probabilities(i)) << '\n';
  }
  return out.str();
}

int cmd_synth(const GlobalArgs& g, const SynthConfig& cfg) {
  RunManifest m = start_manifest("synth", g);
  DigestBuilder d;
  d.add("command", "synth");
  d.add("seed", std::to_string(cfg.seed));
  add_synth_digest(d, cfg);

  const SynthOutput data = generate_population(cfg);
  fs::create_directories(g.out);
  const fs::path workers_path = fs::path(g.out) / "workers.csv";
  const fs::path votes_path = fs::path(g.out) / "votes.csv";
  write_workers_csv(workers_path, data.workers);
  write_votes_csv(votes_path, data.votes);
  m.outputs = {workers_path.string(), votes_path.string()};
  finish_manifest(m, d, g);

  std::cout << "workers.csv: " << data.workers.size() << " records\n";
  std::cout << "votes.csv: " << data.votes.occupations.size()
            << " occupations x " << data.votes.expert_ids.size()
            << " experts\n";
  return 0;
}

int cmd_label(const GlobalArgs& g, const std::string& votes_file,
              double threshold) {
  const std::string votes_path =
      votes_file.empty() ? (fs::path(g.out) / "votes.csv").string()
                         : votes_file;
  RunManifest m = start_manifest("label", g);
  DigestBuilder d;
  d.add("command", "label");
  d.add("threshold", strf("%.17g", threshold));
  d.add_file("votes", votes_path);

  const ExpertVoteSet votes = parse_votes_csv(votes_path);
  const auto labels = aggregate_labels(votes, threshold);
  fs::create_directories(g.out);
  const fs::path labels_path = fs::path(g.out) / "labels.csv";
  write_labels_csv(labels_path, labels);
  m.outputs = {labels_path.string()};
  finish_manifest(m, d, g);

  std::size_t with_consensus = 0;
  for (const auto& label : labels) {
    if (label.consensus) ++with_consensus;
  }
  std::cout << "labels.csv: " << labels.size() << " occupations, "
            << with_consensus << " with consensus\n";
  return 0;
}

int cmd_fit(const GlobalArgs& g, const std::string& model_name, int tier,
            const std::string& workers_file, const std::string& labels_file,
            const std::string& country_code) {
  const std::string workers_path =
      workers_file.empty() ? (fs::path(g.out) / "workers.csv").string()
                           : workers_file;
  const std::string labels_path =
      labels_file.empty() ? (fs::path(g.out) / "labels.csv").string()
                          : labels_file;
  RunManifest m = start_manifest("fit", g);
  DigestBuilder d;
  d.add("command", "fit");
  d.add("model", model_name);
  d.add("tier", std::to_string(tier));
  d.add("country", country_code);
  d.add_file("workers", workers_path);
  d.add_file("labels", labels_path);

  const auto workers = parse_worker_csv(workers_path);
  const auto labels = parse_labels_csv(labels_path);
  const auto imputed = impute_means(workers);
  const auto country = parse_country(country_code);
  const ResponseKind kind = model_name == "fractional"
                                ? ResponseKind::Fractional
                                : ResponseKind::Binary;
  const DesignMatrix design =
      build_design_matrix(imputed, labels, kind, tier, country);

  AnyModel model = [&]() -> AnyModel {
    if (model_name == "logit") return fit_logit(design);
    if (model_name == "fractional") return fit_fractional(design);
    return fit_lda(design);
  }();

  fs::create_directories(g.out);
  const std::string stem = "model_" + model_name + "_tier" +
                           std::to_string(tier);
  const fs::path model_path = fs::path(g.out) / (stem + ".json");
  const fs::path table_path =
      fs::path(g.out) / ("coefficients_" + model_name + "_tier" +
                         std::to_string(tier) + ".txt");
  write_model(model_path, model);
  const std::string table = model_table(model);
  write_text_file(table_path.string(), table);
  m.outputs = {model_path.string(), table_path.string()};
  finish_manifest(m, d, g);

  std::cout << table;
  return 0;
}

int cmd_evaluate(const GlobalArgs& g, const std::string& model_file,
                 const std::string& workers_file,
                 const std::string& labels_file,
                 const std::string& country_code, double threshold) {
  const std::string workers_path =
      workers_file.empty() ? (fs::path(g.out) / "workers.csv").string()
                           : workers_file;
  const std::string labels_path =
      labels_file.empty() ? (fs::path(g.out) / "labels.csv").string()
                          : labels_file;
  RunManifest m = start_manifest("evaluate", g);
  DigestBuilder d;
  d.add("command", "evaluate");
  d.add("country", country_code);
  d.add("threshold", strf("%.17g", threshold));
  d.add_file("model", model_file);
  d.add_file("workers", workers_path);
  d.add_file("labels", labels_path);

  const AnyModel model = read_model(model_file);
  const int tier = infer_tier(model_feature_names(model));
  const auto workers = parse_worker_csv(workers_path);
  const auto labels = parse_labels_csv(labels_path);
  const auto imputed = impute_means(workers);
  const auto country = parse_country(country_code);
  const ResponseKind kind = model_kind(model) == "fractional"
                                ? ResponseKind::Fractional
                                : ResponseKind::Binary;
  const DesignMatrix design =
      build_design_matrix(imputed, labels, kind, tier, country);

  const AnyModel fits[] = {model};
  const ModelComparison comparison = compare_models(fits, design, threshold);

  fs::create_directories(g.out);
  const fs::path csv_path = fs::path(g.out) / "evaluation.csv";
  const fs::path json_path = fs::path(g.out) / "evaluation.json";
  write_text_file(csv_path.string(), comparison_csv(comparison));
  write_text_file(json_path.string(), comparison_json(comparison));
  m.outputs = {csv_path.string(), json_path.string()};
  finish_manifest(m, d, g);

  std::cout << comparison_csv(comparison);
  return 0;
}

int cmd_predict(const GlobalArgs& g, const std::string& model_file,
                const std::string& workers_file,
                const std::string& country_code) {
  const std::string workers_path =
      workers_file.empty() ? (fs::path(g.out) / "workers.csv").string()
                           : workers_file;
  RunManifest m = start_manifest("predict", g);
  DigestBuilder d;
  d.add("command", "predict");
  d.add("country", country_code);
  d.add_file("model", model_file);
  d.add_file("workers", workers_path);

  const AnyModel model = read_model(model_file);
  const int tier = infer_tier(model_feature_names(model));
  const auto workers = parse_worker_csv(workers_path);
  const auto imputed = impute_means(workers);
  const auto country = parse_country(country_code);
  const DesignMatrix features = build_feature_matrix(imputed, tier, country);
  const Eigen::VectorXd p = predict_proba(model, features);

  fs::create_directories(g.out);
  const fs::path csv_path = fs::path(g.out) / "predictions.csv";
  write_text_file(csv_path.string(), predictions_csv(features.row_ids, p));
  m.outputs = {csv_path.string()};
  finish_manifest(m, d, g);

  std::cout << "predictions.csv: " << features.n() << " rows\n";
  return 0;
}

int cmd_report(const GlobalArgs& g, const std::vector<std::string>& model_files,
               const std::string& workers_file, const std::string& labels_file,
               const std::string& country_code, double threshold) {
  const std::string workers_path =
      workers_file.empty() ? (fs::path(g.out) / "workers.csv").string()
                           : workers_file;
  const std::string labels_path =
      labels_file.empty() ? (fs::path(g.out) / "labels.csv").string()
                          : labels_file;
  RunManifest m = start_manifest("report", g);
  DigestBuilder d;
  d.add("command", "report");
  d.add("country", country_code);
  d.add("threshold", strf("%.17g", threshold));
  for (const auto& file : model_files) d.add_file("model", file);
  d.add_file("workers", workers_path);
  d.add_file("labels", labels_path);

  std::vector<AnyModel> models;
  models.reserve(model_files.size());
  for (const auto& file : model_files) models.push_back(read_model(file));

  const int tier = infer_tier(model_feature_names(models.front()));
  const auto workers = parse_worker_csv(workers_path);
  const auto labels = parse_labels_csv(labels_path);
  const auto imputed = impute_means(workers);
  const auto country = parse_country(country_code);

  // AUC and AIC come from the labelled binary design; the risk
  // distributions come from the (optionally country-filtered) population.
  const DesignMatrix binary =
      build_design_matrix(imputed, labels, ResponseKind::Binary, tier, country);
  const DesignMatrix population = build_feature_matrix(imputed, tier, country);
  const std::vector<WorkerRecord> population_records =
      country ? filter_country(imputed, *country) : imputed;

  const ModelComparison comparison =
      compare_models(models, binary, threshold, &population);

  fs::create_directories(g.out);
  const fs::path csv_path = fs::path(g.out) / "comparison.csv";
  write_text_file(csv_path.string(), comparison_csv(comparison));
  m.outputs = {csv_path.string()};

  for (std::size_t i = 0; i < models.size(); ++i) {
    const Eigen::VectorXd p = predict_proba(models[i], population);
    const std::vector<double> probs(p.data(), p.data() + p.size());
    const RiskDistribution dist = describe_distribution(probs, threshold);
    const std::string stem = fs::path(model_files[i]).stem().string();
    const fs::path svg_path = fs::path(g.out) / ("histogram_" + stem + ".svg");
    const std::string title =
        std::string(model_kind(models[i])) + " predicted probabilities";
    write_text_file(svg_path.string(), histogram_svg(dist, title));
    m.outputs.push_back(svg_path.string());

    if (i == 0) {
      for (int level : {1, 2}) {
        const IscoAggregate agg =
            aggregate_isco(probs, population_records, level);
        const fs::path isco_path =
            fs::path(g.out) / ("isco_level" + std::to_string(level) + ".svg");
        const std::string isco_title =
            level == 1 ? "Mean risk by ISCO major group"
                       : "Mean risk by ISCO sub-major group";
        write_text_file(isco_path.string(), isco_bar_svg(agg, isco_title));
        m.outputs.push_back(isco_path.string());
      }
    }
  }
  finish_manifest(m, d, g);

  std::cout << comparison_csv(comparison);
  return 0;
}

int cmd_reproduce(const GlobalArgs& g, const SynthConfig& cfg) {
  RunManifest m = start_manifest("reproduce", g);
  DigestBuilder d;
  d.add("command", "reproduce");
  d.add("seed", std::to_string(cfg.seed));
  add_synth_digest(d, cfg);

  const PipelineArtifacts art = run_pipeline(cfg);
  fs::create_directories(g.out);
  const fs::path out_dir(g.out);

  auto emit = [&m](const fs::path& path) { m.outputs.push_back(path.string()); };

  write_workers_csv(out_dir / "workers.csv", art.data.workers);
  emit(out_dir / "workers.csv");
  write_votes_csv(out_dir / "votes.csv", art.data.votes);
  emit(out_dir / "votes.csv");
  write_labels_csv(out_dir / "labels.csv", art.labels);
  emit(out_dir / "labels.csv");

  write_model(out_dir / "model_logit.json", AnyModel(art.logit));
  emit(out_dir / "model_logit.json");
  write_model(out_dir / "model_fractional.json", AnyModel(art.fractional));
  emit(out_dir / "model_fractional.json");
  write_model(out_dir / "model_lda.json", AnyModel(art.lda));
  emit(out_dir / "model_lda.json");

  write_text_file((out_dir / "comparison.csv").string(),
                  comparison_csv(art.comparison));
  emit(out_dir / "comparison.csv");

  const struct {
    const char* name;
    const std::vector<double>* probs;
    const char* title;
  } plots[] = {
      {"logit", &art.logit_population, "Binary logit, population risk"},
      {"fractional", &art.fractional_population,
       "Fractional response, population risk"},
      {"lda", &art.lda_population, "Linear discriminant, population risk"},
  };
  for (const auto& plot : plots) {
    const RiskDistribution dist = describe_distribution(*plot.probs, 0.7);
    const fs::path svg_path =
        out_dir / ("histogram_" + std::string(plot.name) + ".svg");
    write_text_file(svg_path.string(), histogram_svg(dist, plot.title));
    emit(svg_path);
  }

  const std::vector<WorkerRecord> austrians =
      filter_country(art.imputed, Country::AT);
  for (int level : {1, 2}) {
    const IscoAggregate agg =
        aggregate_isco(art.logit_population, austrians, level);
    const fs::path isco_path =
        out_dir / ("isco_level" + std::to_string(level) + ".svg");
    const std::string title = level == 1
                                  ? "Mean risk by ISCO major group (logit)"
                                  : "Mean risk by ISCO sub-major group (logit)";
    write_text_file(isco_path.string(), isco_bar_svg(agg, title));
    emit(isco_path);
  }

  finish_manifest(m, d, g);
  std::cout << comparison_csv(art.comparison);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "autorisk: occupation-level automation risk modelling on survey "
      "microdata"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--seed", g.seed, "RNG seed (default 0)");
  app.add_option("--out", g.out, "output directory (default .)");
  app.add_option("--config", g.config_path,
                 "key=value file with generator and threshold overrides");

  auto* synth = app.add_subcommand(
      "synth", "generate workers.csv and votes.csv from a seeded simulator");
  SynthFlags synth_flags;
  synth_flags.bind(synth);

  auto* label = app.add_subcommand(
      "label", "aggregate expert votes into occupation labels");
  std::string label_votes;
  double label_threshold = kConsensusThreshold;
  label->add_option("--votes", label_votes,
                    "votes CSV (default <out>/votes.csv)");
  auto* label_threshold_opt = label->add_option(
      "--threshold", label_threshold, "consensus share threshold");

  auto* fit = app.add_subcommand("fit", "fit one model on labelled workers");
  std::string fit_model;
  int fit_tier = kMaxTier;
  std::string fit_workers, fit_labels, fit_country;
  fit->add_option("--model", fit_model, "logit | lda | fractional")
      ->required()
      ->check(CLI::IsMember({"logit", "lda", "fractional"}));
  fit->add_option("--tier", fit_tier, "covariate tier 1..6 (default 6)")
      ->check(CLI::Range(kMinTier, kMaxTier));
  fit->add_option("--workers", fit_workers,
                  "workers CSV (default <out>/workers.csv)");
  fit->add_option("--labels", fit_labels,
                  "labels CSV (default <out>/labels.csv)");
  fit->add_option("--country", fit_country, "restrict rows to AT or DE")
      ->check(CLI::IsMember({"AT", "DE"}));

  auto* evaluate = app.add_subcommand(
      "evaluate", "score a saved model on labelled workers");
  std::string eval_model, eval_workers, eval_labels, eval_country;
  double eval_threshold = 0.7;
  evaluate->add_option("--model", eval_model, "model JSON file")->required();
  evaluate->add_option("--workers", eval_workers,
                       "workers CSV (default <out>/workers.csv)");
  evaluate->add_option("--labels", eval_labels,
                       "labels CSV (default <out>/labels.csv)");
  evaluate->add_option("--country", eval_country, "restrict rows to AT or DE")
      ->check(CLI::IsMember({"AT", "DE"}));
  auto* eval_threshold_opt = evaluate->add_option(
      "--threshold", eval_threshold, "high-risk probability cutoff");

  auto* predict = app.add_subcommand(
      "predict", "score every worker with a saved model");
  std::string pred_model, pred_workers, pred_country;
  predict->add_option("--model", pred_model, "model JSON file")->required();
  predict->add_option("--workers", pred_workers,
                      "workers CSV (default <out>/workers.csv)");
  predict->add_option("--country", pred_country, "restrict rows to AT or DE")
      ->check(CLI::IsMember({"AT", "DE"}));

  auto* report = app.add_subcommand(
      "report", "comparison table and SVG plots for saved models");
  std::vector<std::string> report_models;
  std::string report_workers, report_labels, report_country;
  double report_threshold = 0.7;
  report->add_option("--model", report_models,
                     "model JSON file (repeatable; first drives ISCO charts)")
      ->required();
  report->add_option("--workers", report_workers,
                     "workers CSV (default <out>/workers.csv)");
  report->add_option("--labels", report_labels,
                     "labels CSV (default <out>/labels.csv)");
  report->add_option("--country", report_country,
                     "population country filter AT or DE")
      ->check(CLI::IsMember({"AT", "DE"}));
  auto* report_threshold_opt = report->add_option(
      "--threshold", report_threshold, "high-risk probability cutoff");

  auto* reproduce = app.add_subcommand(
      "reproduce", "run the whole pipeline: synth, label, fit, report");
  SynthFlags reproduce_flags;
  reproduce_flags.bind(reproduce);

  for (auto* sub : {synth, label, fit, evaluate, predict, report, reproduce}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!g.config_path.empty()) g.config = parse_config_file(g.config_path);
    const bool config_has = g.config.count("threshold") > 0;
    if (config_has && eval_threshold_opt->count() == 0) {
      eval_threshold = config_double(g.config, "threshold", eval_threshold);
    }
    if (config_has && report_threshold_opt->count() == 0) {
      report_threshold =
          config_double(g.config, "threshold", report_threshold);
    }
    if (g.config.count("consensus_threshold") > 0 &&
        label_threshold_opt->count() == 0) {
      label_threshold =
          config_double(g.config, "consensus_threshold", label_threshold);
    }

    if (app.got_subcommand(synth)) {
      return cmd_synth(g, synth_flags.resolve(g, synth));
    }
    if (app.got_subcommand(label)) {
      return cmd_label(g, label_votes, label_threshold);
    }
    if (app.got_subcommand(fit)) {
      return cmd_fit(g, fit_model, fit_tier, fit_workers, fit_labels,
                     fit_country);
    }
    if (app.got_subcommand(evaluate)) {
      return cmd_evaluate(g, eval_model, eval_workers, eval_labels,
                          eval_country, eval_threshold);
    }
    if (app.got_subcommand(predict)) {
      return cmd_predict(g, pred_model, pred_workers, pred_country);
    }
    if (app.got_subcommand(report)) {
      return cmd_report(g, report_models, report_workers, report_labels,
                        report_country, report_threshold);
    }
    if (app.got_subcommand(reproduce)) {
      return cmd_reproduce(g, reproduce_flags.resolve(g, reproduce));
    }
  } catch (const InvalidConfig& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
