#ifndef AUTORISK_SYNTH_HPP
#define AUTORISK_SYNTH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "autorisk/evaluation.hpp"
#include "autorisk/glm.hpp"
#include "autorisk/labeling.hpp"
#include "autorisk/lda.hpp"
#include "autorisk/rng.hpp"
#include "autorisk/worker.hpp"

namespace autorisk {

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t n_experts = 35;
  std::size_t n_occupations = 100;
  std::size_t n_workers = 4438;
  double country_split = 2051.0 / 4438.0;  // Austrian fraction of the workers
  double missing_rate = 0.15;
  double routine_effect = 0.8;  // strength of the latent signal in tasks
  double noise_sd = 1.2;        // worker-level noise on task propensities
};

void validate(const SynthConfig& config);

// One occupation's hidden driver: experts vote yes with this probability,
// and workers' routine-task propensities shift with it.
struct LatentOccupation {
  std::string isco4;
  double routine_intensity = 0;
};

struct SynthOutput {
  std::vector<LatentOccupation> occupations;
  ExpertVoteSet votes;
  std::vector<WorkerRecord> workers;
};

// Occupation codes with their anchor intensities, first n_occupations of
// a built-in pool of real ISCO-08 codes (extended deterministically past
// the pool). Intensity = anchor + small noise, clamped to [0.02, 0.98].
std::vector<LatentOccupation> draw_occupations(const SynthConfig& config,
                                               Rng& rng);

// Independent yes votes with probability routine_intensity; each expert
// skips any question with a fixed small probability.
ExpertVoteSet simulate_votes(std::span<const LatentOccupation> occupations,
                             std::size_t n_experts, Rng& rng);

// Full dataset from one seeded stream: occupations, votes, workers.
// Deterministic; the draw order is documented in the README.
SynthOutput generate_population(const SynthConfig& config);

// Everything the pipeline run produces, for callers that persist the
// intermediate artifacts as files.
struct PipelineArtifacts {
  SynthOutput data;
  std::vector<OccupationLabel> labels;
  std::vector<WorkerRecord> imputed;
  FittedGlm logit;  // tier-6 fits on the full labelled German subset
  FittedGlm fractional;
  LdaModel lda;
  std::vector<double> logit_population;  // Austrian predicted probabilities
  std::vector<double> fractional_population;
  std::vector<double> lda_population;
  ModelComparison comparison;
};

// Runs the whole pipeline on generated data: label, impute, fit logit,
// LDA and fractional models on the labelled German subset (tier 6),
// cross-validate for AUC, and predict the Austrian population.
PipelineArtifacts run_pipeline(const SynthConfig& config);

// The comparison rows alone.
ModelComparison run_comparison(const SynthConfig& config);

}  // namespace autorisk

#endif
