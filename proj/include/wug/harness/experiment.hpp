#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wug/aggregate/production.hpp"
#include "wug/harness/config.hpp"
#include "wug/inflector/model.hpp"
#include "wug/inflector/train.hpp"
#include "wug/phonology.hpp"
#include "wug/rulebase/rules.hpp"
#include "wug/wugeval/measures.hpp"

namespace wug::harness {

struct Dataset {
  std::vector<VerbEntry> corpus;  // distinct types, used for accuracy and rules
  std::vector<VerbEntry> stream;  // one epoch under the frequency mode
  std::vector<NonceItem> nonce;
  PhonemeClassTable classes;
  Vocabulary vocab;  // corpus and nonce symbols together
};

Dataset load_dataset(const ExperimentConfig& config);

std::filesystem::path checkpoint_path(const ExperimentConfig& config, std::uint64_t seed, std::size_t epoch);
// "seed=S;epoch=E;config=H", epoch left out when not applicable.
std::string provenance(const ExperimentConfig& config, std::optional<std::uint64_t> seed,
                       std::optional<std::size_t> epoch);

struct TrainLogRow {
  std::size_t epoch = 0;
  double loss = 0.0;
  std::optional<AccuracyReport> accuracy;
};
struct TrainResult {
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<TrainLogRow>> logs;  // per seed, in seed-list order
};
TrainResult cmd_train(const ExperimentConfig& config);

struct SeedEvaluation {
  std::uint64_t seed = 0;
  AccuracyReport accuracy;
  std::vector<eval::CorrelationReport> correlations;  // measure x target
  eval::Cr5Report cr5;
  eval::BeamTable beams;
  double mean_top_probability = 0.0;
};

// Beams, forced scores and every correlation for one model. No file output.
SeedEvaluation evaluate_model(const Inflector& model, const Dataset& data);

struct EvaluateResult {
  std::vector<SeedEvaluation> seeds;
  std::optional<eval::SecondPlaceReport> second_place;  // with two or more seeds
};
EvaluateResult cmd_evaluate(const ExperimentConfig& config);

struct AggregateResult {
  agg::ProductionTable table;
  agg::HumanComparison comparison;
  eval::CategoryMeans means;
};
AggregateResult cmd_aggregate(const ExperimentConfig& config);

struct SweepRow {
  std::uint64_t seed = 0;
  std::size_t epoch = 0;
  std::optional<double> rho_regular;
  std::optional<double> rho_irregular;
  double mean_top_probability = 0.0;
  double irregular_accuracy = 0.0;
};
std::vector<SweepRow> cmd_epoch_sweep(const ExperimentConfig& config);

struct RulesResult {
  rules::RuleGrammar grammar;
  eval::FormScoreTable scores;
  std::vector<eval::CorrelationReport> correlations;
};
RulesResult cmd_rules(const ExperimentConfig& config);

struct NeighbourCheck {
  std::string model;  // "forward" or "reversed"
  std::string key;    // "trailing2" or "leading2" of the original word
  double agreement = 0.0;
  double chance = 0.0;
};
struct ProbeResult {
  std::vector<NeighbourCheck> neighbours;
  std::vector<double> encoder_explained;
  std::vector<double> phoneme_explained;
  double phoneme_separability = 0.0;
};
ProbeResult cmd_probe(const ExperimentConfig& config);

std::vector<std::filesystem::path> cmd_synth(const ExperimentConfig& config);

}  // namespace wug::harness
