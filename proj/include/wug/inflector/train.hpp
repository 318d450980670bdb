#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wug/inflector/model.hpp"
#include "wug/types.hpp"

namespace wug {

struct EpochStats {
  std::size_t epoch = 0;  // 1-based index of the epoch just completed
  std::size_t sequences = 0;
  std::size_t symbols = 0;        // target symbols including EOS
  double loss_per_symbol = 0.0;   // mean cross-entropy over the epoch (nats)
  double first_batch_loss_per_symbol = 0.0;  // before the first update
};

// Mini-batch Adadelta training with teacher forcing. Owns the optimiser state
// for one model; shuffling and dropout use streams derived from the model
// seed and the epoch index, so a run is fixed by (seed, corpus order, hp).
class Trainer {
 public:
  explicit Trainer(Inflector& model);

  // One pass over `stream` (already expanded for token-frequency modes).
  // Throws IngestionError naming any phoneme missing from the vocabulary.
  EpochStats train_epoch(std::span<const VerbEntry> stream);

  Inflector& model() { return model_; }

 private:
  struct Example {
    std::vector<int> source;
    std::vector<int> target;
  };

  Inflector& model_;
  std::vector<num::AdadeltaState> states_;
};

struct AccuracyReport {
  double overall = 0.0;    // percent
  double regular = 0.0;    // percent; 0 when the class is absent
  double irregular = 0.0;  // percent; 0 when the class is absent
  std::size_t total = 0;
  std::size_t regular_total = 0;
  std::size_t irregular_total = 0;
};

// Fresh model trained for hp.epochs epochs on `stream`. `on_epoch`, when
// set, sees the model after every epoch.
Inflector train_model(const Vocabulary& vocab, const HyperParams& hp, std::span<const VerbEntry> stream,
                      const std::function<void(const Inflector&, const EpochStats&)>& on_epoch = {});

// Top beam hypothesis compared with the gold past by exact phoneme match.
AccuracyReport training_accuracy(const Inflector& model, std::span<const VerbEntry> corpus,
                                 std::size_t beam_width);

// Best accuracy any deterministic inflector could reach: for each distinct
// present form, only its most frequent past can be produced.
double oracle_accuracy(std::span<const VerbEntry> corpus);

}  // namespace wug
