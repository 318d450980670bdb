#include "wug/inflector/train.hpp"

#include <map>
#include <numeric>

#include "wug/errors.hpp"
#include "wug/inflector/decode.hpp"

namespace wug {

Trainer::Trainer(Inflector& model) : model_(model) {
  for (const auto& p : model_.parameters()) states_.emplace_back(p.value.shape());
}

EpochStats Trainer::train_epoch(std::span<const VerbEntry> stream) {
  if (stream.empty()) throw ContractError("train_epoch: empty corpus");
  const Vocabulary& vocab = model_.vocab();
  const HyperParams& hp = model_.hparams();

  std::vector<Example> examples;
  examples.reserve(stream.size());
  for (const auto& e : stream) {
    try {
      examples.push_back({vocab.encode(e.present), vocab.encode(e.past)});
    } catch (const IngestionError& err) {
      throw IngestionError(std::string(err.what()) + " in training verb '" + e.lemma + "'");
    }
  }

  const std::size_t epoch = model_.epochs_completed() + 1;
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  num::Rng shuffle = num::Rng::derive(hp.seed, num::StreamPurpose::kShuffle, epoch);
  shuffle.shuffle(std::span<std::size_t>(order));
  num::Rng dropout = num::Rng::derive(hp.seed, num::StreamPurpose::kDropout, epoch);

  EpochStats stats;
  stats.epoch = epoch;
  double total_loss = 0.0;
  auto& params = model_.parameters();

  for (std::size_t begin = 0; begin < order.size(); begin += hp.batch_size) {
    const std::size_t end = std::min(order.size(), begin + hp.batch_size);
    num::Tape tape(true);
    InflectorGraph graph(model_, tape, &dropout);
    std::vector<num::Var> losses;
    std::size_t symbols = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const Example& ex = examples[order[k]];
      losses.push_back(graph.sequence_nll(ex.source, ex.target));
      symbols += ex.target.size() + 1;
    }
    num::Var batch_sum = tape.sum(tape.concat_cols(losses));
    const double batch_loss = tape.value(batch_sum).item();
    if (begin == 0) stats.first_batch_loss_per_symbol = batch_loss / static_cast<double>(symbols);
    total_loss += batch_loss;
    stats.symbols += symbols;
    stats.sequences += end - begin;

    // Summed over the batch; the mean trained far slower under Adadelta.
    num::Var objective = batch_sum;
    num::ParamGrads grads = tape.backward(objective);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const num::Tensor* g = grads.find(params[i]);
      if (!g) continue;
      num::adadelta_step(params[i].value, *g, states_[i], hp.adadelta, params[i].name);
    }
  }

  stats.loss_per_symbol = total_loss / static_cast<double>(stats.symbols);
  model_.set_epochs_completed(epoch);
  return stats;
}

Inflector train_model(const Vocabulary& vocab, const HyperParams& hp, std::span<const VerbEntry> stream,
                      const std::function<void(const Inflector&, const EpochStats&)>& on_epoch) {
  Inflector model(vocab, hp);
  Trainer trainer(model);
  for (std::size_t e = 0; e < hp.epochs; ++e) {
    const EpochStats stats = trainer.train_epoch(stream);
    if (on_epoch) on_epoch(model, stats);
  }
  return model;
}

AccuracyReport training_accuracy(const Inflector& model, std::span<const VerbEntry> corpus,
                                 std::size_t beam_width) {
  AccuracyReport r;
  std::size_t correct = 0, reg_correct = 0, irr_correct = 0;
  std::map<PhonemeSequence, PhonemeSequence> top;
  for (const auto& e : corpus) {
    auto it = top.find(e.present);
    if (it == top.end()) {
      BeamResult beam = beam_decode(model, e.present, beam_width);
      it = top.emplace(e.present, beam.empty() ? PhonemeSequence{} : beam.top().form).first;
    }
    const bool ok = it->second == e.past;
    ++r.total;
    correct += ok;
    if (e.verb_class == VerbClass::kRegular) {
      ++r.regular_total;
      reg_correct += ok;
    } else {
      ++r.irregular_total;
      irr_correct += ok;
    }
  }
  auto pct = [](std::size_t k, std::size_t n) {
    return n == 0 ? 0.0 : 100.0 * static_cast<double>(k) / static_cast<double>(n);
  };
  r.overall = pct(correct, r.total);
  r.regular = pct(reg_correct, r.regular_total);
  r.irregular = pct(irr_correct, r.irregular_total);
  return r;
}

double oracle_accuracy(std::span<const VerbEntry> corpus) {
  if (corpus.empty()) return 0.0;
  std::map<PhonemeSequence, std::map<PhonemeSequence, std::size_t>> pasts;
  for (const auto& e : corpus) ++pasts[e.present][e.past];
  std::size_t best = 0;
  for (const auto& [present, counts] : pasts) {
    std::size_t m = 0;
    for (const auto& [past, n] : counts) m = std::max(m, n);
    best += m;
  }
  return 100.0 * static_cast<double>(best) / static_cast<double>(corpus.size());
}

}  // namespace wug
