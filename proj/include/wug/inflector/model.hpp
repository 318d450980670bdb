#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wug/inflector/vocabulary.hpp"
#include "wug/numerics/adadelta.hpp"
#include "wug/numerics/rng.hpp"
#include "wug/numerics/tape.hpp"

namespace wug {

struct HyperParams {
  std::size_t embed_dim = 300;
  std::size_t hidden_dim = 100;  // split evenly across the two encoder directions
  std::size_t encoder_layers = 2;
  std::size_t decoder_layers = 2;
  std::size_t batch_size = 20;
  double dropout_p = 0.3;
  std::size_t epochs = 100;
  std::size_t beam_width = 12;
  std::uint64_t seed = 1;
  double init_range = 0.1;  // parameters ~ U(-init_range, init_range)
  num::AdadeltaConfig adadelta;

  // Throws ValidationError on odd hidden_dim, dropout outside [0, 1), etc.
  void validate() const;
};

// Encoder-decoder inflection model: two bidirectional LSTM encoder layers, an
// LSTM decoder stack initialised from the encoder summaries, and additive
// attention over the top encoder layer. Parameters are plain data, so copies
// are independent models.
class Inflector {
 public:
  Inflector(Vocabulary vocab, HyperParams hp);

  const Vocabulary& vocab() const { return vocab_; }
  const HyperParams& hparams() const { return hp_; }

  std::vector<num::Parameter>& parameters() { return params_; }
  const std::vector<num::Parameter>& parameters() const { return params_; }
  num::Parameter& parameter(std::string_view name);
  const num::Parameter& parameter(std::string_view name) const;

  std::size_t epochs_completed() const { return epochs_completed_; }
  void set_epochs_completed(std::size_t n) { epochs_completed_ = n; }

  // FNV-1a over the bit patterns of every parameter value, in order.
  std::uint64_t checksum() const;
  // Rounds every parameter to the nearest float32 (the checkpoint precision).
  void round_to_float32();
  void fill_parameters(double value);

  // Parameter-table indices; public for the graph builder.
  struct LstmIndex {
    std::size_t weight;  // (input + hidden) x 4*hidden, gate order i, f, g, o
    std::size_t bias;    // 1 x 4*hidden
    std::size_t hidden;
  };
  struct Layout {
    std::size_t enc_embed;
    std::size_t dec_embed;
    std::vector<LstmIndex> enc_fwd;
    std::vector<LstmIndex> enc_bwd;
    std::vector<LstmIndex> dec;
    std::size_t att_query;
    std::size_t att_key;
    std::size_t att_score;
    std::size_t out_weight;
    std::size_t out_bias;
  };
  const Layout& layout() const { return layout_; }

 private:
  std::size_t add_param(std::string name, num::Shape shape);
  std::size_t index_of(std::string_view name) const;

  Vocabulary vocab_;
  HyperParams hp_;
  std::vector<num::Parameter> params_;
  Layout layout_{};
  std::size_t epochs_completed_ = 0;
};

// Builds the model's computation on one tape. With a dropout stream the graph
// is in training mode; without one, dropout is the identity.
class InflectorGraph {
 public:
  struct LayerState {
    num::Var h;
    num::Var c;
  };
  struct Encoded {
    std::vector<LayerState> summaries;  // per encoder layer: [fwd last ; bwd first]
    std::vector<num::Var> top_states;   // 1 x hidden per input position
    num::Var memory;                    // length x hidden, rows = top_states
    num::Var keys;                      // memory projected for attention
  };
  struct DecoderState {
    std::vector<LayerState> layers;
  };
  struct Step {
    num::Var log_probs;  // 1 x output_size
    num::Var top_hidden;
    DecoderState next;
  };

  InflectorGraph(const Inflector& model, num::Tape& tape, num::Rng* dropout = nullptr);

  num::Tape& tape() { return tape_; }

  Encoded encode(std::span<const int> ids);
  DecoderState initial_state(const Encoded& enc);
  // Consumes `input_id` (BOS or the previous output) and predicts the next symbol.
  Step step(const Encoded& enc, const DecoderState& state, int input_id);
  // Sum over target symbols and the final EOS of -log p, teacher-forced.
  num::Var sequence_nll(std::span<const int> source, std::span<const int> target);

 private:
  num::Var param(std::size_t index);
  num::Var maybe_dropout(num::Var x);
  LayerState lstm_cell(const Inflector::LstmIndex& cell, num::Var x, const LayerState& prev);
  num::Var zeros(std::size_t width);

  const Inflector& model_;
  num::Tape& tape_;
  num::Rng* dropout_;
  std::vector<num::Var> bound_;
};

}  // namespace wug
