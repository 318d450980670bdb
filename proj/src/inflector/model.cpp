#include "wug/inflector/model.hpp"

#include <array>
#include <bit>
#include <cstring>

#include "wug/errors.hpp"

namespace wug {

void HyperParams::validate() const {
  auto fail = [](const std::string& why) { throw ValidationError("hyperparameters: " + why); };
  if (hidden_dim < 2 || hidden_dim % 2 != 0) {
    fail("hidden_dim must be even and >= 2, got " + std::to_string(hidden_dim));
  }
  if (embed_dim == 0) fail("embed_dim must be positive");
  if (encoder_layers == 0 || decoder_layers == 0) fail("need at least one encoder and decoder layer");
  if (batch_size == 0) fail("batch_size must be positive");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) fail("dropout_p must be in [0, 1)");
  if (beam_width == 0) fail("beam_width must be >= 1");
  if (!(init_range >= 0.0)) fail("init_range must be non-negative");
  if (!(adadelta.rho > 0.0 && adadelta.rho < 1.0)) fail("adadelta rho must be in (0, 1)");
  if (!(adadelta.epsilon > 0.0)) fail("adadelta epsilon must be positive");
}

Inflector::Inflector(Vocabulary vocab, HyperParams hp) : vocab_(std::move(vocab)), hp_(hp) {
  hp_.validate();
  if (vocab_.phoneme_count() == 0) throw ValidationError("vocabulary has no phonemes");

  const std::size_t v = vocab_.size();
  const std::size_t e = hp_.embed_dim;
  const std::size_t h = hp_.hidden_dim;
  const std::size_t half = h / 2;

  layout_.enc_embed = add_param("enc.embed", {v, e});
  layout_.dec_embed = add_param("dec.embed", {v, e});
  for (std::size_t l = 0; l < hp_.encoder_layers; ++l) {
    const std::size_t in = l == 0 ? e : h;
    for (const char* dir : {"fwd", "bwd"}) {
      const std::string base = "enc.l" + std::to_string(l) + "." + dir;
      LstmIndex cell{add_param(base + ".W", {in + half, 4 * half}),
                     add_param(base + ".b", {1, 4 * half}), half};
      (std::strcmp(dir, "fwd") == 0 ? layout_.enc_fwd : layout_.enc_bwd).push_back(cell);
    }
  }
  for (std::size_t l = 0; l < hp_.decoder_layers; ++l) {
    const std::size_t in = l == 0 ? e : h;
    const std::string base = "dec.l" + std::to_string(l);
    layout_.dec.push_back(
        {add_param(base + ".W", {in + h, 4 * h}), add_param(base + ".b", {1, 4 * h}), h});
  }
  layout_.att_query = add_param("att.query", {h, h});
  layout_.att_key = add_param("att.key", {h, h});
  layout_.att_score = add_param("att.score", {h, 1});
  layout_.out_weight = add_param("out.W", {2 * h, vocab_.output_size()});
  layout_.out_bias = add_param("out.b", {1, vocab_.output_size()});

  num::Rng init = num::Rng::derive(hp_.seed, num::StreamPurpose::kInit);
  for (auto& p : params_)
    for (double& x : p.value.values()) x = init.uniform(-hp_.init_range, hp_.init_range);
}

std::size_t Inflector::add_param(std::string name, num::Shape shape) {
  params_.push_back({std::move(name), num::Tensor(std::move(shape), 0.0)});
  return params_.size() - 1;
}

std::size_t Inflector::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return i;
  throw ContractError("no parameter named '" + std::string(name) + "'");
}

num::Parameter& Inflector::parameter(std::string_view name) { return params_[index_of(name)]; }

const num::Parameter& Inflector::parameter(std::string_view name) const {
  return params_[index_of(name)];
}

std::uint64_t Inflector::checksum() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const auto& p : params_) {
    for (double x : p.value.values()) {
      const auto bits = std::bit_cast<std::uint64_t>(x);
      for (int b = 0; b < 8; ++b) {
        hash ^= (bits >> (8 * b)) & 0xff;
        hash *= 0x100000001b3ULL;
      }
    }
  }
  return hash;
}

void Inflector::round_to_float32() {
  for (auto& p : params_)
    for (double& x : p.value.values()) x = static_cast<double>(static_cast<float>(x));
}

void Inflector::fill_parameters(double value) {
  for (auto& p : params_) p.value.fill(value);
}

// ---------------------------------------------------------------------------

InflectorGraph::InflectorGraph(const Inflector& model, num::Tape& tape, num::Rng* dropout)
    : model_(model), tape_(tape), dropout_(dropout) {
  if (model_.hparams().dropout_p <= 0.0) dropout_ = nullptr;
  bound_.resize(model_.parameters().size());
}

num::Var InflectorGraph::param(std::size_t index) {
  if (!bound_[index].valid()) bound_[index] = tape_.parameter(model_.parameters()[index]);
  return bound_[index];
}

num::Var InflectorGraph::maybe_dropout(num::Var x) {
  if (!dropout_) return x;
  return tape_.dropout(x, model_.hparams().dropout_p, *dropout_);
}

num::Var InflectorGraph::zeros(std::size_t width) {
  return tape_.constant(num::Tensor({1, width}, 0.0));
}

InflectorGraph::LayerState InflectorGraph::lstm_cell(const Inflector::LstmIndex& cell, num::Var x,
                                                     const LayerState& prev) {
  const std::size_t h = cell.hidden;
  const std::array<num::Var, 2> xh{x, prev.h};
  num::Var z = tape_.add(tape_.matmul(tape_.concat_cols(xh), param(cell.weight)), param(cell.bias));
  num::Var i = tape_.sigmoid(tape_.slice_cols(z, 0, h));
  num::Var f = tape_.sigmoid(tape_.slice_cols(z, h, 2 * h));
  num::Var g = tape_.tanh(tape_.slice_cols(z, 2 * h, 3 * h));
  num::Var o = tape_.sigmoid(tape_.slice_cols(z, 3 * h, 4 * h));
  num::Var c = tape_.add(tape_.mul(f, prev.c), tape_.mul(i, g));
  return {tape_.mul(o, tape_.tanh(c)), c};
}

InflectorGraph::Encoded InflectorGraph::encode(std::span<const int> ids) {
  if (ids.empty()) throw ContractError("cannot encode an empty sequence");
  const auto& layout = model_.layout();
  const std::size_t n = ids.size();
  const std::size_t half = model_.hparams().hidden_dim / 2;

  num::Var embedded = tape_.embedding(model_.parameters()[layout.enc_embed], ids);
  std::vector<num::Var> inputs;
  inputs.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    inputs.push_back(maybe_dropout(tape_.slice_rows(embedded, t, t + 1)));
  }

  Encoded enc;
  for (std::size_t l = 0; l < layout.enc_fwd.size(); ++l) {
    if (l > 0) {
      for (auto& x : inputs) x = maybe_dropout(x);
    }
    std::vector<LayerState> fwd(n), bwd(n);
    LayerState state{zeros(half), zeros(half)};
    for (std::size_t t = 0; t < n; ++t) fwd[t] = state = lstm_cell(layout.enc_fwd[l], inputs[t], state);
    state = {zeros(half), zeros(half)};
    for (std::size_t t = n; t-- > 0;) bwd[t] = state = lstm_cell(layout.enc_bwd[l], inputs[t], state);

    for (std::size_t t = 0; t < n; ++t) {
      const std::array<num::Var, 2> both{fwd[t].h, bwd[t].h};
      inputs[t] = tape_.concat_cols(both);
    }
    const std::array<num::Var, 2> hs{fwd[n - 1].h, bwd[0].h};
    const std::array<num::Var, 2> cs{fwd[n - 1].c, bwd[0].c};
    enc.summaries.push_back({tape_.concat_cols(hs), tape_.concat_cols(cs)});
  }
  enc.top_states = inputs;
  enc.memory = tape_.concat_rows(enc.top_states);
  enc.keys = tape_.matmul(enc.memory, param(layout.att_key));
  return enc;
}

InflectorGraph::DecoderState InflectorGraph::initial_state(const Encoded& enc) {
  DecoderState s;
  const std::size_t layers = model_.layout().dec.size();
  for (std::size_t l = 0; l < layers; ++l) {
    s.layers.push_back(enc.summaries[std::min(l, enc.summaries.size() - 1)]);
  }
  return s;
}

InflectorGraph::Step InflectorGraph::step(const Encoded& enc, const DecoderState& state,
                                          int input_id) {
  const auto& layout = model_.layout();
  const int id_arr[1] = {input_id};
  num::Var x = maybe_dropout(tape_.embedding(model_.parameters()[layout.dec_embed], id_arr));

  Step out;
  out.next.layers.resize(state.layers.size());
  for (std::size_t l = 0; l < state.layers.size(); ++l) {
    if (l > 0) x = maybe_dropout(x);
    out.next.layers[l] = lstm_cell(layout.dec[l], x, state.layers[l]);
    x = out.next.layers[l].h;
  }
  out.top_hidden = x;

  // Additive attention: score_j = v . tanh(K_j + W_q h).
  num::Var query = tape_.matmul(x, param(layout.att_query));
  num::Var energy = tape_.tanh(tape_.add(enc.keys, query));
  num::Var scores = tape_.transpose(tape_.matmul(energy, param(layout.att_score)));
  num::Var weights = tape_.softmax(scores);
  num::Var context = tape_.matmul(weights, enc.memory);

  const std::array<num::Var, 2> hc{x, context};
  num::Var logits = tape_.add(tape_.matmul(tape_.concat_cols(hc), param(layout.out_weight)),
                              param(layout.out_bias));
  out.log_probs = tape_.log_softmax(logits);
  return out;
}

num::Var InflectorGraph::sequence_nll(std::span<const int> source, std::span<const int> target) {
  Encoded enc = encode(source);
  DecoderState state = initial_state(enc);
  int prev = Vocabulary::kBos;
  std::vector<num::Var> terms;
  terms.reserve(target.size() + 1);
  for (std::size_t t = 0; t <= target.size(); ++t) {
    const int gold = t < target.size() ? target[t] : Vocabulary::kEos;
    Step s = step(enc, state, prev);
    terms.push_back(tape_.pick(s.log_probs, 0, static_cast<std::size_t>(Vocabulary::output_index(gold))));
    state = std::move(s.next);
    prev = gold;
  }
  return tape_.scale(tape_.sum(tape_.concat_cols(terms)), -1.0);
}

}  // namespace wug
