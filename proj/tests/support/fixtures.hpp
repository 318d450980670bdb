#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wug/inflector/model.hpp"
#include "wug/numerics/rng.hpp"
#include "wug/numerics/tape.hpp"
#include "wug/types.hpp"

namespace fixture {

inline wug::Vocabulary letters(std::size_t n) {
  std::vector<std::string> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back(std::string(1, static_cast<char>('a' + i)));
  return wug::Vocabulary(t);
}

inline wug::HyperParams small_hp(std::uint64_t seed, std::size_t embed, std::size_t hidden,
                                 double init_range = 0.5) {
  wug::HyperParams hp;
  hp.embed_dim = embed;
  hp.hidden_dim = hidden;
  hp.batch_size = 4;
  hp.dropout_p = 0.0;
  hp.epochs = 1;
  hp.beam_width = 4;
  hp.seed = seed;
  hp.init_range = init_range;
  return hp;
}

inline wug::Inflector toy_model(std::uint64_t seed, std::size_t phonemes, std::size_t embed = 4,
                                std::size_t hidden = 4, double init_range = 1.0) {
  return wug::Inflector(letters(phonemes), small_hp(seed, embed, hidden, init_range));
}

inline wug::PhonemeSequence random_word(wug::num::Rng& rng, const wug::Vocabulary& vocab, std::size_t min_len,
                                        std::size_t max_len) {
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  wug::PhonemeSequence w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(vocab.tokens()[rng.below(vocab.phoneme_count())]);
  return w;
}

struct GradientCheck {
  std::size_t checked = 0;
  std::size_t below_floor = 0;  // |gradient| under the floor, judged on absolute error
  double worst = 0.0;
  std::string worst_at;
};

// Central differences at h = 1e-5 carry round-off near eps * |loss| / h, a few
// 1e-10 here, so gradients below `floor` are compared on absolute error.
inline constexpr double kGradientFloor = 1e-5;

// |a - n| / max(|a|, |n|, floor)
inline double relative_error(double analytic, double numeric, double floor = kGradientFloor) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Teacher-forced NLL of one random pair, dropout on with a replayed mask,
// checked against central differences for every parameter element.
inline GradientCheck check_model_gradients(std::uint64_t seed, double h = 1e-5,
                                           double floor = kGradientFloor) {
  wug::num::Rng rng(seed);
  const std::size_t phonemes = 2 + rng.below(4);
  const std::size_t embed = 2 + rng.below(15);
  const std::size_t hidden = 2 * (1 + rng.below(8));
  wug::HyperParams hp = small_hp(seed, embed, hidden, 0.5);
  hp.dropout_p = 0.25;
  wug::Inflector model(letters(phonemes), hp);
  const auto& vocab = model.vocab();
  const auto source = vocab.encode(random_word(rng, vocab, 1, 6));
  const auto target = vocab.encode(random_word(rng, vocab, 1, 6));

  auto loss = [&]() {
    wug::num::Tape tape(false);
    wug::num::Rng mask(seed * 31 + 7);
    wug::InflectorGraph g(model, tape, &mask);
    return tape.value(g.sequence_nll(source, target)).item();
  };

  wug::num::Tape tape(true);
  wug::num::Rng mask(seed * 31 + 7);
  wug::InflectorGraph g(model, tape, &mask);
  const auto grads = tape.backward(g.sequence_nll(source, target));

  GradientCheck out;
  for (auto& p : model.parameters()) {
    const wug::num::Tensor analytic = grads.get(p);
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double numeric = oracle::central_difference(loss, p.value[i], h);
      const double err = relative_error(analytic[i], numeric, floor);
      ++out.checked;
      out.below_floor += std::max(std::abs(analytic[i]), std::abs(numeric)) < floor;
      if (err > out.worst) {
        out.worst = err;
        out.worst_at = p.name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return out;
}

}  // namespace fixture
