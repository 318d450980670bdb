#pragma once

#include <optional>
#include <vector>

#include "wug/inflector/model.hpp"
#include "wug/types.hpp"

namespace wug {

struct BeamHypothesis {
  PhonemeSequence form;
  std::vector<int> ids;  // phoneme ids, EOS excluded
  double log_prob = 0.0;
  bool terminated = false;
};

// Hypotheses sorted by descending log-probability; ties by ascending id
// sequence (EOS included).
struct BeamResult {
  std::vector<BeamHypothesis> hypotheses;

  const BeamHypothesis& top() const { return hypotheses.front(); }
  bool empty() const { return hypotheses.empty(); }
};

struct FormScore {
  PhonemeSequence form;
  double log_prob = 0.0;
  double probability = 0.0;
};

struct SampledForm {
  PhonemeSequence form;
  bool truncated = false;  // length cap reached before EOS
};

// Longest output (in phonemes, EOS excluded) the decoders will produce.
inline std::size_t default_max_output_length(std::size_t input_length) { return input_length + 8; }

// Length-unnormalised beam search. At every step the pool of finished
// hypotheses plus all one-symbol extensions of live ones is cut to `width`.
// A hypothesis that reaches `max_length` phonemes may only be extended by EOS,
// so every returned hypothesis is terminated.
BeamResult beam_decode(const Inflector& model, const PhonemeSequence& present, std::size_t width,
                       std::optional<std::size_t> max_length = std::nullopt);

// Probability of producing exactly `candidate` followed by EOS.
FormScore force_score(const Inflector& model, const PhonemeSequence& present,
                      const PhonemeSequence& candidate);
// Batch form: one encoder pass, one forced pass per candidate.
std::vector<FormScore> force_scores(const Inflector& model, const PhonemeSequence& present,
                                    const std::vector<PhonemeSequence>& candidates);

// Ancestral sampling from the per-step output distribution, capped at
// default_max_output_length(present.size()) phonemes.
SampledForm sample_form(const Inflector& model, const PhonemeSequence& present, num::Rng& stream);
std::vector<SampledForm> sample_forms(const Inflector& model, const PhonemeSequence& present,
                                      std::size_t count, num::Rng& stream);

}  // namespace wug
