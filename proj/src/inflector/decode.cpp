#include "wug/inflector/decode.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wug/errors.hpp"

namespace wug {

namespace {

struct Live {
  std::vector<int> ids;
  double log_prob;
  InflectorGraph::DecoderState state;
};

struct Candidate {
  std::size_t parent;  // index into live, or npos for a finished carry-over
  std::vector<int> key;  // ids with trailing EOS when finished, for tie-breaking
  double log_prob;
  bool finished;
};

bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  return a.key < b.key;
}

std::vector<double> row_values(const num::Tape& tape, num::Var v) {
  auto vals = tape.value(v).values();
  return {vals.begin(), vals.end()};
}

}  // namespace

BeamResult beam_decode(const Inflector& model, const PhonemeSequence& present, std::size_t width,
                       std::optional<std::size_t> max_length) {
  if (width == 0) throw ContractError("beam width must be >= 1");
  const std::vector<int> source = model.vocab().encode(present);
  const std::size_t cap = max_length.value_or(default_max_output_length(present.size()));
  const int out_size = static_cast<int>(model.vocab().output_size());

  num::Tape tape(false);
  InflectorGraph graph(model, tape);
  const auto enc = graph.encode(source);

  std::vector<Live> live{{{}, 0.0, graph.initial_state(enc)}};
  std::vector<Candidate> finished;

  while (!live.empty()) {
    std::vector<Candidate> pool = finished;
    std::vector<InflectorGraph::DecoderState> next_states;
    next_states.reserve(live.size());
    for (std::size_t h = 0; h < live.size(); ++h) {
      const Live& hyp = live[h];
      const int prev = hyp.ids.empty() ? Vocabulary::kBos : hyp.ids.back();
      auto step = graph.step(enc, hyp.state, prev);
      const auto& lp = tape.value(step.log_probs);
      next_states.push_back(std::move(step.next));
      const int last = hyp.ids.size() >= cap ? 1 : out_size;
      for (int o = 0; o < last; ++o) {
        Candidate c;
        c.parent = h;
        c.key = hyp.ids;
        c.key.push_back(Vocabulary::id_from_output(o));
        c.log_prob = hyp.log_prob + lp[static_cast<std::size_t>(o)];
        c.finished = o == 0;
        pool.push_back(std::move(c));
      }
    }

    const std::size_t keep = std::min(width, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                      ranks_before);
    pool.resize(keep);

    finished.clear();
    std::vector<Live> next_live;
    for (auto& c : pool) {
      if (c.finished) {
        finished.push_back(std::move(c));
      } else {
        next_live.push_back({c.key, c.log_prob, next_states[c.parent]});
      }
    }
    live = std::move(next_live);
  }

  BeamResult result;
  for (const auto& c : finished) {
    BeamHypothesis h;
    h.ids.assign(c.key.begin(), c.key.end() - 1);
    h.form = model.vocab().decode(h.ids);
    h.log_prob = c.log_prob;
    h.terminated = true;
    result.hypotheses.push_back(std::move(h));
  }
  return result;
}

std::vector<FormScore> force_scores(const Inflector& model, const PhonemeSequence& present,
                                    const std::vector<PhonemeSequence>& candidates) {
  const std::vector<int> source = model.vocab().encode(present);
  std::vector<std::vector<int>> targets;
  targets.reserve(candidates.size());
  for (const auto& c : candidates) targets.push_back(model.vocab().encode(c));

  num::Tape tape(false);
  InflectorGraph graph(model, tape);
  const auto enc = graph.encode(source);
  const auto start = graph.initial_state(enc);

  std::vector<FormScore> out;
  out.reserve(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& target = targets[k];
    auto state = start;
    int prev = Vocabulary::kBos;
    double log_prob = 0.0;
    for (std::size_t t = 0; t <= target.size(); ++t) {
      const int gold = t < target.size() ? target[t] : Vocabulary::kEos;
      auto step = graph.step(enc, state, prev);
      log_prob += tape.value(step.log_probs)[static_cast<std::size_t>(Vocabulary::output_index(gold))];
      state = std::move(step.next);
      prev = gold;
    }
    out.push_back({candidates[k], log_prob, std::exp(log_prob)});
  }
  return out;
}

FormScore force_score(const Inflector& model, const PhonemeSequence& present,
                      const PhonemeSequence& candidate) {
  return force_scores(model, present, {candidate}).front();
}

std::vector<SampledForm> sample_forms(const Inflector& model, const PhonemeSequence& present,
                                      std::size_t count, num::Rng& stream) {
  const std::vector<int> source = model.vocab().encode(present);
  const std::size_t cap = default_max_output_length(present.size());

  num::Tape tape(false);
  InflectorGraph graph(model, tape);
  const auto enc = graph.encode(source);

  // Samples share prefixes heavily, so per-prefix distributions are memoised.
  struct Node {
    std::vector<double> probs;
    InflectorGraph::DecoderState next;
  };
  std::map<std::vector<int>, Node> memo;
  const auto root_state = graph.initial_state(enc);

  auto expand = [&](const std::vector<int>& prefix,
                    const InflectorGraph::DecoderState& state) -> const Node& {
    auto it = memo.find(prefix);
    if (it != memo.end()) return it->second;
    const int prev = prefix.empty() ? Vocabulary::kBos : prefix.back();
    auto step = graph.step(enc, state, prev);
    Node node{row_values(tape, step.log_probs), std::move(step.next)};
    for (double& p : node.probs) p = std::exp(p);
    return memo.emplace(prefix, std::move(node)).first->second;
  };

  std::vector<SampledForm> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<int> prefix;
    const InflectorGraph::DecoderState* state = &root_state;
    SampledForm sample;
    while (true) {
      const Node& node = expand(prefix, *state);
      const double u = stream.uniform();
      double cumulative = 0.0;
      std::size_t pick = node.probs.size() - 1;
      for (std::size_t o = 0; o < node.probs.size(); ++o) {
        cumulative += node.probs[o];
        if (u < cumulative) {
          pick = o;
          break;
        }
      }
      const int id = Vocabulary::id_from_output(static_cast<int>(pick));
      if (id == Vocabulary::kEos) break;
      if (prefix.size() >= cap) {
        sample.truncated = true;
        break;
      }
      prefix.push_back(id);
      state = &node.next;
    }
    sample.form = model.vocab().decode(prefix);
    out.push_back(std::move(sample));
  }
  return out;
}

SampledForm sample_form(const Inflector& model, const PhonemeSequence& present, num::Rng& stream) {
  return sample_forms(model, present, 1, stream).front();
}

}  // namespace wug
