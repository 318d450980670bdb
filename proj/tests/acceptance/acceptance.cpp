// Acceptance run: one line per criterion, exit status 1 if any hard gate fails.
//   acceptance [criterion ...]    run a subset, e.g. `acceptance 2 5`

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wug/aggregate/production.hpp"
#include "wug/datastore/checkpoint.hpp"
#include "wug/datastore/synthetic.hpp"
#include "wug/harness/experiment.hpp"
#include "wug/inflector/decode.hpp"
#include "wug/inflector/train.hpp"
#include "wug/numerics/adadelta.hpp"
#include "wug/probe/probe.hpp"
#include "wug/report.hpp"
#include "wug/rulebase/rules.hpp"
#include "wug/wugeval/measures.hpp"

namespace fs = std::filesystem;
using namespace wug;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kFail;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) { return {ok ? Status::kPass : Status::kFail, std::move(detail)}; }

std::string num(double v) { return report::fmt(v); }

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("wug-acceptance-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// ---------------------------------------------------------------------------

Outcome gradient_fidelity() {
  double worst = 0.0;
  std::string where;
  std::size_t checked = 0, small = 0;
  const std::size_t configs = 20;
  for (std::uint64_t s = 1; s <= configs; ++s) {
    const auto r = fixture::check_model_gradients(1000 + s);
    checked += r.checked;
    small += r.below_floor;
    if (r.worst > worst) {
      worst = r.worst;
      where = "config " + std::to_string(s) + " " + r.worst_at;
    }
  }
  return pass_if(worst <= 1e-4, std::to_string(configs) + " configs, " + std::to_string(checked) +
                                    " gradient entries (" + std::to_string(small) + " under " + num(fixture::kGradientFloor) +
                                    "), worst rel err " + num(worst) + " at " + where);
}

Outcome beam_exactness() {
  const std::size_t models = 60, max_len = 4;
  std::size_t mismatched = 0;
  double worst = 0.0;
  for (std::uint64_t s = 1; s <= models; ++s) {
    num::Rng rng(s);
    const std::size_t phonemes = 2 + rng.below(3);  // output alphabet of 3..5
    const Inflector model = fixture::toy_model(500 + s, phonemes, 3, 4, 1.5);
    const auto present = fixture::random_word(rng, model.vocab(), 1, 4);
    const auto truth = oracle::enumerate_outputs(model, model.vocab().encode(present), max_len);
    const BeamResult beam = beam_decode(model, present, truth.size(), max_len);
    bool same = beam.hypotheses.size() == truth.size();
    for (std::size_t i = 0; same && i < truth.size(); ++i) {
      same = beam.hypotheses[i].ids == truth[i].ids;
      worst = std::max(worst, std::abs(beam.hypotheses[i].log_prob - truth[i].log_prob));
    }
    mismatched += !same;
  }
  return pass_if(mismatched == 0 && worst <= 1e-12,
                 std::to_string(models) + " toy models, " + std::to_string(mismatched) +
                     " ranking mismatches, max |dlogp| " + num(worst));
}

Outcome forced_score_consistency() {
  double worst = 0.0;
  std::size_t hyps = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    num::Rng rng(s + 77);
    const Inflector model = fixture::toy_model(900 + s, 3 + rng.below(4), 6, 6, 1.0);
    for (int w = 0; w < 3; ++w) {
      const auto present = fixture::random_word(rng, model.vocab(), 1, 5);
      const BeamResult beam = beam_decode(model, present, 12);
      for (const auto& h : beam.hypotheses) {
        const FormScore f = force_score(model, present, h.form);
        worst = std::max(worst, std::abs(f.probability - std::exp(h.log_prob)));
        ++hyps;
      }
    }
  }
  return pass_if(worst <= 1e-9, std::to_string(hyps) + " hypotheses over 20 models, max gap " + num(worst));
}

Outcome synthetic_convergence() {
  harness::ExperimentConfig config;
  config.hp.embed_dim = 32;
  config.hp.hidden_dim = 32;
  config.hp.batch_size = 20;
  config.hp.dropout_p = 0.3;
  config.hp.epochs = 200;
  config.hp.seed = 1;
  const harness::Dataset data = harness::load_dataset(config);

  std::size_t regular = 0, irregular = 0;
  for (const auto& e : data.corpus) (e.verb_class == VerbClass::kRegular ? regular : irregular)++;

  Inflector model(data.vocab, config.hp);
  Trainer trainer(model);
  std::optional<std::size_t> at90, at99;
  AccuracyReport first90;
  for (std::size_t e = 1; e <= config.hp.epochs && !at99; ++e) {
    trainer.train_epoch(data.stream);
    const AccuracyReport acc = training_accuracy(model, data.corpus, config.hp.beam_width);
    if (!at90 && acc.overall >= 90.0) {
      at90 = e;
      first90 = acc;
    }
    if (acc.overall >= 99.0) at99 = e;
  }
  std::ostringstream d;
  d << regular << "+" << irregular << " verbs; ";
  if (at99) d << ">=99% at epoch " << *at99 << "; ";
  else d << "never reached 99%; ";
  if (at90) d << "first >=90% at epoch " << *at90 << " (reg " << num(first90.regular) << ", irr "
              << num(first90.irregular) << ")";
  const bool ok = regular == 200 && irregular == 20 && at99 && at90 && first90.regular >= first90.irregular;
  return pass_if(ok, d.str());
}

Outcome cr5_fixture() {
  auto item = [](std::string id, std::string present, std::vector<std::pair<FormRole, std::string>> forms) {
    NonceItem it;
    it.id = id;
    it.present = parse_phonemes(present);
    const double share = 1.0 / static_cast<double>(forms.size());
    for (auto& [role, p] : forms) it.forms.push_back({role, "", parse_phonemes(p), share, std::nullopt});
    return it;
  };
  const std::vector<NonceItem> items = {
      item("nold", "n \"oU l d",
           {{FormRole::kRegular, "n \"oU l d @ d"}, {FormRole::kIrregular1, "n \"oU l d"},
            {FormRole::kIrregular2, "n \"E l d"}}),
      item("murn", "m \"@r n", {{FormRole::kRegular, "m \"@r n d"}, {FormRole::kIrregular1, "m \"@r n t"}}),
  };
  eval::BeamTable beams;
  for (const char* f : {"n \"oU l d @ d", "n \"E l t", "n \"i: l d @ d", "n \"E l d @ d", "n \"E l d"})
    beams["nold"].push_back(parse_phonemes(f));
  for (const char* f : {"m \"@r n d", "m \"@r n t", "m \"@r n", "m \"@r n eI d", "m \"@r n u:"})
    beams["murn"].push_back(parse_phonemes(f));
  const eval::Cr5Report r = eval::cr_at_5(items, beams);
  return pass_if(r.value == 0.5 && !r.complete[0] && r.complete[1], "CR@5 = " + num(r.value));
}

Outcome correlation_oracles() {
  num::Rng rng(2024);
  double worst = 0.0;
  std::size_t undefined_mismatch = 0, vectors = 1000;
  for (std::size_t v = 0; v < vectors; ++v) {
    const std::size_t n = 3 + rng.below(8);
    std::vector<double> x(n), y(n);
    for (auto& a : x) a = static_cast<double>(rng.below(5));  // small range -> ties
    for (auto& b : y) b = rng.bernoulli(0.5) ? static_cast<double>(rng.below(4)) : rng.normal();
    const auto s = eval::spearman(x, y), so = oracle::spearman(x, y);
    const auto p = eval::pearson(x, y), po = oracle::pearson(x, y);
    if (s.has_value() != so.has_value() || p.has_value() != po.has_value()) ++undefined_mismatch;
    if (s && so) worst = std::max(worst, std::abs(*s - *so));
    if (p && po) worst = std::max(worst, std::abs(*p - *po));
  }
  // monotone and affine invariance
  double invariance = 0.0;
  for (std::size_t v = 0; v < 200; ++v) {
    const std::size_t n = 3 + rng.below(8);
    std::vector<double> x(n), y(n), fx(n), ay(n), ax(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(-2, 2);
      y[i] = rng.uniform(-2, 2);
      fx[i] = std::exp(3 * x[i]) + x[i] * x[i] * x[i];  // strictly increasing
      ay[i] = 4.5 * y[i] - 3.0;
      ax[i] = 0.25 * x[i] + 10.0;
    }
    const auto s1 = eval::spearman(x, y), s2 = eval::spearman(fx, y);
    const auto p1 = eval::pearson(x, y), p2 = eval::pearson(ax, ay);
    if (!s1 || !s2 || !p1 || !p2) {
      invariance = 1.0;
      break;
    }
    invariance = std::max({invariance, std::abs(*s1 - *s2), std::abs(*p1 - *p2)});
  }
  return pass_if(worst <= 1e-12 && undefined_mismatch == 0 && invariance <= 1e-12,
                 std::to_string(vectors) + " random vectors, max oracle gap " + num(worst) +
                     ", undefined mismatches " + std::to_string(undefined_mismatch) + ", invariance gap " +
                     num(invariance));
}

Outcome sampling_fidelity() {
  const std::size_t samples = 10000;
  std::size_t categories = 0, within = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const Inflector model = fixture::toy_model(300 + s, 3, 4, 4, 1.0);
    num::Rng rng(s);
    for (int w = 0; w < 2; ++w) {
      NonceItem item;
      item.id = "toy" + std::to_string(s) + "-" + std::to_string(w);
      item.present = fixture::random_word(rng, model.vocab(), 2, 4);
      // Three likely outputs as the suggested forms, the rest is "other".
      const BeamResult beam = beam_decode(model, item.present, 3);
      const FormRole roles[] = {FormRole::kRegular, FormRole::kIrregular1, FormRole::kIrregular2};
      for (std::size_t k = 0; k < beam.hypotheses.size(); ++k)
        item.forms.push_back({roles[k], "", beam.hypotheses[k].form, 0.0, std::nullopt});

      std::vector<double> truth;
      double tracked = 0.0;
      for (const auto& f : item.forms) {
        truth.push_back(force_score(model, item.present, f.phonemes).probability);
        tracked += truth.back();
      }
      truth.push_back(1.0 - tracked);

      num::Rng stream = num::Rng::derive(s, num::StreamPurpose::kSampling, static_cast<std::uint64_t>(w));
      agg::ProductionCounts counts;
      for (const auto& smp : sample_forms(model, item.present, samples, stream))
        counts.add(agg::categorize(item, smp));
      const std::vector<double> observed = {
          static_cast<double>(counts.regular), static_cast<double>(counts.irregular1),
          static_cast<double>(counts.irregular2), static_cast<double>(counts.other)};
      for (std::size_t c = 0; c < 4; ++c) {
        const double p = c < item.forms.size() ? truth[c] : (c == 3 ? truth.back() : 0.0);
        if (c < 3 && c >= item.forms.size()) continue;
        const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / samples);
        ++categories;
        within += std::abs(observed[c] / samples - p) <= 3 * se;
      }
    }
  }
  const double share = static_cast<double>(within) / static_cast<double>(categories);
  return pass_if(share >= 0.95, std::to_string(within) + "/" + std::to_string(categories) +
                                    " categories within 3 SE at " + std::to_string(samples) + " samples");
}

Outcome seed_variability() {
  const fs::path out = scratch_dir("seeds");
  harness::ExperimentConfig config;
  config.hp.embed_dim = 32;
  config.hp.hidden_dim = 32;
  config.hp.epochs = 30;
  config.seeds = {1, 2, 3, 4, 5};
  config.out = out;
  config.accuracy_every = 0;
  harness::cmd_train(config);
  const auto ev = harness::cmd_evaluate(config);
  const auto data = harness::load_dataset(config);

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  std::set<std::string> seeds_in_csv;
  std::ifstream csv(out / "evaluate" / "correlations.csv");
  std::string line;
  std::getline(csv, line);
  const auto header = split(line);
  const auto seed_col = static_cast<std::size_t>(std::find(header.begin(), header.end(), "seed") - header.begin());
  while (std::getline(csv, line)) {
    const auto cells = split(line);
    if (seed_col < cells.size()) seeds_in_csv.insert(cells[seed_col]);
  }
  std::size_t mass = 0;
  if (ev.second_place) {
    for (const auto& [count, forms] : ev.second_place->histogram()) mass += count * forms;
  }
  const std::size_t expected = config.seeds.size() * data.nonce.size();
  const bool ok = ev.seeds.size() == 5 && seeds_in_csv == std::set<std::string>{"1", "2", "3", "4", "5"} &&
                  ev.second_place && ev.second_place->total() == expected && mass == expected &&
                  fs::exists(out / "evaluate" / "second_place_histogram.csv");
  std::ostringstream d;
  d << "seeds in report " << seeds_in_csv.size() << ", histogram mass " << mass << " (expected "
    << config.seeds.size() << " x " << data.nonce.size() << " = " << expected << "); regular rho by seed:";
  for (const auto& s : ev.seeds) d << " " << report::fmt(s.correlations.front().regular);
  return pass_if(ok, d.str());
}

Outcome adadelta_trace() {
  const double gs[] = {1.0, -0.5, 2.0};
  num::AdadeltaConfig cfg{0.9, 1e-6};
  num::Tensor theta = num::Tensor::scalar(0.3);
  num::AdadeltaState state(theta.shape());
  oracle::ScalarAdadelta hand{0.9, 1e-6};
  double expected = 0.3, worst = 0.0;
  for (double g : gs) {
    num::adadelta_step(theta, num::Tensor::scalar(g), state, cfg, "theta");
    expected = hand.step(expected, g);
    worst = std::max(worst, std::abs(theta.item() - expected));
  }
  // first step from the closed form: -sqrt(eps)/sqrt(0.1 + eps)
  num::Tensor one = num::Tensor::scalar(0.0);
  num::AdadeltaState fresh(one.shape());
  num::adadelta_step(one, num::Tensor::scalar(1.0), fresh, cfg);
  const double first = -std::sqrt(1e-6) / std::sqrt(0.1 + 1e-6);
  worst = std::max(worst, std::abs(one.item() - first));
  return pass_if(worst <= 1e-12, "3-step trace, max deviation " + num(worst) + "; first step " + num(one.item()));
}

Outcome rule_learner() {
  auto verb = [](const char* lemma, const char* present, const char* past, VerbClass c) {
    return VerbEntry{lemma, parse_phonemes(present), parse_phonemes(past), c, std::nullopt};
  };
  const auto R = VerbClass::kRegular, I = VerbClass::kIrregular;
  const std::vector<VerbEntry> corpus = {
      verb("want", "w A n t", "w A n t @ d", R), verb("start", "s t A r t", "s t A r t @ d", R),
      verb("need", "n i: d", "n i: d @ d", R),   verb("fade", "f eI d", "f eI d @ d", R),
      verb("hug", "h V g", "h V g d", R),        verb("beg", "b E g", "b E g d", R),
      verb("call", "k O l", "k O l d", R),       verb("walk", "w O k", "w O k t", R),
      verb("kiss", "k I s", "k I s t", R),       verb("read", "r i: d", "r E d", I),
      verb("lead", "l i: d", "l E d", I),        verb("hit", "h I t", "h I t", I),
  };
  const rules::RuleGrammar g = rules::induce_grammar(corpus);

  struct Expect {
    const char* from;
    const char* to;
    const char* left;  // after X
    const char* right;
    std::size_t scope, hits;
  };
  // Hand-counted over the 12 presents.
  const Expect expected[] = {
      {"", "@ d", "", "", 12, 4},  // want start need fade
      {"", "d", "", "", 12, 3},    // hug beg call
      {"", "t", "", "", 12, 2},    // walk kiss
      {"", "@ d", "t", "", 3, 2},  // want start hit
      {"", "@ d", "d", "", 4, 2},  // need fade read lead
      {"", "d", "g", "", 2, 2},    // hug beg
      {"i:", "E", "", "d", 3, 2},  // need read lead
  };
  std::size_t found = 0;
  std::string missing;
  for (const auto& e : expected) {
    const auto it = std::find_if(g.rules.begin(), g.rules.end(), [&](const rules::Rule& r) {
      return r.from == parse_phonemes(e.from) && r.to == parse_phonemes(e.to) && r.left.variable &&
             r.left.literal == parse_phonemes(e.left) && r.right == parse_phonemes(e.right);
    });
    if (it != g.rules.end() && it->scope == e.scope && it->hits == e.hits &&
        std::abs(it->confidence - oracle::rule_confidence(e.scope, e.hits)) <= 1e-12) {
      ++found;
    } else {
      missing += std::string(" [") + e.from + "->" + e.to + " / X " + e.left + " _ " + e.right + "]";
    }
  }
  bool bounded = true;
  for (const auto& r : g.rules) bounded = bounded && r.confidence <= static_cast<double>(r.hits) / r.scope + 1e-15;

  // Hand-selected maxima for "bleed".
  const auto bleed = parse_phonemes("b l i: d");
  struct Score {
    const char* candidate;
    double expected;
  };
  const Score scores[] = {
      {"b l i: d @ d", std::max(oracle::rule_confidence(12, 4), oracle::rule_confidence(4, 2))},
      {"b l E d", oracle::rule_confidence(3, 2)},
      {"b l i: d d", oracle::rule_confidence(12, 3)},
      {"b l i: d t", oracle::rule_confidence(12, 2)},
      {"z z z", 0.0},
  };
  double score_gap = 0.0;
  for (const auto& s : scores)
    score_gap = std::max(score_gap, std::abs(rules::score_form(g, bleed, parse_phonemes(s.candidate)) - s.expected));

  return pass_if(found == std::size(expected) && bounded && score_gap <= 1e-12,
                 std::to_string(g.rules.size()) + " rules; " + std::to_string(found) + "/" +
                     std::to_string(std::size(expected)) + " hand-counted rules matched" + missing +
                     "; score_form max gap " + num(score_gap));
}

Outcome pca_planted() {
  num::Rng rng(11);
  const std::size_t d = 50, n = 200;
  std::vector<double> u(d), v(d);
  for (auto& a : u) a = rng.normal();
  for (auto& a : v) a = rng.normal();
  probe::EmbeddingCloud cloud{"planted", {}};
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.normal() * 3, b = rng.normal() * 2;
    std::vector<double> x(d);
    for (std::size_t j = 0; j < d; ++j) x[j] = a * u[j] + b * v[j] + 0.01 * std::sqrt(13.0) * rng.normal();
    cloud.points.push_back({"p" + std::to_string(i), "c", x});
  }
  const auto base = probe::pca_project(cloud, 2);
  const double top2 = base.explained[0] + base.explained[1];

  // Order: reversed input gives the same axes and the same per-point coordinates.
  probe::EmbeddingCloud shuffled = cloud;
  std::reverse(shuffled.points.begin(), shuffled.points.end());
  const auto rev = probe::pca_project(shuffled, 2);
  // Sign: a negated cloud gives the same axes and negated coordinates.
  probe::EmbeddingCloud negated = cloud;
  for (auto& p : negated.points)
    for (auto& x : p.values) x = -x;
  const auto neg = probe::pca_project(negated, 2);

  double order_gap = 0.0, sign_gap = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      order_gap = std::max(order_gap, std::abs(base.components[k][j] - rev.components[k][j]));
      sign_gap = std::max(sign_gap, std::abs(base.components[k][j] - neg.components[k][j]));
    }
    for (std::size_t i = 0; i < n; ++i) {
      order_gap = std::max(order_gap, std::abs(base.coords[i][k] - rev.coords[n - 1 - i][k]));
      sign_gap = std::max(sign_gap, std::abs(base.coords[i][k] + neg.coords[i][k]));
    }
  }
  return pass_if(top2 >= 0.95 && order_gap <= 1e-9 && sign_gap <= 1e-9,
                 "top-2 explained " + num(top2) + ", order gap " + num(order_gap) + ", sign gap " + num(sign_gap));
}

Outcome checkpoint_roundtrip() {
  harness::ExperimentConfig config;
  config.hp.embed_dim = 16;
  config.hp.hidden_dim = 16;
  config.hp.epochs = 3;
  config.hp.seed = 4;
  const auto data = harness::load_dataset(config);
  Inflector model = train_model(data.vocab, config.hp, data.stream);
  const fs::path dir = scratch_dir("ckpt");

  num::Rng rng(99);
  std::vector<PhonemeSequence> inputs;
  for (int i = 0; i < 100; ++i) inputs.push_back(fixture::random_word(rng, model.vocab(), 1, 7));

  auto identical = [&](const Inflector& a, const Inflector& b) {
    std::size_t same = 0;
    for (const auto& w : inputs) {
      const auto x = beam_decode(a, w, config.hp.beam_width), y = beam_decode(b, w, config.hp.beam_width);
      bool eq = x.hypotheses.size() == y.hypotheses.size();
      for (std::size_t i = 0; eq && i < x.hypotheses.size(); ++i)
        eq = x.hypotheses[i].ids == y.hypotheses[i].ids && x.hypotheses[i].log_prob == y.hypotheses[i].log_prob;
      same += eq;
    }
    return same;
  };

  Inflector f32 = model;
  f32.round_to_float32();
  data::save_checkpoint(f32, dir / "m32.ckpt", data::Precision::kFloat32);
  const std::size_t same32 = identical(f32, data::load_checkpoint(dir / "m32.ckpt"));
  data::save_checkpoint(model, dir / "m64.ckpt", data::Precision::kFloat64);
  const std::size_t same64 = identical(model, data::load_checkpoint(dir / "m64.ckpt"));
  return pass_if(same32 == 100 && same64 == 100, "bit-identical beams: f32 " + std::to_string(same32) +
                                                     "/100, f64 " + std::to_string(same64) + "/100");
}

// Only with user-supplied data; never gates the exit status.
Outcome licensed_data() {
  const char* path = std::getenv("WUG_LICENSED_CONFIG");
  if (!path) return {Status::kSkip, "licensed corpus not supplied (set WUG_LICENSED_CONFIG to a config file)"};
  harness::ExperimentConfig config = harness::ExperimentConfig::load(path);
  const auto train = harness::cmd_train(config);
  const auto ev = harness::cmd_evaluate(config);
  double overall = 0, irregular = 0, cr5 = 0;
  std::vector<double> rhos;
  for (const auto& s : ev.seeds) {
    overall += s.accuracy.overall;
    irregular += s.accuracy.irregular;
    cr5 += s.cr5.value;
    if (s.correlations.front().regular) rhos.push_back(*s.correlations.front().regular);
  }
  const double n = static_cast<double>(ev.seeds.size());
  overall /= n;
  irregular /= n;
  cr5 /= n;
  const auto [lo, hi] = std::minmax_element(rhos.begin(), rhos.end());
  const bool spread = !rhos.empty() && *hi > *lo && *lo <= 0.56 && *hi >= 0.15;
  const bool ok = std::abs(overall - 99.51) <= 2 * 0.04 * std::sqrt(n) + 0.5 &&
                  std::abs(irregular - 92.98) <= 2 * 1.18 + 5 && spread && cr5 >= 0.25 && cr5 <= 0.6;
  std::ostringstream d;
  d << "soft bands: overall " << num(overall) << ", irregular " << num(irregular) << ", CR@5 " << num(cr5)
    << ", regular rho in [" << (rhos.empty() ? "NA" : num(*lo)) << ", " << (rhos.empty() ? "NA" : num(*hi)) << "]";
  return {ok ? Status::kPass : Status::kFail, d.str()};
}

struct Criterion {
  int id;
  const char* name;
  bool gate;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "gradient fidelity", true, gradient_fidelity},
      {2, "beam exactness", true, beam_exactness},
      {3, "forced-score consistency", true, forced_score_consistency},
      {4, "synthetic convergence", true, synthetic_convergence},
      {5, "CR@5 fixture", true, cr5_fixture},
      {6, "correlation oracles", true, correlation_oracles},
      {7, "sampling fidelity", true, sampling_fidelity},
      {8, "seed-variability harness", true, seed_variability},
      {9, "adadelta trace", true, adadelta_trace},
      {10, "rule learner", true, rule_learner},
      {11, "PCA planted subspace", true, pca_planted},
      {12, "checkpoint round-trip", true, checkpoint_roundtrip},
      {13, "licensed-data bands", false, licensed_data},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kSkip ? "SKIP" : "FAIL";
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
    std::cout << tag << "  criterion " << c.id << " (" << c.name << ", " << timing << "): " << o.detail << std::endl;
    if (c.gate && o.status == Status::kFail) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
