#include "wug/harness/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "wug/datastore/checkpoint.hpp"
#include "wug/datastore/corpus_io.hpp"
#include "wug/datastore/synthetic.hpp"
#include "wug/errors.hpp"
#include "wug/inflector/decode.hpp"
#include "wug/probe/probe.hpp"
#include "wug/report.hpp"

namespace wug::harness {

namespace {

using report::csv_row;
using report::fmt;

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
// wins and is rethrown tagged with the seed.
template <typename F>
void for_each_seed(const std::vector<std::uint64_t>& seeds, std::size_t workers, F fn) {
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr error;
  std::string where;
  auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) {
          error = std::current_exception();
          where = "seed " + std::to_string(seeds[i]);
        }
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(workers, seeds.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (!error) return;
  try {
    std::rethrow_exception(error);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  } catch (const IngestionError& e) {
    throw IngestionError(where + ": " + e.what());
  } catch (const ProvenanceError& e) {
    throw ProvenanceError(where + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(where + ": " + std::string(e.what()));
  }
}

HyperParams seeded(const ExperimentConfig& config, std::uint64_t seed) {
  HyperParams hp = config.hp;
  hp.seed = seed;
  return hp;
}

Inflector load_for(const ExperimentConfig& config, std::uint64_t seed, std::size_t epoch) {
  const auto path = checkpoint_path(config, seed, epoch);
  Inflector m = data::load_checkpoint(path);
  if (m.hparams().seed != seed || m.epochs_completed() != epoch) {
    throw ProvenanceError(path.string() + " holds seed " + std::to_string(m.hparams().seed) + " epoch " +
                          std::to_string(m.epochs_completed()) + ", expected seed " + std::to_string(seed) +
                          " epoch " + std::to_string(epoch));
  }
  return m;
}

void require_checkpoints(const ExperimentConfig& config, const std::vector<std::size_t>& epochs) {
  std::vector<std::string> missing;
  for (auto seed : config.seeds)
    for (auto e : epochs)
      if (!std::filesystem::exists(checkpoint_path(config, seed, e))) missing.push_back(checkpoint_path(config, seed, e).string());
  if (missing.empty()) return;
  std::string msg = "missing checkpoints (run 'train' first):";
  for (const auto& m : missing) msg += "\n  " + m;
  throw IngestionError(msg);
}

bool has_ratings(const std::vector<NonceItem>& items) {
  for (const auto& i : items)
    for (const auto& f : i.forms)
      if (!f.rating) return false;
  return !items.empty();
}

std::vector<eval::CorrelationReport> all_correlations(const std::vector<NonceItem>& items,
                                                      const eval::FormScoreTable& scores) {
  std::vector<eval::CorrelationReport> out;
  for (auto m : {eval::Measure::kSpearman, eval::Measure::kPearson}) {
    out.push_back(eval::correlate_forms(items, scores, m, eval::Target::kProduction));
    if (has_ratings(items)) {
      out.push_back(eval::correlate_forms(items, scores, m, eval::Target::kRating));
    } else {
      eval::CorrelationReport r;
      r.measure = m;
      r.target = eval::Target::kRating;
      out.push_back(r);  // undefined: no ratings in the data
    }
  }
  return out;
}

void write_correlations(std::ostream& os, const ExperimentConfig& config, const std::string& source,
                        std::optional<std::uint64_t> seed, std::optional<std::size_t> epoch,
                        const std::vector<eval::CorrelationReport>& reports) {
  for (const auto& r : reports) {
    csv_row(os, {provenance(config, seed, epoch), source, seed ? std::to_string(*seed) : "", eval::to_string(r.measure),
                 eval::to_string(r.target), fmt(r.regular), fmt(r.irregular),
                 std::to_string(r.regular_pairs.model.size()), std::to_string(r.irregular_pairs.model.size())});
  }
}

const std::vector<std::string> kCorrelationHeader{"provenance", "source", "seed", "measure", "target",
                                                  "regular", "irregular", "n_regular", "n_irregular"};

std::string str(const std::ostringstream& os) { return os.str(); }

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stdev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

Dataset load_dataset(const ExperimentConfig& config) {
  config.validate();
  Dataset d;
  d.classes = config.phoneme_classes.empty() ? PhonemeClassTable::english_default()
                                             : PhonemeClassTable::load(config.phoneme_classes);
  if (config.synthetic()) {
    auto spec = data::SyntheticSpec::with_counts(config.synthetic_regular, config.synthetic_irregular);
    spec.classes = d.classes;
    auto syn = data::make_synthetic_corpus(spec, config.synthetic_seed);
    d.corpus = std::move(syn.corpus);
    d.nonce = std::move(syn.nonce);
    d.stream = d.corpus;
  } else {
    d.corpus = data::load_corpus(config.corpus, {data::FrequencyMode::kType});
    d.stream = data::epoch_stream(data::load_corpus(config.corpus, {config.frequency_mode}), config.frequency_mode);
    d.nonce = data::load_nonce(config.nonce);
  }
  if (d.corpus.empty()) throw ValidationError("corpus is empty");
  std::vector<PhonemeSequence> seqs;
  for (const auto& e : d.corpus) {
    seqs.push_back(e.present);
    seqs.push_back(e.past);
  }
  for (const auto& i : d.nonce) {
    seqs.push_back(i.present);
    for (const auto& f : i.forms) seqs.push_back(f.phonemes);
  }
  d.vocab = Vocabulary::from_sequences(seqs);
  return d;
}

std::filesystem::path checkpoint_path(const ExperimentConfig& config, std::uint64_t seed, std::size_t epoch) {
  char name[32];
  std::snprintf(name, sizeof name, "epoch-%04zu.ckpt", epoch);
  return config.out / "checkpoints" / ("seed-" + std::to_string(seed)) / name;
}

std::string provenance(const ExperimentConfig& config, std::optional<std::uint64_t> seed,
                       std::optional<std::size_t> epoch) {
  std::string p;
  if (seed) p += "seed=" + std::to_string(*seed) + ";";
  if (epoch) p += "epoch=" + std::to_string(*epoch) + ";";
  return p + "config=" + config.hash();
}

TrainResult cmd_train(const ExperimentConfig& config) {
  const Dataset data = load_dataset(config);
  const auto saved = config.saved_epochs();
  TrainResult result;
  result.seeds = config.seeds;
  result.logs.resize(config.seeds.size());

  for_each_seed(config.seeds, config.workers, [&](std::size_t k) {
    const std::uint64_t seed = config.seeds[k];
    Inflector model(data.vocab, seeded(config, seed));
    Trainer trainer(model);
    std::vector<TrainLogRow>& log = result.logs[k];
    for (std::size_t e = 1; e <= config.hp.epochs; ++e) {
      const EpochStats stats = trainer.train_epoch(data.stream);
      TrainLogRow row{e, stats.loss_per_symbol, std::nullopt};
      if ((config.accuracy_every > 0 && e % config.accuracy_every == 0) || e == config.hp.epochs) {
        row.accuracy = training_accuracy(model, data.corpus, config.hp.beam_width);
      }
      log.push_back(row);
      if (std::binary_search(saved.begin(), saved.end(), e)) {
        data::save_checkpoint(model, checkpoint_path(config, seed, e));
      }
    }
    std::ostringstream os;
    csv_row(os, {"provenance", "seed", "epoch", "loss_per_symbol", "accuracy", "regular_accuracy",
                 "irregular_accuracy"});
    for (const auto& r : log) {
      csv_row(os, {provenance(config, seed, r.epoch), std::to_string(seed), std::to_string(r.epoch), fmt(r.loss),
                   r.accuracy ? fmt(r.accuracy->overall) : "NA", r.accuracy ? fmt(r.accuracy->regular) : "NA",
                   r.accuracy ? fmt(r.accuracy->irregular) : "NA"});
    }
    report::write_file(config.out / "train" / ("seed-" + std::to_string(seed) + ".csv"), str(os));
  });

  std::vector<report::Series> curves;
  for (std::size_t k = 0; k < config.seeds.size(); ++k) {
    for (const char* which : {"regular", "irregular"}) {
      report::Series s;
      s.name = "seed " + std::to_string(config.seeds[k]) + " " + which;
      for (const auto& r : result.logs[k]) {
        if (!r.accuracy) continue;
        s.x.push_back(static_cast<double>(r.epoch));
        s.y.push_back(std::string(which) == "regular" ? r.accuracy->regular : r.accuracy->irregular);
      }
      curves.push_back(std::move(s));
    }
  }
  report::write_file(config.out / "train" / "convergence.svg",
                     report::svg_lines("Training accuracy", "epoch", "accuracy (%)", curves));
  return result;
}

SeedEvaluation evaluate_model(const Inflector& model, const Dataset& data) {
  SeedEvaluation ev;
  ev.seed = model.hparams().seed;
  ev.accuracy = training_accuracy(model, data.corpus, model.hparams().beam_width);
  eval::FormScoreTable scores;
  std::vector<double> tops;
  for (const auto& item : data.nonce) {
    const BeamResult beam = beam_decode(model, item.present, model.hparams().beam_width);
    ev.beams[item.id] = eval::ranked_forms(beam);
    if (!beam.empty()) tops.push_back(std::exp(beam.top().log_prob));
    std::vector<PhonemeSequence> forms;
    for (const auto& f : item.forms) forms.push_back(f.phonemes);
    const auto fs = force_scores(model, item.present, forms);
    for (std::size_t i = 0; i < item.forms.size(); ++i) scores[{item.id, item.forms[i].role}] = fs[i].probability;
  }
  ev.mean_top_probability = mean(tops);
  ev.correlations = all_correlations(data.nonce, scores);
  ev.cr5 = eval::cr_at_5(data.nonce, ev.beams);
  return ev;
}

EvaluateResult cmd_evaluate(const ExperimentConfig& config) {
  const Dataset data = load_dataset(config);
  const std::size_t epoch = config.hp.epochs;
  require_checkpoints(config, {epoch});
  EvaluateResult result;
  result.seeds.resize(config.seeds.size());
  for_each_seed(config.seeds, config.workers, [&](std::size_t k) {
    result.seeds[k] = evaluate_model(load_for(config, config.seeds[k], epoch), data);
  });

  const auto dir = config.out / "evaluate";
  std::ostringstream corr, cr5, acc, beams;
  csv_row(corr, kCorrelationHeader);
  csv_row(cr5, {"provenance", "seed", "item", "category", "complete"});
  csv_row(acc, {"provenance", "seed", "overall", "regular", "irregular", "cr_at_5", "mean_top_probability"});
  csv_row(beams, {"provenance", "seed", "item", "rank", "form"});
  std::vector<double> overall, regular, irregular, cr5s;
  for (const auto& ev : result.seeds) {
    const std::string prov = provenance(config, ev.seed, epoch);
    write_correlations(corr, config, "neural", ev.seed, epoch, ev.correlations);
    for (std::size_t i = 0; i < ev.cr5.ids.size(); ++i) {
      csv_row(cr5, {prov, std::to_string(ev.seed), ev.cr5.ids[i], to_string(data.nonce[i].category),
                    ev.cr5.complete[i] ? "1" : "0"});
    }
    csv_row(acc, {prov, std::to_string(ev.seed), fmt(ev.accuracy.overall), fmt(ev.accuracy.regular),
                  fmt(ev.accuracy.irregular), fmt(ev.cr5.value), fmt(ev.mean_top_probability)});
    for (const auto& [id, forms] : ev.beams)
      for (std::size_t r = 0; r < forms.size(); ++r)
        csv_row(beams, {prov, std::to_string(ev.seed), id, std::to_string(r + 1), join_phonemes(forms[r])});
    overall.push_back(ev.accuracy.overall);
    regular.push_back(ev.accuracy.regular);
    irregular.push_back(ev.accuracy.irregular);
    cr5s.push_back(ev.cr5.value);
  }
  const std::string prov_all = provenance(config, std::nullopt, epoch);
  csv_row(acc, {prov_all, "mean", fmt(mean(overall)), fmt(mean(regular)), fmt(mean(irregular)), fmt(mean(cr5s)), ""});
  csv_row(acc, {prov_all, "sd", fmt(stdev(overall)), fmt(stdev(regular)), fmt(stdev(irregular)), fmt(stdev(cr5s)), ""});
  report::write_file(dir / "correlations.csv", corr.str());
  report::write_file(dir / "cr5.csv", cr5.str());
  report::write_file(dir / "accuracy.csv", acc.str());
  report::write_file(dir / "beams.csv", beams.str());

  // Scatter of model score vs human production for the first seed.
  if (!result.seeds.empty()) {
    const auto& first = result.seeds.front().correlations.front();
    report::Series reg{"regular", first.regular_pairs.model, first.regular_pairs.human, {}};
    report::Series irr{"irregular", first.irregular_pairs.model, first.irregular_pairs.human, {}};
    report::write_file(dir / "scatter.svg",
                       report::svg_scatter("Model probability vs human production (seed " +
                                               std::to_string(result.seeds.front().seed) + ")",
                                           "model probability", "human production", {reg, irr}));
  }
  {
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& ev : result.seeds) {
      labels.push_back(std::to_string(ev.seed));
      values.push_back(ev.correlations.front().regular.value_or(0.0));
    }
    report::write_file(dir / "rho_by_seed.svg", report::svg_bars("Regular Spearman rho by seed", labels, values));
  }

  if (result.seeds.size() >= 2) {
    std::vector<eval::BeamTable> tables;
    for (const auto& ev : result.seeds) tables.push_back(ev.beams);
    result.second_place = eval::second_place_agreement(tables, data.nonce);
    std::ostringstream sp, hist;
    csv_row(sp, {"provenance", "item", "form", "seeds_ranking_second"});
    for (const auto& e : result.second_place->entries)
      csv_row(sp, {prov_all, e.item, join_phonemes(e.form), std::to_string(e.count)});
    csv_row(hist, {"provenance", "seeds_agreeing", "forms"});
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& [count, forms] : result.second_place->histogram()) {
      csv_row(hist, {prov_all, std::to_string(count), std::to_string(forms)});
      labels.push_back(std::to_string(count));
      values.push_back(static_cast<double>(forms));
    }
    report::write_file(dir / "second_place.csv", sp.str());
    report::write_file(dir / "second_place_histogram.csv", hist.str());
    report::write_file(dir / "second_place_histogram.svg",
                       report::svg_bars("Second-place forms by number of agreeing seeds", labels, values));
  }
  return result;
}

AggregateResult cmd_aggregate(const ExperimentConfig& config) {
  const Dataset data = load_dataset(config);
  agg::ParticipantOptions opt;
  opt.seeds = config.seeds;
  opt.samples = config.samples;
  opt.workers = config.workers;
  opt.checkpoint_for = [&](std::uint64_t seed) { return checkpoint_path(config, seed, config.hp.epochs); };
  AggregateResult r;
  r.table = agg::run_participants(data.stream, data.nonce, data.vocab, config.hp, opt);
  r.comparison = agg::compare_to_humans(r.table, data.nonce);
  r.means = eval::category_means(data.nonce, r.table.share_table());

  const auto dir = config.out / "aggregate";
  const std::string prov = provenance(config, std::nullopt, config.hp.epochs) + ";samples=" +
                           std::to_string(config.samples) + ";seeds=" + std::to_string(config.seeds.size());
  std::ostringstream prod, cmp, means;
  csv_row(prod, {"provenance", "category", "item", "source", "regular", "irregular1", "irregular2", "other",
                 "count_regular", "count_irregular1", "count_irregular2", "count_other"});
  for (NonceCategory c : kAllNonceCategories) {
    for (std::size_t i = 0; i < data.nonce.size(); ++i) {
      const auto& item = data.nonce[i];
      if (item.category != c) continue;
      const auto h = eval::human_shares(item);
      const auto& row = r.table.rows[i];
      const bool irr2 = row.has_irregular2;
      csv_row(prod, {prov, to_string(c), item.id, "human", fmt(h.regular), fmt(h.irregular1),
                     irr2 ? fmt(h.irregular2) : "", fmt(h.other), "", "", "", ""});
      csv_row(prod, {prov, to_string(c), item.id, "model", fmt(row.shares.regular), fmt(row.shares.irregular1),
                     irr2 ? fmt(row.shares.irregular2) : "", fmt(row.shares.other),
                     std::to_string(row.counts.regular), std::to_string(row.counts.irregular1),
                     std::to_string(row.counts.irregular2), std::to_string(row.counts.other)});
    }
  }
  csv_row(cmp, {"provenance", "item", "model_prefers_irregular", "human_prefers_irregular"});
  for (std::size_t i = 0; i < r.comparison.ids.size(); ++i) {
    csv_row(cmp, {prov, r.comparison.ids[i], r.comparison.model_prefers_irregular[i] ? "1" : "0",
                  r.comparison.human_prefers_irregular[i] ? "1" : "0"});
  }
  csv_row(cmp, {prov, "spearman_regular", fmt(r.comparison.regular_rho), ""});
  csv_row(cmp, {prov, "spearman_irregular", fmt(r.comparison.irregular_rho), ""});
  csv_row(means, {"provenance", "category", "items", "human_regular", "model_regular", "human_irregular",
                  "model_irregular"});
  std::vector<std::string> labels;
  std::vector<double> reg_h, irr_h;
  for (const auto& m : r.means.rows) {
    csv_row(means, {prov, to_string(m.category), std::to_string(m.items), fmt(m.human_regular), fmt(m.model_regular),
                    fmt(m.human_irregular), fmt(m.model_irregular)});
  }
  for (const auto& w : r.means.warnings) csv_row(means, {prov, "warning", w, "", "", "", ""});
  report::write_file(dir / "production.csv", prod.str());
  report::write_file(dir / "comparison.csv", cmp.str());
  report::write_file(dir / "category_means.csv", means.str());
  for (const auto& m : r.means.rows) {
    labels.push_back(std::string(to_string(m.category)) + " H");
    reg_h.push_back(m.human_regular);
    irr_h.push_back(m.human_irregular);
    labels.push_back(std::string(to_string(m.category)) + " M");
    reg_h.push_back(m.model_regular);
    irr_h.push_back(m.model_irregular);
  }
  report::write_file(dir / "category_regular.svg", report::svg_bars("Mean regular production (H human, M model)", labels, reg_h));
  report::write_file(dir / "category_irregular.svg", report::svg_bars("Mean irregular production (H human, M model)", labels, irr_h));
  return r;
}

std::vector<SweepRow> cmd_epoch_sweep(const ExperimentConfig& config) {
  const Dataset data = load_dataset(config);
  const auto epochs = config.saved_epochs();
  require_checkpoints(config, epochs);
  std::vector<std::vector<SweepRow>> per_seed(config.seeds.size());
  for_each_seed(config.seeds, config.workers, [&](std::size_t k) {
    for (std::size_t e : epochs) {
      const Inflector m = load_for(config, config.seeds[k], e);
      const SeedEvaluation ev = evaluate_model(m, data);
      per_seed[k].push_back({config.seeds[k], e, ev.correlations.front().regular, ev.correlations.front().irregular,
                             ev.mean_top_probability, ev.accuracy.irregular});
    }
  });
  std::vector<SweepRow> rows;
  for (auto& v : per_seed) rows.insert(rows.end(), v.begin(), v.end());

  std::ostringstream os;
  csv_row(os, {"provenance", "seed", "epoch", "spearman_regular", "spearman_irregular", "mean_top_probability",
               "irregular_accuracy"});
  for (const auto& r : rows) {
    csv_row(os, {provenance(config, r.seed, r.epoch), std::to_string(r.seed), std::to_string(r.epoch),
                 fmt(r.rho_regular), fmt(r.rho_irregular), fmt(r.mean_top_probability), fmt(r.irregular_accuracy)});
  }
  report::write_file(config.out / "epoch_sweep" / "sweep.csv", os.str());

  std::map<std::size_t, std::vector<const SweepRow*>> by_epoch;
  for (const auto& r : rows) by_epoch[r.epoch].push_back(&r);
  report::Series rr{"rho regular", {}, {}, {}}, ri{"rho irregular", {}, {}, {}}, tp{"mean top probability", {}, {}, {}},
      ia{"irregular accuracy / 100", {}, {}, {}};
  for (const auto& [e, rs] : by_epoch) {
    std::vector<double> a, b, c, d;
    for (const auto* r : rs) {
      if (r->rho_regular) a.push_back(*r->rho_regular);
      if (r->rho_irregular) b.push_back(*r->rho_irregular);
      c.push_back(r->mean_top_probability);
      d.push_back(r->irregular_accuracy / 100.0);
    }
    const double x = static_cast<double>(e);
    rr.x.push_back(x), rr.y.push_back(mean(a));
    ri.x.push_back(x), ri.y.push_back(mean(b));
    tp.x.push_back(x), tp.y.push_back(mean(c));
    ia.x.push_back(x), ia.y.push_back(mean(d));
  }
  report::write_file(config.out / "epoch_sweep" / "sweep.svg",
                     report::svg_lines("Correlation and confidence by epoch (seed mean)", "epoch", "value",
                                       {rr, ri, tp, ia}));
  return rows;
}

RulesResult cmd_rules(const ExperimentConfig& config) {
  const Dataset data = load_dataset(config);
  RulesResult r;
  r.grammar = rules::induce_grammar(data.corpus);
  for (const auto& item : data.nonce)
    for (const auto& f : item.forms) r.scores[{item.id, f.role}] = rules::score_form(r.grammar, item.present, f.phonemes);
  r.correlations = all_correlations(data.nonce, r.scores);

  const auto dir = config.out / "rules";
  std::ostringstream g, corr, scores;
  r.grammar.write_table(g);
  csv_row(corr, kCorrelationHeader);
  write_correlations(corr, config, "rules", std::nullopt, std::nullopt, r.correlations);
  csv_row(scores, {"provenance", "item", "role", "form", "confidence"});
  for (const auto& item : data.nonce)
    for (const auto& f : item.forms)
      csv_row(scores, {provenance(config, std::nullopt, std::nullopt), item.id, to_string(f.role),
                       join_phonemes(f.phonemes), fmt(r.scores.at({item.id, f.role}))});
  report::write_file(dir / "grammar.tsv", g.str());
  report::write_file(dir / "correlations.csv", corr.str());
  report::write_file(dir / "scores.csv", scores.str());
  return r;
}

ProbeResult cmd_probe(const ExperimentConfig& config) {
  const Dataset data = load_dataset(config);
  const std::uint64_t seed = config.seeds.front();
  require_checkpoints(config, {config.hp.epochs});
  const Inflector forward = load_for(config, seed, config.hp.epochs);
  const auto dir = config.out / "probe";
  const std::string prov = provenance(config, seed, config.hp.epochs);
  ProbeResult result;

  std::vector<probe::Word> words;
  std::set<PhonemeSequence> seen;
  for (const auto& e : data.corpus)
    if (seen.insert(e.present).second) words.push_back({e.present, to_string(e.verb_class)});
  for (const auto& i : data.nonce)
    if (seen.insert(i.present).second) words.push_back({i.present, "nonce"});

  auto neighbour_checks = [&](const probe::EmbeddingCloud& cloud, const std::string& model,
                              const std::vector<probe::Word>& originals) {
    const auto nn = probe::nearest_neighbours(cloud, 5);
    std::vector<std::string> trailing, leading;
    for (const auto& w : originals) {
      trailing.push_back(probe::trailing_key(w.phonemes, 2));
      leading.push_back(join_phonemes(PhonemeSequence(w.phonemes.begin(),
                                                      w.phonemes.begin() + std::min<std::ptrdiff_t>(2, static_cast<std::ptrdiff_t>(w.phonemes.size())))));
    }
    result.neighbours.push_back({model, "trailing2", probe::key_agreement(nn, trailing), probe::chance_key_agreement(trailing)});
    result.neighbours.push_back({model, "leading2", probe::key_agreement(nn, leading), probe::chance_key_agreement(leading)});
  };

  const auto enc = probe::encoder_cloud(forward, words);
  const auto enc_pca = probe::pca_project(enc, 2);
  result.encoder_explained = enc_pca.explained;
  neighbour_checks(enc, "forward", words);

  const auto phon = probe::decoder_phoneme_cloud(forward, data.classes, data.corpus);
  const auto phon_pca = probe::pca_project(phon, 2);
  result.phoneme_explained = phon_pca.explained;
  result.phoneme_separability = probe::nearest_centroid_accuracy(phon_pca);

  // Control: same seed trained on reversed presents.
  {
    const auto rev_stream = probe::reverse_inputs(data.stream);
    const Inflector reversed = train_model(data.vocab, seeded(config, seed), rev_stream);
    std::vector<probe::Word> rev_words;
    for (const auto& w : words) rev_words.push_back({probe::reversed(w.phonemes), w.cls});
    const auto rev = probe::encoder_cloud(reversed, rev_words);
    neighbour_checks(rev, "reversed", words);
    std::ostringstream os;
    probe::write_projection_csv(os, probe::pca_project(rev, 2));
    report::write_file(dir / "reversed_encoder_pca.csv", os.str());
    report::write_file(dir / "reversed_encoder_pca.svg",
                       probe::projection_svg(probe::pca_project(rev, 2), "Encoder summaries, reversed-input model"));
  }

  std::ostringstream a, b, c, d, s;
  probe::write_cloud_csv(a, enc);
  probe::write_projection_csv(b, enc_pca);
  probe::write_cloud_csv(c, phon);
  probe::write_projection_csv(d, phon_pca);
  csv_row(s, {"provenance", "measure", "model", "key", "value", "chance"});
  for (const auto& n : result.neighbours)
    csv_row(s, {prov, "knn5_key_agreement", n.model, n.key, fmt(n.agreement), fmt(n.chance)});
  for (std::size_t i = 0; i < result.encoder_explained.size(); ++i)
    csv_row(s, {prov, "encoder_explained_pc" + std::to_string(i + 1), "forward", "", fmt(result.encoder_explained[i]), ""});
  for (std::size_t i = 0; i < result.phoneme_explained.size(); ++i)
    csv_row(s, {prov, "phoneme_explained_pc" + std::to_string(i + 1), "forward", "", fmt(result.phoneme_explained[i]), ""});
  csv_row(s, {prov, "phoneme_nearest_centroid_accuracy", "forward", "", fmt(result.phoneme_separability), ""});
  report::write_file(dir / "encoder_cloud.csv", a.str());
  report::write_file(dir / "encoder_pca.csv", b.str());
  report::write_file(dir / "phoneme_cloud.csv", c.str());
  report::write_file(dir / "phoneme_pca.csv", d.str());
  report::write_file(dir / "summary.csv", s.str());
  report::write_file(dir / "encoder_pca.svg", probe::projection_svg(enc_pca, "Encoder summaries"));
  report::write_file(dir / "phoneme_pca.svg", probe::projection_svg(phon_pca, "Decoder phoneme vectors"));
  return result;
}

std::vector<std::filesystem::path> cmd_synth(const ExperimentConfig& config) {
  const Dataset data = load_dataset(config);
  const auto dir = config.out / "synth";
  std::ostringstream corpus, nonce, classes;
  data::write_corpus(corpus, data.corpus);
  data::write_nonce(nonce, data.nonce);
  data.classes.write(classes);
  std::vector<std::filesystem::path> files{dir / "corpus.tsv", dir / "nonce.tsv", dir / "phoneme_classes.tsv"};
  report::write_file(files[0], corpus.str());
  report::write_file(files[1], nonce.str());
  report::write_file(files[2], classes.str());
  return files;
}

}  // namespace wug::harness
