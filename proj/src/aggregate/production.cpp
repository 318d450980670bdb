#include "wug/aggregate/production.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "wug/datastore/checkpoint.hpp"
#include "wug/errors.hpp"
#include "wug/inflector/train.hpp"

namespace wug::agg {

Outcome categorize(const NonceItem& item, const SampledForm& sample) {
  if (sample.truncated) return Outcome::kOther;
  for (const auto& f : item.forms) {
    if (f.phonemes != sample.form) continue;
    switch (f.role) {
      case FormRole::kRegular: return Outcome::kRegular;
      case FormRole::kIrregular1: return Outcome::kIrregular1;
      case FormRole::kIrregular2: return Outcome::kIrregular2;
    }
  }
  return Outcome::kOther;
}

void ProductionCounts::add(Outcome o) {
  switch (o) {
    case Outcome::kRegular: ++regular; break;
    case Outcome::kIrregular1: ++irregular1; break;
    case Outcome::kIrregular2: ++irregular2; break;
    case Outcome::kOther: ++other; break;
  }
}

ProductionCounts& ProductionCounts::operator+=(const ProductionCounts& o) {
  regular += o.regular;
  irregular1 += o.irregular1;
  irregular2 += o.irregular2;
  other += o.other;
  return *this;
}

eval::ShareTable ProductionTable::share_table() const {
  eval::ShareTable t;
  for (const auto& r : rows) t[r.id] = r.shares;
  return t;
}

std::vector<ProductionCounts> sample_productions(const Inflector& model, std::span<const NonceItem> items,
                                                 std::size_t samples) {
  std::vector<ProductionCounts> out(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    num::Rng stream = num::Rng::derive(model.hparams().seed, num::StreamPurpose::kSampling, i);
    for (const auto& s : sample_forms(model, items[i].present, samples, stream)) {
      out[i].add(categorize(items[i], s));
    }
  }
  return out;
}

ProductionTable tabulate(std::span<const NonceItem> items, std::span<const std::uint64_t> seeds,
                         std::span<const std::vector<ProductionCounts>> per_seed, std::size_t samples) {
  if (seeds.size() != per_seed.size()) throw DimensionError("tabulate: one count vector per seed expected");
  ProductionTable table;
  table.seeds.assign(seeds.begin(), seeds.end());
  std::sort(table.seeds.begin(), table.seeds.end());
  table.samples_per_seed = samples;
  for (std::size_t i = 0; i < items.size(); ++i) {
    ProductionRow row;
    row.id = items[i].id;
    row.category = items[i].category;
    row.has_irregular2 = items[i].find(FormRole::kIrregular2) != nullptr;
    for (const auto& counts : per_seed) {
      if (counts.size() != items.size()) throw DimensionError("tabulate: count vector does not match items");
      row.counts += counts[i];
    }
    const double n = static_cast<double>(row.counts.total());
    if (n > 0) {
      row.shares.regular = static_cast<double>(row.counts.regular) / n;
      row.shares.irregular1 = static_cast<double>(row.counts.irregular1) / n;
      row.shares.irregular2 = static_cast<double>(row.counts.irregular2) / n;
      row.shares.other = static_cast<double>(row.counts.other) / n;
    }
    table.rows.push_back(row);
  }
  return table;
}

ProductionTable run_participants(std::span<const VerbEntry> corpus, std::span<const NonceItem> items,
                                 const Vocabulary& vocab, const HyperParams& hp,
                                 const ParticipantOptions& options) {
  if (options.seeds.empty()) throw ValidationError("run_participants: no seeds");
  if (options.samples == 0) throw ValidationError("run_participants: samples must be >= 1");
  if (std::set<std::uint64_t>(options.seeds.begin(), options.seeds.end()).size() != options.seeds.size()) {
    throw ValidationError("run_participants: duplicate seeds");
  }

  std::vector<std::vector<ProductionCounts>> per_seed(options.seeds.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto work = [&] {
    for (std::size_t k = next++; k < options.seeds.size(); k = next++) {
      try {
        const std::uint64_t seed = options.seeds[k];
        HyperParams seeded = hp;
        seeded.seed = seed;
        std::optional<Inflector> model;
        const std::filesystem::path path = options.checkpoint_for ? options.checkpoint_for(seed) : std::filesystem::path();
        if (!path.empty() && std::filesystem::exists(path)) {
          model.emplace(data::load_checkpoint(path));
          if (model->hparams().seed != seed) {
            throw ProvenanceError(path.string() + " holds seed " + std::to_string(model->hparams().seed) +
                                  ", expected seed " + std::to_string(seed));
          }
        } else {
          model.emplace(train_model(vocab, seeded, corpus));
          if (!path.empty()) data::save_checkpoint(*model, path);
        }
        per_seed[k] = sample_productions(*model, items, options.samples);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, options.seeds.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return tabulate(items, options.seeds, per_seed, options.samples);
}

std::size_t HumanComparison::disagreements() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) n += model_prefers_irregular[i] != human_prefers_irregular[i];
  return n;
}

HumanComparison compare_to_humans(const ProductionTable& table, std::span<const NonceItem> items) {
  std::map<std::string, const ProductionRow*> rows;
  for (const auto& r : table.rows) rows[r.id] = &r;
  std::vector<double> reg_model, reg_human, irr_model, irr_human;
  HumanComparison out;
  for (const auto& item : items) {
    auto it = rows.find(item.id);
    if (it == rows.end()) throw ContractError("compare_to_humans: item '" + item.id + "' missing from table");
    const eval::ItemShares& m = it->second->shares;
    const eval::ItemShares h = eval::human_shares(item);
    reg_model.push_back(m.regular);
    reg_human.push_back(h.regular);
    irr_model.push_back(m.irregular1);
    irr_human.push_back(h.irregular1);
    if (item.find(FormRole::kIrregular2)) {
      irr_model.push_back(m.irregular2);
      irr_human.push_back(h.irregular2);
    }
    out.ids.push_back(item.id);
    out.model_prefers_irregular.push_back(std::max(m.irregular1, m.irregular2) > m.regular);
    out.human_prefers_irregular.push_back(std::max(h.irregular1, h.irregular2) > h.regular);
  }
  if (reg_model.size() >= 3) out.regular_rho = eval::spearman(reg_model, reg_human);
  if (irr_model.size() >= 3) out.irregular_rho = eval::spearman(irr_model, irr_human);
  return out;
}

}  // namespace wug::agg
