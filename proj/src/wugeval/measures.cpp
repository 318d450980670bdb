#include "wug/wugeval/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "wug/errors.hpp"

namespace wug::eval {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y, std::size_t min_n,
                const char* what) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(what) + ": length mismatch " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
  }
  if (x.size() < min_n) {
    throw ContractError(std::string(what) + ": needs at least " + std::to_string(min_n) +
                        " pairs, got " + std::to_string(x.size()));
  }
}

std::string describe(const NonceItem& item, FormRole role) {
  return "item '" + item.id + "' form " + to_string(role);
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2, "pearson");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 3, "spearman");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

const char* to_string(Measure m) { return m == Measure::kSpearman ? "spearman" : "pearson"; }
const char* to_string(Target t) { return t == Target::kProduction ? "production" : "rating"; }

std::optional<double> correlate(Measure m, std::span<const double> x, std::span<const double> y) {
  return m == Measure::kSpearman ? spearman(x, y) : pearson(x, y);
}

CorrelationReport correlate_forms(std::span<const NonceItem> items, const FormScoreTable& scores,
                                  Measure measure, Target target) {
  CorrelationReport r;
  r.measure = measure;
  r.target = target;
  for (const auto& item : items) {
    for (const auto& f : item.forms) {
      const FormKey key{item.id, f.role};
      auto it = scores.find(key);
      if (it == scores.end()) throw ValidationError("no model score for " + describe(item, f.role));
      double human = f.production;
      if (target == Target::kRating) {
        if (!f.rating) throw ValidationError("no human rating for " + describe(item, f.role));
        human = *f.rating;
      }
      PairedSample& pool = f.role == FormRole::kRegular ? r.regular_pairs : r.irregular_pairs;
      pool.keys.push_back(key);
      pool.model.push_back(it->second);
      pool.human.push_back(human);
    }
  }
  auto run = [&](const PairedSample& s) -> std::optional<double> {
    if (s.model.size() < (measure == Measure::kSpearman ? 3u : 2u)) return std::nullopt;
    return correlate(measure, s.model, s.human);
  };
  r.regular = run(r.regular_pairs);
  r.irregular = run(r.irregular_pairs);
  return r;
}

RankedForms ranked_forms(const BeamResult& beam) {
  RankedForms out;
  for (const auto& h : beam.hypotheses) out.push_back(h.form);
  return out;
}

Cr5Report cr_at_5(std::span<const NonceItem> items, const BeamTable& beams) {
  Cr5Report r;
  std::size_t complete = 0;
  for (const auto& item : items) {
    auto it = beams.find(item.id);
    if (it == beams.end()) throw ContractError("cr_at_5: no beam for item '" + item.id + "'");
    std::vector<PhonemeSequence> top;
    for (const auto& form : it->second) {
      if (top.size() == 5) break;
      if (std::find(top.begin(), top.end(), form) == top.end()) top.push_back(form);
    }
    const bool ok = std::all_of(item.forms.begin(), item.forms.end(), [&](const SuggestedForm& f) {
      return std::find(top.begin(), top.end(), f.phonemes) != top.end();
    });
    r.ids.push_back(item.id);
    r.complete.push_back(ok);
    complete += ok;
  }
  r.value = items.empty() ? 0.0 : static_cast<double>(complete) / static_cast<double>(items.size());
  return r;
}

std::size_t SecondPlaceReport::total() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.count;
  return n;
}

std::map<std::size_t, std::size_t> SecondPlaceReport::histogram() const {
  std::map<std::size_t, std::size_t> h;
  for (const auto& e : entries) ++h[e.count];
  return h;
}

SecondPlaceReport second_place_agreement(std::span<const BeamTable> per_seed,
                                         std::span<const NonceItem> items) {
  if (per_seed.size() < 2) throw ContractError("second_place_agreement: needs at least 2 seeds");
  std::map<std::pair<std::string, PhonemeSequence>, std::size_t> counts;
  for (const auto& beams : per_seed) {
    for (const auto& item : items) {
      auto it = beams.find(item.id);
      if (it == beams.end()) {
        throw ContractError("second_place_agreement: no beam for item '" + item.id + "'");
      }
      // second distinct output
      const RankedForms& forms = it->second;
      for (std::size_t k = 1; k < forms.size(); ++k) {
        if (forms[k] != forms[0]) {
          ++counts[{item.id, forms[k]}];
          break;
        }
      }
    }
  }
  SecondPlaceReport r;
  r.seeds = per_seed.size();
  for (auto& [key, n] : counts) r.entries.push_back({key.first, key.second, n});
  return r;
}

ItemShares human_shares(const NonceItem& item) {
  ItemShares s;
  s.other = item.other;
  for (const auto& f : item.forms) {
    switch (f.role) {
      case FormRole::kRegular: s.regular = f.production; break;
      case FormRole::kIrregular1: s.irregular1 = f.production; break;
      case FormRole::kIrregular2: s.irregular2 = f.production; break;
    }
  }
  return s;
}

CategoryMeans category_means(std::span<const NonceItem> items, const ShareTable& model) {
  CategoryMeans out;
  for (NonceCategory c : kAllNonceCategories) {
    CategoryMean m;
    m.category = c;
    for (const auto& item : items) {
      if (item.category != c) continue;
      auto it = model.find(item.id);
      if (it == model.end()) throw ContractError("category_means: no model shares for item '" + item.id + "'");
      const ItemShares h = human_shares(item);
      ++m.items;
      m.human_regular += h.regular;
      m.human_irregular += h.irregular1 + h.irregular2;
      m.model_regular += it->second.regular;
      m.model_irregular += it->second.irregular1 + it->second.irregular2;
    }
    if (m.items == 0) {
      out.warnings.push_back(std::string("category ") + to_string(c) + " has no items");
      continue;
    }
    const double n = static_cast<double>(m.items);
    m.human_regular /= n;
    m.human_irregular /= n;
    m.model_regular /= n;
    m.model_irregular /= n;
    out.rows.push_back(m);
  }
  return out;
}

}  // namespace wug::eval
