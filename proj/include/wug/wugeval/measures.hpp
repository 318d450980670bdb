#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wug/inflector/decode.hpp"
#include "wug/types.hpp"

namespace wug::eval {

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> x);

// Undefined (nullopt) when either side has zero variance. Lengths must agree
// (DimensionError); pearson needs n >= 2 and spearman n >= 3 (ContractError).
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

enum class Measure { kSpearman, kPearson };
enum class Target { kProduction, kRating };
const char* to_string(Measure m);
const char* to_string(Target t);

std::optional<double> correlate(Measure m, std::span<const double> x, std::span<const double> y);

// Model score for a suggested form, keyed by (item id, role).
using FormKey = std::pair<std::string, FormRole>;
using FormScoreTable = std::map<FormKey, double>;

struct PairedSample {
  std::vector<FormKey> keys;
  std::vector<double> model;
  std::vector<double> human;
};

struct CorrelationReport {
  Measure measure = Measure::kSpearman;
  Target target = Target::kProduction;
  std::optional<double> regular;
  std::optional<double> irregular;  // irr1 and irr2 pooled
  PairedSample regular_pairs;
  PairedSample irregular_pairs;
};

// Throws ValidationError naming the item and role when a score or a human
// rating is missing.
CorrelationReport correlate_forms(std::span<const NonceItem> items, const FormScoreTable& scores,
                                  Measure measure, Target target);

// Ranked model outputs per item id, best first.
using RankedForms = std::vector<PhonemeSequence>;
using BeamTable = std::map<std::string, RankedForms>;

RankedForms ranked_forms(const BeamResult& beam);

struct Cr5Report {
  std::vector<std::string> ids;
  std::vector<bool> complete;  // every suggested form is in the top five
  double value = 0.0;
};

// Top five distinct outputs per item; membership by exact phoneme match.
// Throws ContractError when an item has no beam.
Cr5Report cr_at_5(std::span<const NonceItem> items, const BeamTable& beams);

struct SecondPlaceEntry {
  std::string item;
  PhonemeSequence form;
  std::size_t count = 0;  // seeds ranking this form second
};

struct SecondPlaceReport {
  std::size_t seeds = 0;
  std::vector<SecondPlaceEntry> entries;  // sorted by item, then form

  std::size_t total() const;
  // count -> number of (item, form) entries with that count
  std::map<std::size_t, std::size_t> histogram() const;
};

// Needs at least two seeds. Items whose beam has fewer than two outputs
// contribute nothing.
SecondPlaceReport second_place_agreement(std::span<const BeamTable> per_seed,
                                         std::span<const NonceItem> items);

struct ItemShares {
  double regular = 0.0;
  double irregular1 = 0.0;
  double irregular2 = 0.0;
  double other = 0.0;
};
using ShareTable = std::map<std::string, ItemShares>;

ItemShares human_shares(const NonceItem& item);

struct CategoryMean {
  NonceCategory category = NonceCategory::kIorNeither;
  std::size_t items = 0;
  double human_regular = 0.0;
  double human_irregular = 0.0;  // irr1 + irr2
  double model_regular = 0.0;
  double model_irregular = 0.0;
};

struct CategoryMeans {
  std::vector<CategoryMean> rows;  // categories without items are left out
  std::vector<std::string> warnings;
};

// Throws ContractError when an item has no model shares.
CategoryMeans category_means(std::span<const NonceItem> items, const ShareTable& model);

}  // namespace wug::eval
