#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wug/inflector/decode.hpp"
#include "wug/inflector/model.hpp"
#include "wug/types.hpp"
#include "wug/wugeval/measures.hpp"

namespace wug::agg {

enum class Outcome { kRegular, kIrregular1, kIrregular2, kOther };

// Exact phoneme match against the item's suggested forms; truncated samples
// are always "other".
Outcome categorize(const NonceItem& item, const SampledForm& sample);

struct ProductionCounts {
  std::size_t regular = 0;
  std::size_t irregular1 = 0;
  std::size_t irregular2 = 0;
  std::size_t other = 0;

  std::size_t total() const { return regular + irregular1 + irregular2 + other; }
  void add(Outcome o);
  ProductionCounts& operator+=(const ProductionCounts& o);
};

struct ProductionRow {
  std::string id;
  NonceCategory category = NonceCategory::kIorNeither;
  bool has_irregular2 = false;
  ProductionCounts counts;
  eval::ItemShares shares;
};

struct ProductionTable {
  std::vector<ProductionRow> rows;       // in item order
  std::vector<std::uint64_t> seeds;      // sorted
  std::size_t samples_per_seed = 0;

  eval::ShareTable share_table() const;
};

// One participant: `samples` draws per item from the model, using the
// model's sampling stream.
std::vector<ProductionCounts> sample_productions(const Inflector& model, std::span<const NonceItem> items,
                                                 std::size_t samples);

// Combines per-seed counts (any seed order) into shares.
ProductionTable tabulate(std::span<const NonceItem> items, std::span<const std::uint64_t> seeds,
                         std::span<const std::vector<ProductionCounts>> per_seed, std::size_t samples);

struct ParticipantOptions {
  std::vector<std::uint64_t> seeds;
  std::size_t samples = 100;
  std::size_t workers = 1;
  // When set, a seed's model is loaded from checkpoint_for(seed) if that file
  // exists, and trained (then saved there) otherwise.
  std::function<std::filesystem::path(std::uint64_t)> checkpoint_for;
};

// Trains (or loads) one model per seed and samples its productions. Seeds
// run on up to `workers` threads; results do not depend on the worker count.
// A loaded checkpoint whose seed differs from the requested one raises
// ProvenanceError.
ProductionTable run_participants(std::span<const VerbEntry> corpus, std::span<const NonceItem> items,
                                 const Vocabulary& vocab, const HyperParams& hp,
                                 const ParticipantOptions& options);

struct HumanComparison {
  std::optional<double> regular_rho;
  std::optional<double> irregular_rho;  // irr1 and irr2 shares pooled
  std::vector<std::string> ids;
  std::vector<bool> model_prefers_irregular;  // some irregular share above the regular share
  std::vector<bool> human_prefers_irregular;

  std::size_t disagreements() const;
};

HumanComparison compare_to_humans(const ProductionTable& table, std::span<const NonceItem> items);

}  // namespace wug::agg
