#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wug/datastore/corpus_io.hpp"
#include "wug/inflector/model.hpp"

namespace wug::harness {

struct ExperimentConfig {
  // Empty corpus path: use the synthetic generator with the settings below.
  std::filesystem::path corpus;
  std::filesystem::path nonce;
  std::filesystem::path phoneme_classes;  // empty: built-in table
  HyperParams hp;
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::size_t> checkpoint_epochs;  // hp.epochs is always added
  data::FrequencyMode frequency_mode = data::FrequencyMode::kType;
  std::filesystem::path out = "out";
  std::size_t workers = 1;
  std::size_t samples = 100;
  std::size_t accuracy_every = 10;  // training-accuracy log interval (0: final epoch only)
  std::uint64_t synthetic_seed = 7;
  std::size_t synthetic_regular = 200;
  std::size_t synthetic_irregular = 20;

  bool synthetic() const { return corpus.empty(); }
  // Sorted, deduplicated, capped at hp.epochs, always ending with hp.epochs.
  std::vector<std::size_t> saved_epochs() const;

  // Seeds non-empty and duplicate-free, hp valid, nonce present when a
  // corpus file is given. Throws ValidationError.
  void validate() const;

  // Every field as `key = value`, in a fixed order.
  std::string to_text() const;
  // FNV-1a of to_text(), 16 hex digits.
  std::string hash() const;

  // Unknown keys and malformed values raise ValidationError naming the key.
  static ExperimentConfig from_key_values(const std::map<std::string, std::string>& kv);
  static ExperimentConfig load(const std::filesystem::path& path);
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace wug::harness
