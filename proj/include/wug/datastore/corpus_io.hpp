#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wug/types.hpp"

namespace wug::data {

enum class FrequencyMode { kType, kToken, kLogToken };

const char* to_string(FrequencyMode m);
std::optional<FrequencyMode> parse_frequency_mode(std::string_view s);

struct CorpusOptions {
  FrequencyMode frequency_mode = FrequencyMode::kType;
};

// Tab-separated, one verb per line:
//   orthography  present-phonemes  past-phonemes  regular|irregular  [frequency]
// Phonemes are space-delimited. Blank lines and lines starting with '#' are
// skipped. In type mode duplicate (present, past) pairs keep their first line.
std::vector<VerbEntry> read_corpus(std::istream& in, const CorpusOptions& options = {},
                                   std::string_view source = "<stream>");
std::vector<VerbEntry> load_corpus(const std::filesystem::path& path,
                                   const CorpusOptions& options = {});
void write_corpus(std::ostream& out, std::span<const VerbEntry> entries);

// Number of times an entry appears in one epoch under `mode`:
// type -> 1, token -> frequency, log-token -> max(1, round(ln frequency)).
// Entries without a frequency count once.
std::size_t multiplicity(const VerbEntry& entry, FrequencyMode mode);
std::vector<VerbEntry> epoch_stream(std::span<const VerbEntry> entries, FrequencyMode mode);

// Tab-separated, one nonce item per line:
//   id  present  category  (role[:orthography]  phonemes  production  rating)x{2,3}  other
// role is reg, irr1 or irr2; rating may be empty or NA.
std::vector<NonceItem> read_nonce(std::istream& in, std::string_view source = "<stream>");
std::vector<NonceItem> load_nonce(const std::filesystem::path& path);
void write_nonce(std::ostream& out, std::span<const NonceItem> items);

}  // namespace wug::data
