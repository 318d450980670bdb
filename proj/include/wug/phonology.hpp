#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "wug/types.hpp"

namespace wug {

// Which regular past allomorph a stem-final phoneme selects.
enum class SuffixClass { kCoronalStop, kVoiced, kVoiceless, kUnclassified };

const char* to_string(SuffixClass c);
std::optional<SuffixClass> parse_suffix_class(std::string_view s);

// Removes stress/length-independent prosodic marks (" % ' and the IPA stress
// characters) so that "oU and oU classify alike.
std::string strip_stress(std::string_view token);

// Phoneme -> suffix class lookup. Stored as "phoneme<TAB>class" lines so it
// can be edited for other inventories.
class PhonemeClassTable {
 public:
  PhonemeClassTable() = default;

  // ASCII-IPA inventory used throughout the bundled data.
  static PhonemeClassTable english_default();
  static PhonemeClassTable read(std::istream& in, std::string_view source = "<stream>");
  static PhonemeClassTable load(const std::filesystem::path& path);
  void write(std::ostream& out) const;

  void set(std::string phoneme, SuffixClass c) { classes_[std::move(phoneme)] = c; }
  SuffixClass classify(std::string_view token) const;
  std::size_t size() const { return classes_.size(); }

 private:
  std::map<std::string, SuffixClass, std::less<>> classes_;
};

// Regular past: stem + "@ d" after coronal stops, "d" after other voiced
// segments, "t" after voiceless ones. Throws ValidationError for an
// unclassified final phoneme.
PhonemeSequence regular_past(const PhonemeSequence& stem, const PhonemeClassTable& table);

}  // namespace wug
