#include "wug/phonology.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "wug/errors.hpp"

namespace wug {

const char* to_string(SuffixClass c) {
  switch (c) {
    case SuffixClass::kCoronalStop: return "coronal-stop";
    case SuffixClass::kVoiced: return "voiced";
    case SuffixClass::kVoiceless: return "voiceless";
    case SuffixClass::kUnclassified: return "unclassified";
  }
  return "?";
}

std::optional<SuffixClass> parse_suffix_class(std::string_view s) {
  for (SuffixClass c : {SuffixClass::kCoronalStop, SuffixClass::kVoiced, SuffixClass::kVoiceless,
                        SuffixClass::kUnclassified}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

std::string strip_stress(std::string_view token) {
  std::string out;
  for (std::size_t i = 0; i < token.size(); ++i) {
    const char ch = token[i];
    if (ch == '"' || ch == '%' || ch == '\'') continue;
    // U+02C8 / U+02CC (IPA primary / secondary stress) are CB 88 / CB 8C in UTF-8.
    if (static_cast<unsigned char>(ch) == 0xCB && i + 1 < token.size() &&
        (static_cast<unsigned char>(token[i + 1]) == 0x88 ||
         static_cast<unsigned char>(token[i + 1]) == 0x8C)) {
      ++i;
      continue;
    }
    out += ch;
  }
  return out;
}

PhonemeClassTable PhonemeClassTable::english_default() {
  PhonemeClassTable t;
  for (const char* p : {"t", "d"}) t.set(p, SuffixClass::kCoronalStop);
  for (const char* p : {"p", "k", "f", "T", "s", "S", "tS", "h"}) t.set(p, SuffixClass::kVoiceless);
  for (const char* p : {"b", "g", "v", "D", "z", "Z", "dZ", "m", "n", "N", "l", "r", "w", "j"}) {
    t.set(p, SuffixClass::kVoiced);
  }
  for (const char* p : {"@", "E", "I", "{", "A", "2", "U", "O", "V", "3", "i", "u", "e", "o", "a",
                        "i:", "u:", "eI", "aI", "oU", "aU", "OI", "3r", "@r", "Ar", "Or"}) {
    t.set(p, SuffixClass::kVoiced);
  }
  return t;
}

PhonemeClassTable PhonemeClassTable::read(std::istream& in, std::string_view source) {
  PhonemeClassTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    const auto cls = tab == std::string::npos ? std::nullopt
                                              : parse_suffix_class(line.substr(tab + 1));
    if (!cls) {
      throw IngestionError(std::string(source) + ":" + std::to_string(line_no) +
                           ": expected 'phoneme<TAB>class'");
    }
    t.set(line.substr(0, tab), *cls);
  }
  return t;
}

PhonemeClassTable PhonemeClassTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open " + path.string());
  return read(in, path.string());
}

void PhonemeClassTable::write(std::ostream& out) const {
  for (const auto& [p, c] : classes_) out << p << '\t' << to_string(c) << '\n';
}

SuffixClass PhonemeClassTable::classify(std::string_view token) const {
  auto it = classes_.find(strip_stress(token));
  return it == classes_.end() ? SuffixClass::kUnclassified : it->second;
}

PhonemeSequence regular_past(const PhonemeSequence& stem, const PhonemeClassTable& table) {
  if (stem.empty()) throw ValidationError("regular_past: empty stem");
  PhonemeSequence out = stem;
  switch (table.classify(stem.back())) {
    case SuffixClass::kCoronalStop:
      out.push_back("@");
      out.push_back("d");
      break;
    case SuffixClass::kVoiced:
      out.push_back("d");
      break;
    case SuffixClass::kVoiceless:
      out.push_back("t");
      break;
    case SuffixClass::kUnclassified:
      throw ValidationError("regular_past: unclassified final phoneme '" + stem.back() + "'");
  }
  return out;
}

}  // namespace wug
