#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wug {

// Ordered phoneme tokens of one word form. Tokens are opaque strings; stress
// marks stay attached to their vowel, so "oU and oU are different tokens.
using PhonemeSequence = std::vector<std::string>;

// Splits on ASCII whitespace.
PhonemeSequence parse_phonemes(std::string_view text);
std::string join_phonemes(const PhonemeSequence& seq, std::string_view sep = " ");

enum class VerbClass { kRegular, kIrregular };

const char* to_string(VerbClass c);
std::optional<VerbClass> parse_verb_class(std::string_view s);

struct VerbEntry {
  std::string lemma;
  PhonemeSequence present;
  PhonemeSequence past;
  VerbClass verb_class = VerbClass::kRegular;
  std::optional<long> frequency;
};

enum class NonceCategory { kIorRegular, kIorBoth, kIorIrregular, kIorNeither, kBurntLike, kAnalogy };

inline constexpr NonceCategory kAllNonceCategories[] = {
    NonceCategory::kIorRegular, NonceCategory::kIorBoth,     NonceCategory::kIorIrregular,
    NonceCategory::kIorNeither, NonceCategory::kBurntLike,   NonceCategory::kAnalogy};

const char* to_string(NonceCategory c);
std::optional<NonceCategory> parse_nonce_category(std::string_view s);

enum class FormRole { kRegular, kIrregular1, kIrregular2 };

const char* to_string(FormRole r);
std::optional<FormRole> parse_form_role(std::string_view s);

struct SuggestedForm {
  FormRole role = FormRole::kRegular;
  std::string orthography;
  PhonemeSequence phonemes;
  double production = 0.0;       // human production probability
  std::optional<double> rating;  // human mean acceptability rating
};

struct NonceItem {
  std::string id;
  PhonemeSequence present;
  NonceCategory category = NonceCategory::kIorNeither;
  std::vector<SuggestedForm> forms;  // one regular, one or two irregulars
  double other = 0.0;                // human share of unlisted responses

  const SuggestedForm& regular() const;
  std::vector<const SuggestedForm*> irregulars() const;
  const SuggestedForm* find(FormRole role) const;
};

// Throws ValidationError (naming the item) unless the item has exactly one
// regular form, one or two irregulars, and probabilities summing to 1 +- 1e-6.
void validate(const NonceItem& item);

}  // namespace wug
