#include "wug/types.hpp"

#include <cctype>
#include <cmath>

#include "wug/errors.hpp"

namespace wug {

PhonemeSequence parse_phonemes(std::string_view text) {
  PhonemeSequence out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join_phonemes(const PhonemeSequence& seq, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += sep;
    out += seq[i];
  }
  return out;
}

const char* to_string(VerbClass c) {
  return c == VerbClass::kRegular ? "regular" : "irregular";
}

std::optional<VerbClass> parse_verb_class(std::string_view s) {
  if (s == "regular" || s == "reg") return VerbClass::kRegular;
  if (s == "irregular" || s == "irr") return VerbClass::kIrregular;
  return std::nullopt;
}

const char* to_string(NonceCategory c) {
  switch (c) {
    case NonceCategory::kIorRegular: return "IOR-regular";
    case NonceCategory::kIorBoth: return "IOR-both";
    case NonceCategory::kIorIrregular: return "IOR-irregular";
    case NonceCategory::kIorNeither: return "IOR-neither";
    case NonceCategory::kBurntLike: return "burnt-like";
    case NonceCategory::kAnalogy: return "analogy";
  }
  return "?";
}

std::optional<NonceCategory> parse_nonce_category(std::string_view s) {
  for (NonceCategory c : kAllNonceCategories) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

const char* to_string(FormRole r) {
  switch (r) {
    case FormRole::kRegular: return "reg";
    case FormRole::kIrregular1: return "irr1";
    case FormRole::kIrregular2: return "irr2";
  }
  return "?";
}

std::optional<FormRole> parse_form_role(std::string_view s) {
  if (s == "reg") return FormRole::kRegular;
  if (s == "irr1") return FormRole::kIrregular1;
  if (s == "irr2") return FormRole::kIrregular2;
  return std::nullopt;
}

const SuggestedForm& NonceItem::regular() const {
  const SuggestedForm* f = find(FormRole::kRegular);
  if (!f) throw ValidationError("nonce item '" + id + "' has no regular form");
  return *f;
}

std::vector<const SuggestedForm*> NonceItem::irregulars() const {
  std::vector<const SuggestedForm*> out;
  for (const auto& f : forms)
    if (f.role != FormRole::kRegular) out.push_back(&f);
  return out;
}

const SuggestedForm* NonceItem::find(FormRole role) const {
  for (const auto& f : forms)
    if (f.role == role) return &f;
  return nullptr;
}

void validate(const NonceItem& item) {
  auto fail = [&](const std::string& why) {
    throw ValidationError("nonce item '" + item.id + "': " + why);
  };
  if (item.present.empty()) fail("empty present form");
  int regulars = 0, irr1 = 0, irr2 = 0;
  double total = item.other;
  for (const auto& f : item.forms) {
    if (f.phonemes.empty()) fail("empty suggested form");
    if (f.production < 0.0 || f.production > 1.0) fail("production probability outside [0, 1]");
    regulars += f.role == FormRole::kRegular;
    irr1 += f.role == FormRole::kIrregular1;
    irr2 += f.role == FormRole::kIrregular2;
    total += f.production;
  }
  if (regulars != 1) fail("expected exactly one regular form, found " + std::to_string(regulars));
  if (irr1 != 1 || irr2 > 1) fail("expected one or two irregular forms (irr1 [+ irr2])");
  if (item.other < 0.0) fail("negative 'other' share");
  if (std::abs(total - 1.0) > 1e-6) {
    fail("production probabilities sum to " + std::to_string(total) + ", expected 1");
  }
}

}  // namespace wug
