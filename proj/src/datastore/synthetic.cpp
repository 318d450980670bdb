#include "wug/datastore/synthetic.hpp"

#include <algorithm>
#include <set>

#include "wug/errors.hpp"
#include "wug/numerics/rng.hpp"

namespace wug::data {

namespace {

constexpr std::size_t kMaxAttempts = 20000;

struct Word {
  PhonemeSequence onset;
  std::string vowel;
  PhonemeSequence coda;

  PhonemeSequence rime() const {
    PhonemeSequence r{vowel};
    r.insert(r.end(), coda.begin(), coda.end());
    return r;
  }
  PhonemeSequence phonemes() const {
    PhonemeSequence p = onset;
    p.push_back(vowel);
    p.insert(p.end(), coda.begin(), coda.end());
    return p;
  }
};

PhonemeSequence concat(const PhonemeSequence& a, const PhonemeSequence& b) {
  PhonemeSequence out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string spell(const PhonemeSequence& seq) {
  std::string out;
  for (const auto& t : seq) out += strip_stress(t);
  return out;
}

template <typename T>
const T& pick(const std::vector<T>& v, num::Rng& rng) {
  return v[static_cast<std::size_t>(rng.below(v.size()))];
}

SuffixClass final_class(const Word& w, const PhonemeClassTable& table) {
  return table.classify(w.coda.empty() ? w.vowel : w.coda.back());
}

class Generator {
 public:
  Generator(const SyntheticSpec& spec, std::uint64_t seed)
      : spec_(spec), rng_(num::Rng::derive(seed, num::StreamPurpose::kSynthetic)) {
    if (spec_.onsets.empty() || spec_.vowels.empty() || spec_.codas.empty()) {
      throw ValidationError("synthetic spec: empty phoneme inventory");
    }
    for (const auto& t : spec_.irregular_families) {
      if (t.present_rime.empty() || t.past_rime.empty()) {
        throw ValidationError("synthetic spec: irregular template with empty rime");
      }
      template_rimes_.insert(t.present_rime);
    }
  }

  SyntheticData run() {
    SyntheticData out;
    add_regulars(SuffixClass::kCoronalStop, spec_.regular_coronal, out.corpus);
    add_regulars(SuffixClass::kVoiced, spec_.regular_voiced, out.corpus);
    add_regulars(SuffixClass::kVoiceless, spec_.regular_voiceless, out.corpus);
    add_irregulars(out.corpus);
    for (NonceCategory c : kAllNonceCategories) {
      auto it = spec_.nonce_counts.find(c);
      const std::size_t n = it == spec_.nonce_counts.end() ? 0 : it->second;
      for (std::size_t i = 0; i < n; ++i) out.nonce.push_back(make_nonce(c, i));
    }
    return out;
  }

 private:
  bool claim(const PhonemeSequence& word) { return used_.insert(word).second; }

  [[noreturn]] void exhausted(const std::string& what) {
    throw ValidationError("synthetic spec: inventory too small for requested " + what);
  }

  void add_regulars(SuffixClass cls, std::size_t count, std::vector<VerbEntry>& corpus) {
    std::vector<PhonemeSequence> codas;
    for (const auto& c : spec_.codas) {
      // Class of a coda is decided by its last phoneme; the empty coda ends in a vowel.
      if (c.empty() ? cls == SuffixClass::kVoiced : spec_.classes.classify(c.back()) == cls) {
        codas.push_back(c);
      }
    }
    if (count > 0 && codas.empty()) exhausted(std::string(to_string(cls)) + " regulars");
    for (std::size_t made = 0; made < count;) {
      std::size_t attempts = 0;
      while (true) {
        if (++attempts > kMaxAttempts) exhausted(std::string(to_string(cls)) + " regulars");
        Word w{pick(spec_.onsets, rng_), pick(spec_.vowels, rng_), pick(codas, rng_)};
        if (template_rimes_.count(w.rime())) continue;
        const PhonemeSequence present = w.phonemes();
        if (!claim(present)) continue;
        corpus.push_back({spell(present), present, regular_past(present, spec_.classes),
                          VerbClass::kRegular, std::nullopt});
        ++regular_rime_counts_[w.rime()];
        corpus_rimes_.insert(w.rime());
        break;
      }
      ++made;
    }
  }

  void add_irregulars(std::vector<VerbEntry>& corpus) {
    for (const auto& t : spec_.irregular_families) {
      corpus_rimes_.insert(t.present_rime);
      for (std::size_t m = 0; m < t.members; ++m) {
        std::size_t attempts = 0;
        while (true) {
          if (++attempts > kMaxAttempts) exhausted("irregular family members");
          const PhonemeSequence& onset = pick(spec_.onsets, rng_);
          if (onset.empty()) continue;
          const PhonemeSequence present = concat(onset, t.present_rime);
          if (!claim(present)) continue;
          corpus.push_back({spell(present), present, concat(onset, t.past_rime),
                            VerbClass::kIrregular, std::nullopt});
          break;
        }
      }
    }
  }

  std::string alternative_vowel(const std::string& a, const std::string& b = "") const {
    for (const char* v : {"\"2", "\"{", "\"oU", "\"E", "\"U"}) {
      if (v != a && v != b) return v;
    }
    return a;
  }

  const IrregularTemplate& family(std::size_t i) const {
    if (spec_.irregular_families.empty()) {
      throw ValidationError("synthetic spec: nonce categories need irregular families");
    }
    return spec_.irregular_families[i % spec_.irregular_families.size()];
  }

  PhonemeSequence fresh_onset_word(const PhonemeSequence& rime) {
    for (std::size_t attempts = 0; attempts < kMaxAttempts; ++attempts) {
      const PhonemeSequence word = concat(pick(spec_.onsets, rng_), rime);
      if (claim(word)) return word;
    }
    exhausted("nonce items");
  }

  NonceItem make_nonce(NonceCategory category, std::size_t index) {
    NonceItem item;
    item.category = category;
    PhonemeSequence irr1, irr2;
    switch (category) {
      case NonceCategory::kIorRegular: {
        std::vector<PhonemeSequence> rimes;
        for (const auto& [r, n] : regular_rime_counts_)
          if (n >= 2) rimes.push_back(r);
        if (rimes.empty())
          for (const auto& [r, n] : regular_rime_counts_) rimes.push_back(r);
        if (rimes.empty()) exhausted("IOR-regular nonce items (no regulars)");
        PhonemeSequence rime = pick(rimes, rng_);
        item.present = fresh_onset_word(rime);
        irr1 = item.present;
        irr1[irr1.size() - rime.size()] = alternative_vowel(rime.front());
        break;
      }
      case NonceCategory::kIorBoth: {
        const auto& t = family(index);
        const SuffixClass cls = spec_.classes.classify(t.present_rime.back());
        std::vector<PhonemeSequence> codas;
        const PhonemeSequence t_coda(t.present_rime.begin() + 1, t.present_rime.end());
        for (const auto& c : spec_.codas)
          if (!c.empty() && c != t_coda && spec_.classes.classify(c.back()) == cls) codas.push_back(c);
        if (codas.empty()) exhausted("IOR-both nonce items");
        const PhonemeSequence coda = pick(codas, rng_);
        item.present = fresh_onset_word(concat({t.present_rime.front()}, coda));
        irr1 = item.present;
        irr1[irr1.size() - coda.size() - 1] = t.past_rime.front();
        break;
      }
      case NonceCategory::kIorIrregular: {
        const auto& t = family(index);
        item.present = fresh_onset_word(t.present_rime);
        const PhonemeSequence onset(item.present.begin(),
                                    item.present.end() - static_cast<std::ptrdiff_t>(t.present_rime.size()));
        irr1 = concat(onset, t.past_rime);
        irr2 = item.present;
        irr2[onset.size()] = alternative_vowel(t.present_rime.front(), t.past_rime.front());
        break;
      }
      case NonceCategory::kIorNeither: {
        std::size_t attempts = 0;
        Word w;
        do {
          if (++attempts > kMaxAttempts) exhausted("IOR-neither nonce items");
          w = Word{pick(spec_.onsets, rng_), pick(spec_.vowels, rng_), pick(spec_.codas, rng_)};
        } while (corpus_rimes_.count(w.rime()) || template_rimes_.count(w.rime()) ||
                 final_class(w, spec_.classes) == SuffixClass::kUnclassified ||
                 !claim(w.phonemes()));
        item.present = w.phonemes();
        irr1 = item.present;
        irr1[w.onset.size()] = alternative_vowel(w.vowel);
        break;
      }
      case NonceCategory::kBurntLike: {
        std::vector<PhonemeSequence> codas;
        for (const auto& c : spec_.codas)
          if (!c.empty() && (c.back() == "n" || c.back() == "l")) codas.push_back(c);
        if (codas.empty()) exhausted("burnt-like nonce items (no n/l codas)");
        std::size_t attempts = 0;
        while (true) {
          if (++attempts > kMaxAttempts) exhausted("burnt-like nonce items");
          Word w{pick(spec_.onsets, rng_), pick(spec_.vowels, rng_), pick(codas, rng_)};
          if (template_rimes_.count(w.rime()) || !claim(w.phonemes())) continue;
          item.present = w.phonemes();
          break;
        }
        irr1 = concat(item.present, {"t"});
        break;
      }
      case NonceCategory::kAnalogy: {
        const auto& t = family(index);
        // s-cluster onsets from the inventory on a family rime: spling next to sing/ring.
        std::vector<PhonemeSequence> onsets;
        for (const auto& o : spec_.onsets)
          if (o.size() >= 2 && o.front() == "s") onsets.push_back(o);
        if (onsets.empty()) exhausted("analogy nonce items (no s-cluster onsets)");
        std::size_t attempts = 0;
        while (true) {
          if (++attempts > kMaxAttempts) exhausted("analogy nonce items");
          const PhonemeSequence& onset = pick(onsets, rng_);
          item.present = concat(onset, t.present_rime);
          if (!claim(item.present)) continue;
          irr1 = concat(onset, t.past_rime);
          break;
        }
        break;
      }
    }
    item.id = spell(item.present);
    if (!ids_.insert(item.id).second) item.id += "_" + std::to_string(ids_.size());

    const double base = category_irregular_base(category);
    const double p1 = std::clamp(base + 0.05 * rng_.normal(), 0.0, 0.6);
    const double p2 = irr2.empty() ? 0.0 : std::clamp(0.3 * base + 0.03 * rng_.normal(), 0.0, 0.2);
    item.other = 0.06 * rng_.uniform();
    const double reg = 1.0 - p1 - p2 - item.other;
    auto rating = [&](double p) { return std::clamp(1.0 + 6.0 * p + 0.5 * rng_.normal(), 1.0, 7.0); };

    const PhonemeSequence reg_form = regular_past(item.present, spec_.classes);
    item.forms.push_back({FormRole::kRegular, spell(reg_form), reg_form, reg, rating(reg)});
    item.forms.push_back({FormRole::kIrregular1, spell(irr1), irr1, p1, rating(p1)});
    if (!irr2.empty()) item.forms.push_back({FormRole::kIrregular2, spell(irr2), irr2, p2, rating(p2)});
    validate(item);
    return item;
  }

  const SyntheticSpec& spec_;
  num::Rng rng_;
  std::set<PhonemeSequence> used_;
  std::set<PhonemeSequence> template_rimes_;
  std::set<PhonemeSequence> corpus_rimes_;
  std::map<PhonemeSequence, std::size_t> regular_rime_counts_;
  std::set<std::string> ids_;
};

std::vector<PhonemeSequence> parse_all(std::initializer_list<const char*> items) {
  std::vector<PhonemeSequence> out;
  for (const char* s : items) out.push_back(parse_phonemes(s));
  return out;
}

}  // namespace

double category_irregular_base(NonceCategory c) {
  switch (c) {
    case NonceCategory::kIorIrregular: return 0.35;
    case NonceCategory::kBurntLike: return 0.25;
    case NonceCategory::kIorBoth: return 0.20;
    case NonceCategory::kAnalogy: return 0.15;
    case NonceCategory::kIorNeither: return 0.10;
    case NonceCategory::kIorRegular: return 0.05;
  }
  return 0.0;
}

std::size_t SyntheticSpec::irregular_total() const {
  std::size_t n = 0;
  for (const auto& t : irregular_families) n += t.members;
  return n;
}

SyntheticSpec SyntheticSpec::with_counts(std::size_t regular, std::size_t irregular) {
  SyntheticSpec s;
  s.onsets = parse_all({"",      "b",     "d",     "g",     "p",     "t",     "k",     "f",
                        "s",     "S",     "m",     "n",     "l",     "r",     "w",     "h",
                        "tS",    "dZ",    "v",     "z",     "b r",   "b l",   "d r",   "g r",
                        "g l",   "p r",   "p l",   "t r",   "k r",   "k l",   "f r",   "f l",
                        "s t",   "s p",   "s k",   "s l",   "s m",   "s n",   "s w",   "s t r",
                        "s p r", "s p l", "s k r", "T r",   "S r",   "t w",   "k w",   "s k w"});
  s.vowels = {"\"I", "\"E", "\"{", "\"A", "\"2", "\"U", "\"i:", "\"u:", "\"eI", "\"aI", "\"oU", "\"aU"};
  s.codas = parse_all({"t",   "d",   "n t", "n d", "l t", "l d", "s t", "f t", "k t", "r t", "r d",
                       "",    "b",   "g",   "v",   "z",   "m",   "n",   "l",   "r",   "N",   "dZ",
                       "r n", "r m", "l m", "l v", "n dZ", "r b", "p",  "k",   "f",   "s",   "S",
                       "tS",  "T",   "m p", "n tS", "s k", "l p", "r k", "l f", "r S", "k s"});
  s.regular_coronal = regular / 4;
  s.regular_voiced = regular * 2 / 5;
  s.regular_voiceless = regular - s.regular_coronal - s.regular_voiced;

  const std::vector<std::pair<const char*, const char*>> families = {
      {"\"I N", "\"{ N"},   {"\"i: d", "\"E d"},   {"\"aI d", "\"oU d"}, {"\"I k", "\"2 k"},
      {"\"I n", "\"{ n"},   {"\"i: l", "\"E l t"}, {"\"aI t", "\"I t"},  {"\"eI k", "\"U k"},
      {"\"i: p", "\"E p t"}, {"\"oU", "\"u:"}};
  for (std::size_t f = 0; f < families.size(); ++f) {
    const std::size_t members = irregular / families.size() + (f < irregular % families.size() ? 1 : 0);
    if (members == 0) continue;
    s.irregular_families.push_back(
        {parse_phonemes(families[f].first), parse_phonemes(families[f].second), members});
  }
  for (NonceCategory c : kAllNonceCategories) s.nonce_counts[c] = 3;
  return s;
}

SyntheticData make_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed) {
  return Generator(spec, seed).run();
}

}  // namespace wug::data
