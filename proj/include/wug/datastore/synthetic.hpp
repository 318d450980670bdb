#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wug/phonology.hpp"
#include "wug/types.hpp"

namespace wug::data {

// A vowel-change family such as sing/sang: every member is onset + present_rime
// with past onset + past_rime.
struct IrregularTemplate {
  PhonemeSequence present_rime;
  PhonemeSequence past_rime;
  std::size_t members = 5;
};

struct SyntheticSpec {
  std::vector<PhonemeSequence> onsets;       // may contain the empty onset
  std::vector<std::string> vowels;           // stressed vowel tokens
  std::vector<PhonemeSequence> codas;        // may contain the empty coda
  std::size_t regular_coronal = 50;          // stems ending in t/d  -> + @ d
  std::size_t regular_voiced = 80;           // other voiced endings -> + d
  std::size_t regular_voiceless = 70;        // voiceless endings    -> + t
  std::vector<IrregularTemplate> irregular_families;
  std::map<NonceCategory, std::size_t> nonce_counts;
  PhonemeClassTable classes = PhonemeClassTable::english_default();

  // Default inventory, 10 irregular families and 3 nonce items per category,
  // with `regular` split 25/40/35 across coronal/voiced/voiceless stems and
  // `irregular` spread evenly over the families.
  static SyntheticSpec with_counts(std::size_t regular, std::size_t irregular);
  std::size_t regular_total() const { return regular_coronal + regular_voiced + regular_voiceless; }
  std::size_t irregular_total() const;
};

struct SyntheticData {
  std::vector<VerbEntry> corpus;
  std::vector<NonceItem> nonce;
};

// Pure function of (spec, seed). Regular pasts follow the final-phoneme
// voicing rule; irregulars are template members whose rimes no regular stem
// uses. Nonce "human" production shares come from a noisy propensity per
// category:
//   irr1  = clamp(base + 0.05 z, 0, 0.6)      base: IOR-irregular .35, burnt-like .25,
//   irr2  = clamp(0.3 base + 0.03 z, 0, 0.2)        IOR-both .20, analogy .15,
//   other = 0.06 u                                  IOR-neither .10, IOR-regular .05
//   reg   = 1 - irr1 - irr2 - other
// with z standard normal and u uniform. Throws ValidationError when the
// inventory cannot supply enough distinct words.
SyntheticData make_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed);

// Irregular-propensity base used above.
double category_irregular_base(NonceCategory c);

}  // namespace wug::data
