#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wug/types.hpp"

namespace wug::rules {

// Left context: either exactly `literal` from the start of the word, or any
// material (the variable X) followed by `literal`.
struct LeftContext {
  bool variable = false;
  PhonemeSequence literal;

  auto operator<=>(const LeftContext&) const = default;
};

// A -> B / left ___ right, with `right` running to the end of the word.
struct Rule {
  PhonemeSequence from;  // A, may be empty
  PhonemeSequence to;    // B, may be empty
  LeftContext left;
  PhonemeSequence right;
  std::size_t scope = 1;
  std::size_t hits = 1;
  double confidence = 0.0;

  bool same_shape(const Rule& other) const {
    return from == other.from && to == other.to && left == other.left && right == other.right;
  }
  bool is_identity() const { return from == to; }
};

// Position where A starts if `present` matches the structural description.
std::optional<std::size_t> match(const Rule& rule, const PhonemeSequence& present);
// The rule's output for `present`, or nullopt when it does not match.
std::optional<PhonemeSequence> apply_rule(const Rule& rule, const PhonemeSequence& present);

// present = L A R, past = L B R with L the longest common prefix and R the
// longest common suffix of what remains. scope = hits = 1.
Rule word_rule(const PhonemeSequence& present, const PhonemeSequence& past);

// Same change required. Left becomes X + common suffix of the left literals
// (two identical literal contexts stay literal); right becomes the common
// prefix of the right contexts. Scope, hits and confidence are copied from
// r1 and must be recomputed against a corpus.
std::optional<Rule> generalize(const Rule& r1, const Rule& r2);

// Lower bound of a 75% normal-approximation interval around the smoothed
// reliability (hits + 0.5) / (scope + 1), floored at 0 and capped at
// hits / scope.
double confidence(std::size_t scope, std::size_t hits);
inline constexpr double kConfidenceZ = 1.1503493803760079;  // two-sided 75%

struct RuleGrammar {
  std::vector<Rule> rules;        // sorted by change, then contexts
  std::uint64_t fingerprint = 0;  // of the distinct (present, past) pairs

  void write_table(std::ostream& out) const;
};

// Fills scope, hits and confidence from the corpus. Scope counts distinct
// present forms matching the rule; hits those with an attested past equal to
// the rule's output.
void score_rule(Rule& rule, std::span<const VerbEntry> corpus);

// Word rules for every distinct (present, past) pair, then one pass of
// pairwise generalisation within each change group. Rules that match no
// training verb are dropped. Independent of corpus order.
RuleGrammar induce_grammar(std::span<const VerbEntry> corpus);

// Highest confidence among rules that match `present` and produce
// `candidate`; 0 when none does.
double score_form(const RuleGrammar& grammar, const PhonemeSequence& present,
                  const PhonemeSequence& candidate);

}  // namespace wug::rules
