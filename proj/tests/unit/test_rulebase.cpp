#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "wug/errors.hpp"
#include "wug/numerics/rng.hpp"
#include "wug/rulebase/rules.hpp"

using namespace wug;
using namespace wug::rules;

namespace {

PhonemeSequence ph(const char* s) { return parse_phonemes(s); }

VerbEntry verb(const char* present, const char* past, VerbClass c = VerbClass::kRegular) {
  return {present, ph(present), ph(past), c, std::nullopt};
}

const Rule* find_rule(const RuleGrammar& g, const char* from, const char* to, bool variable, const char* left,
                      const char* right) {
  for (const auto& r : g.rules)
    if (r.from == ph(from) && r.to == ph(to) && r.left.variable == variable && r.left.literal == ph(left) &&
        r.right == ph(right))
      return &r;
  return nullptr;
}

bool same_rules(const RuleGrammar& a, const RuleGrammar& b) {
  if (a.rules.size() != b.rules.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    const auto &x = a.rules[i], &y = b.rules[i];
    if (!x.same_shape(y) || x.scope != y.scope || x.hits != y.hits || x.confidence != y.confidence) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("word rules: want, hit, read") {
  const Rule want = word_rule(ph("w \"A n t"), ph("w \"A n t @ d"));
  CHECK(want.from.empty());
  CHECK(want.to == ph("@ d"));
  CHECK_FALSE(want.left.variable);
  CHECK(want.left.literal == ph("w \"A n t"));
  CHECK(want.right.empty());
  CHECK(want.scope == 1);
  CHECK(want.hits == 1);

  const Rule hit = word_rule(ph("h I t"), ph("h I t"));
  CHECK(hit.is_identity());
  CHECK(hit.from.empty());
  CHECK(hit.to.empty());

  const Rule read = word_rule(ph("r \"i: d"), ph("r \"E d"));
  CHECK(read.from == ph("\"i:"));
  CHECK(read.to == ph("\"E"));
  CHECK(read.left.literal == ph("r"));
  CHECK(read.right == ph("d"));

  CHECK_THROWS_AS(word_rule({}, ph("a")), ContractError);
}

TEST_CASE("match and apply") {
  const Rule read = word_rule(ph("r i: d"), ph("r E d"));
  CHECK(apply_rule(read, ph("r i: d")) == ph("r E d"));
  CHECK_FALSE(apply_rule(read, ph("l i: d")));
  const Rule gen = *generalize(read, word_rule(ph("b r i: d"), ph("b r E d")));
  CHECK(gen.left.variable);
  CHECK(gen.left.literal == ph("r"));
  CHECK(match(gen, ph("s p r i: d")) == 3u);
  CHECK(apply_rule(gen, ph("s p r i: d")) == ph("s p r E d"));
  CHECK_FALSE(apply_rule(gen, ph("s p r i: d z")));  // right context is word-final
}

TEST_CASE("generalize: want/start, want/need, read/lead, breed/read, idempotence, incompatibility") {
  const Rule want = word_rule(ph("w A n t"), ph("w A n t @ d"));
  const Rule start = word_rule(ph("s t A r t"), ph("s t A r t @ d"));
  const Rule need = word_rule(ph("n i: d"), ph("n i: d @ d"));

  const Rule ws = *generalize(want, start);
  CHECK(ws.left.variable);
  CHECK(ws.left.literal == ph("t"));
  const Rule wn = *generalize(want, need);
  CHECK(wn.left.variable);
  CHECK(wn.left.literal.empty());

  const Rule read = word_rule(ph("r i: d"), ph("r E d"));
  const Rule lead = word_rule(ph("l i: d"), ph("l E d"));
  const Rule breed = word_rule(ph("b r i: d"), ph("b r E d"));
  const Rule rl = *generalize(read, lead);
  CHECK(rl.left.variable);
  CHECK(rl.left.literal.empty());
  CHECK(rl.right == ph("d"));
  const Rule br = *generalize(breed, read);
  CHECK(br.left.literal == ph("r"));
  CHECK(br.right == ph("d"));

  const Rule same = *generalize(want, want);
  CHECK(same.same_shape(want));

  CHECK_FALSE(generalize(want, read));
  CHECK(generalize(ws, ws)->same_shape(ws));
}

TEST_CASE("confidence: hand values, floor, cap") {
  CHECK(kConfidenceZ == doctest::Approx(oracle::two_sided_z(0.75)).epsilon(1e-12));
  // s = h = 3: p* = 3.5/4, minus z sqrt(p*(1-p*)/3)
  const double p = 3.5 / 4;
  CHECK(confidence(3, 3) == doctest::Approx(p - 1.1503493803760079 * std::sqrt(p * (1 - p) / 3)).epsilon(1e-14));
  CHECK(confidence(3, 3) == doctest::Approx(0.6554).epsilon(1e-4));
  CHECK(confidence(3, 3) < 1.0);
  CHECK(confidence(5, 0) == 0.0);
  for (std::size_t s = 1; s <= 30; ++s)
    for (std::size_t h = 0; h <= s; ++h) {
      const double c = confidence(s, h);
      CHECK(c >= 0.0);
      CHECK(c <= static_cast<double>(h) / static_cast<double>(s));
      CHECK(c == doctest::Approx(oracle::rule_confidence(s, h)).epsilon(1e-12));
    }
}

TEST_CASE("three t-final regulars: one general rule with scope = hits = 3") {
  const std::vector<VerbEntry> c = {verb("w A n t", "w A n t @ d"), verb("s t A r t", "s t A r t @ d"),
                                    verb("h I n t", "h I n t @ d")};
  const RuleGrammar g = induce_grammar(c);
  const Rule* r = find_rule(g, "", "@ d", true, "t", "");
  REQUIRE(r);
  CHECK(r->scope == 3);
  CHECK(r->hits == 3);
  CHECK(r->confidence == doctest::Approx(0.6554).epsilon(1e-4));
  CHECK(r->confidence < 1.0);
  const Rule* nt = find_rule(g, "", "@ d", true, "n t", "");
  REQUIRE(nt);
  CHECK(nt->scope == 2);
}

TEST_CASE("single verb: exactly one rule") {
  const std::vector<VerbEntry> c = {verb("w A n t", "w A n t @ d")};
  const RuleGrammar g = induce_grammar(c);
  REQUIRE(g.rules.size() == 1);
  CHECK(g.rules[0].scope == 1);
  CHECK(g.rules[0].hits == 1);
}

TEST_CASE("spring doublets: two changes sharing scope") {
  const std::vector<VerbEntry> c = {verb("s p r I N", "s p r { N", VerbClass::kIrregular),
                                    verb("s p r I N", "s p r V N", VerbClass::kIrregular)};
  const RuleGrammar g = induce_grammar(c);
  const Rule* a = find_rule(g, "I", "{", false, "s p r", "N");
  const Rule* b = find_rule(g, "I", "V", false, "s p r", "N");
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->scope == b->scope);
  CHECK(a->scope == 1);
  CHECK(a->hits == 1);
  CHECK(b->hits == 1);
}

TEST_CASE("hits replay attested pasts") {
  const std::vector<VerbEntry> c = {verb("r i: d", "r E d", VerbClass::kIrregular),
                                    verb("l i: d", "l E d", VerbClass::kIrregular), verb("n i: d", "n i: d @ d"),
                                    verb("w A n t", "w A n t @ d"), verb("h I t", "h I t", VerbClass::kIrregular)};
  const RuleGrammar g = induce_grammar(c);
  for (const auto& r : g.rules) {
    std::size_t scope = 0, hits = 0;
    for (const auto& e : c) {
      const auto out = apply_rule(r, e.present);
      if (!out) continue;
      ++scope;
      hits += *out == e.past;
    }
    CHECK(r.scope == scope);
    CHECK(r.hits == hits);
    CHECK(r.scope >= 1);
  }
}

TEST_CASE("induction is order independent") {
  std::vector<VerbEntry> c = {verb("w A n t", "w A n t @ d"), verb("n i: d", "n i: d @ d"),
                              verb("h V g", "h V g d"),       verb("w O k", "w O k t"),
                              verb("r i: d", "r E d"),        verb("l i: d", "l E d"),
                              verb("s I N", "s { N"),         verb("r I N", "r { N"),
                              verb("h I t", "h I t"),         verb("k I s", "k I s t")};
  const RuleGrammar base = induce_grammar(c);
  num::Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    rng.shuffle(std::span<VerbEntry>(c));
    const RuleGrammar g = induce_grammar(c);
    CHECK(same_rules(g, base));
    CHECK(g.fingerprint == base.fingerprint);
  }
}

TEST_CASE("monotonicity: an obeying verb never lowers a rule's confidence") {
  const std::vector<VerbEntry> c = {verb("w A n t", "w A n t @ d"), verb("s t A r t", "s t A r t @ d"),
                                    verb("h I t", "h I t"), verb("n i: d", "n i: d @ d")};
  Rule r = *generalize(word_rule(ph("w A n t"), ph("w A n t @ d")), word_rule(ph("s t A r t"), ph("s t A r t @ d")));
  score_rule(r, c);
  const double before = r.confidence;
  std::vector<VerbEntry> more = c;
  more.push_back(verb("f I t", "f I t @ d"));
  score_rule(r, more);
  CHECK(r.scope == 4);
  CHECK(r.hits == 3);
  CHECK(r.confidence >= before);
  for (std::size_t s = 1; s <= 40; ++s)
    for (std::size_t h = 0; h <= s; ++h) CHECK(confidence(s + 1, h + 1) >= confidence(s, h));
}

TEST_CASE("score_form: top rule, unproducible, island of reliability") {
  const std::vector<VerbEntry> c = {
      verb("s I N", "s { N"), verb("r I N", "r { N"), verb("s t I N", "s t { N"), verb("k l I N", "k l V N"),
      verb("w A n t", "w A n t @ d"), verb("h V g", "h V g d"), verb("k O l", "k O l d"), verb("b r I N", "b r I N d")};
  const RuleGrammar g = induce_grammar(c);
  const PhonemeSequence spling = ph("s p l I N");
  const double irregular = score_form(g, spling, ph("s p l { N"));
  const double regular = score_form(g, spling, ph("s p l I N d"));
  CHECK(irregular > 0.0);
  CHECK(regular > 0.0);
  CHECK(score_form(g, spling, ph("z z z")) == 0.0);

  // the best matching rule wins
  double best = 0.0;
  for (const auto& r : g.rules)
    if (apply_rule(r, spling) == ph("s p l { N")) best = std::max(best, r.confidence);
  CHECK(irregular == best);
  for (const auto& r : g.rules) {
    CHECK(r.confidence >= 0.0);
    CHECK(r.confidence <= 1.0);
  }
}

TEST_CASE("grammar table export") {
  const std::vector<VerbEntry> c = {verb("w A n t", "w A n t @ d"), verb("s t A r t", "s t A r t @ d")};
  std::ostringstream out;
  induce_grammar(c).write_table(out);
  const std::string t = out.str();
  CHECK(t.find("0 -> @ d") != std::string::npos);
  CHECK(t.find("X t") != std::string::npos);
  CHECK(std::count(t.begin(), t.end(), '\n') >= 3);
}
