#include "wug/rulebase/rules.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>

#include "wug/errors.hpp"

namespace wug::rules {

namespace {

bool ends_with(const PhonemeSequence& s, std::size_t end, const PhonemeSequence& suffix) {
  if (suffix.size() > end) return false;
  return std::equal(suffix.begin(), suffix.end(), s.begin() + static_cast<std::ptrdiff_t>(end - suffix.size()));
}

std::size_t common_prefix(const PhonemeSequence& a, const PhonemeSequence& b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

std::size_t common_suffix(const PhonemeSequence& a, const PhonemeSequence& b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[a.size() - 1 - n] == b[b.size() - 1 - n]) ++n;
  return n;
}

PhonemeSequence slice(const PhonemeSequence& s, std::size_t begin, std::size_t end) {
  return PhonemeSequence(s.begin() + static_cast<std::ptrdiff_t>(begin),
                         s.begin() + static_cast<std::ptrdiff_t>(end));
}

std::string show(const PhonemeSequence& s) { return s.empty() ? "0" : join_phonemes(s); }

auto shape_key(const Rule& r) { return std::tie(r.from, r.to, r.left, r.right); }

}  // namespace

std::optional<std::size_t> match(const Rule& rule, const PhonemeSequence& present) {
  const std::size_t tail = rule.from.size() + rule.right.size();
  const std::size_t need = tail + rule.left.literal.size();
  if (present.size() < need) return std::nullopt;
  if (!rule.left.variable && present.size() != need) return std::nullopt;
  if (!ends_with(present, present.size(), rule.right)) return std::nullopt;
  const std::size_t at = present.size() - tail;
  if (!ends_with(present, at + rule.from.size(), rule.from)) return std::nullopt;
  if (!ends_with(present, at, rule.left.literal)) return std::nullopt;
  return at;
}

std::optional<PhonemeSequence> apply_rule(const Rule& rule, const PhonemeSequence& present) {
  const auto at = match(rule, present);
  if (!at) return std::nullopt;
  PhonemeSequence out = slice(present, 0, *at);
  out.insert(out.end(), rule.to.begin(), rule.to.end());
  out.insert(out.end(), rule.right.begin(), rule.right.end());
  return out;
}

Rule word_rule(const PhonemeSequence& present, const PhonemeSequence& past) {
  if (present.empty() || past.empty()) throw ContractError("word_rule: empty form");
  const std::size_t l = common_prefix(present, past);
  const PhonemeSequence a_rest = slice(present, l, present.size());
  const PhonemeSequence b_rest = slice(past, l, past.size());
  const std::size_t r = common_suffix(a_rest, b_rest);
  Rule rule;
  rule.left = {false, slice(present, 0, l)};
  rule.from = slice(a_rest, 0, a_rest.size() - r);
  rule.to = slice(b_rest, 0, b_rest.size() - r);
  rule.right = slice(a_rest, a_rest.size() - r, a_rest.size());
  rule.scope = rule.hits = 1;
  rule.confidence = confidence(1, 1);
  return rule;
}

std::optional<Rule> generalize(const Rule& r1, const Rule& r2) {
  if (r1.from != r2.from || r1.to != r2.to) return std::nullopt;
  Rule g = r1;
  if (r1.left.variable || r2.left.variable || r1.left.literal != r2.left.literal) {
    const std::size_t n = common_suffix(r1.left.literal, r2.left.literal);
    g.left = {true, slice(r1.left.literal, r1.left.literal.size() - n, r1.left.literal.size())};
  }
  g.right = slice(r1.right, 0, common_prefix(r1.right, r2.right));
  return g;
}

double confidence(std::size_t scope, std::size_t hits) {
  if (scope == 0) return 0.0;
  if (hits > scope) throw ContractError("confidence: hits exceed scope");
  const double n = static_cast<double>(scope);
  const double p = (static_cast<double>(hits) + 0.5) / (n + 1.0);
  const double lower = p - kConfidenceZ * std::sqrt(p * (1.0 - p) / n);
  return std::min(std::max(lower, 0.0), static_cast<double>(hits) / n);
}

void score_rule(Rule& rule, std::span<const VerbEntry> corpus) {
  std::map<PhonemeSequence, bool> produced;  // present -> some attested past matches
  for (const auto& e : corpus) {
    const auto out = apply_rule(rule, e.present);
    if (!out) continue;
    bool& hit = produced[e.present];
    hit = hit || *out == e.past;
  }
  rule.scope = produced.size();
  rule.hits = static_cast<std::size_t>(
      std::count_if(produced.begin(), produced.end(), [](const auto& kv) { return kv.second; }));
  rule.confidence = confidence(rule.scope, rule.hits);
}

RuleGrammar induce_grammar(std::span<const VerbEntry> corpus) {
  if (corpus.empty()) throw ContractError("induce_grammar: empty corpus");
  std::set<std::pair<PhonemeSequence, PhonemeSequence>> pairs;
  for (const auto& e : corpus) pairs.emplace(e.present, e.past);

  using Key = std::pair<PhonemeSequence, PhonemeSequence>;
  std::map<Key, std::vector<Rule>> groups;
  for (const auto& [present, past] : pairs) {
    Rule r = word_rule(present, past);
    groups[{r.from, r.to}].push_back(std::move(r));
  }

  auto less = [](const Rule& a, const Rule& b) { return shape_key(a) < shape_key(b); };
  std::set<Rule, decltype(less)> unique(less);
  for (auto& [change, members] : groups) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      unique.insert(members[i]);
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (auto g = generalize(members[i], members[j])) unique.insert(std::move(*g));
      }
    }
  }

  RuleGrammar grammar;
  for (Rule r : unique) {
    score_rule(r, corpus);
    if (r.scope > 0) grammar.rules.push_back(std::move(r));
  }

  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  for (const auto& [present, past] : pairs) {
    mix(join_phonemes(present));
    mix(join_phonemes(past));
  }
  grammar.fingerprint = h;
  return grammar;
}

double score_form(const RuleGrammar& grammar, const PhonemeSequence& present,
                  const PhonemeSequence& candidate) {
  double best = 0.0;
  for (const auto& r : grammar.rules) {
    if (r.confidence <= best) continue;
    const auto out = apply_rule(r, present);
    if (out && *out == candidate) best = r.confidence;
  }
  return best;
}

void RuleGrammar::write_table(std::ostream& out) const {
  out << "# fingerprint " << std::hex << fingerprint << std::dec << '\n';
  out << "change\tleft\tright\tscope\thits\tconfidence\n";
  for (const auto& r : rules) {
    std::string left = r.left.variable ? "X" : "";
    if (!r.left.literal.empty() || !r.left.variable) {
      left += (left.empty() ? "" : " ") + show(r.left.literal);
    }
    out << show(r.from) << " -> " << show(r.to) << '\t' << left << '\t' << show(r.right) << '\t' << r.scope << '\t' << r.hits << '\t' << std::setprecision(6)
        << r.confidence << '\n';
  }
}

}  // namespace wug::rules
