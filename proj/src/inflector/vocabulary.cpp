#include "wug/inflector/vocabulary.hpp"

#include <algorithm>
#include <set>

#include "wug/errors.hpp"

namespace wug {

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    ids_.emplace(tokens_[i], static_cast<int>(i) + kFirstPhoneme);
  }
}

Vocabulary Vocabulary::from_sequences(std::span<const PhonemeSequence> seqs) {
  std::set<std::string> all;
  for (const auto& s : seqs) all.insert(s.begin(), s.end());
  return Vocabulary(std::vector<std::string>(all.begin(), all.end()));
}

int Vocabulary::id(const std::string& token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) throw IngestionError("unknown phoneme '" + token + "'");
  return it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < kFirstPhoneme || static_cast<std::size_t>(id) >= size()) {
    throw IngestionError("id " + std::to_string(id) + " is not a phoneme id");
  }
  return tokens_[static_cast<std::size_t>(id - kFirstPhoneme)];
}

std::vector<int> Vocabulary::encode(const PhonemeSequence& seq) const {
  std::vector<int> out;
  out.reserve(seq.size());
  for (const auto& t : seq) out.push_back(id(t));
  return out;
}

PhonemeSequence Vocabulary::decode(std::span<const int> ids) const {
  PhonemeSequence out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(token(i));
  return out;
}

}  // namespace wug
