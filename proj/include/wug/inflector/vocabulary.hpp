#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "wug/types.hpp"

namespace wug {

// Bijection between phoneme tokens and integer ids. Ids 0..2 are reserved for
// padding, begin-of-sequence and end-of-sequence markers.
//
// The decoder predicts over "output indices": EOS is output index 0 and
// phoneme id k is output index k - 2. PAD and BOS are never predicted.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kFirstPhoneme = 3;

  Vocabulary() = default;
  // Tokens are sorted and deduplicated, so the id assignment depends only on
  // the token set.
  explicit Vocabulary(std::vector<std::string> tokens);

  static Vocabulary from_sequences(std::span<const PhonemeSequence> seqs);

  std::size_t size() const { return kFirstPhoneme + tokens_.size(); }
  std::size_t phoneme_count() const { return tokens_.size(); }
  std::size_t output_size() const { return tokens_.size() + 1; }

  bool contains(const std::string& token) const { return ids_.count(token) != 0; }
  // Throws IngestionError naming the token when unknown.
  int id(const std::string& token) const;
  const std::string& token(int id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<int> encode(const PhonemeSequence& seq) const;
  PhonemeSequence decode(std::span<const int> ids) const;

  static int output_index(int id) { return id == kEos ? 0 : id - (kFirstPhoneme - 1); }
  static int id_from_output(int index) { return index == 0 ? kEos : index + (kFirstPhoneme - 1); }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace wug
