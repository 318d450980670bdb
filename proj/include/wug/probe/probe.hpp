#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wug/inflector/model.hpp"
#include "wug/phonology.hpp"
#include "wug/types.hpp"

namespace wug::probe {

struct LabeledVector {
  std::string label;
  std::string cls;
  std::vector<double> values;
};

struct EmbeddingCloud {
  std::string layer;  // where the vectors were read from
  std::vector<LabeledVector> points;

  std::size_t width() const { return points.empty() ? 0 : points.front().values.size(); }
  // Throws ValidationError on duplicate labels or ragged widths.
  void check() const;
};

struct Word {
  PhonemeSequence phonemes;
  std::string cls;  // e.g. regular / irregular / nonce
};

// Top encoder layer summary [forward last ; backward first] per word, width
// hidden_dim. Repeated words keep their first occurrence.
EmbeddingCloud encoder_cloud(const Inflector& model, std::span<const Word> words);

// One vector per output phoneme: the top decoder hidden state right after the
// phoneme is fed back as input, averaged over every position where it occurs
// in the teacher-forced pasts of `corpus`. Phonemes that never occur there
// (or all of them, with an empty corpus) use a single step on the word made
// of just that phoneme. Labels come from `classes`.
EmbeddingCloud decoder_phoneme_cloud(const Inflector& model, const PhonemeClassTable& classes,
                                     std::span<const VerbEntry> corpus = {});

struct Projection {
  std::vector<std::string> labels;
  std::vector<std::string> classes;
  std::vector<std::vector<double>> coords;      // n x components
  std::vector<std::vector<double>> components;  // unit axes, d wide
  std::vector<double> explained;                // non-increasing ratios
  std::size_t requested = 0;
  std::string note;  // set when fewer than `requested` axes carry variance
};

// Mean-centred PCA through the covariance eigendecomposition. Each axis is
// signed so its largest-magnitude loading is positive. Needs k <= width and
// at least k + 1 points (ContractError).
Projection pca_project(const EmbeddingCloud& cloud, std::size_t k);

// Indices of the k nearest other points (Euclidean), ties by label.
std::vector<std::vector<std::size_t>> nearest_neighbours(const EmbeddingCloud& cloud, std::size_t k);

// Share of neighbour pairs whose keys agree, and the same share expected when
// keys are assigned to points at random.
double key_agreement(const std::vector<std::vector<std::size_t>>& neighbours,
                     const std::vector<std::string>& keys);
double chance_key_agreement(const std::vector<std::string>& keys);

// Leave-nothing-out nearest-centroid accuracy in projected space: a linear
// separability score for the class labels.
double nearest_centroid_accuracy(const Projection& projection);

PhonemeSequence reversed(const PhonemeSequence& seq);
// Same corpus with every present form reversed; pasts untouched.
std::vector<VerbEntry> reverse_inputs(std::span<const VerbEntry> corpus);

// Last `n` phonemes joined, a rhyme key for neighbour checks.
std::string trailing_key(const PhonemeSequence& seq, std::size_t n);

void write_cloud_csv(std::ostream& out, const EmbeddingCloud& cloud);
void write_projection_csv(std::ostream& out, const Projection& projection);
std::string projection_svg(const Projection& projection, std::string_view title);

}  // namespace wug::probe
