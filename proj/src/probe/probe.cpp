#include "wug/probe/probe.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "wug/errors.hpp"
#include "wug/report.hpp"

namespace wug::probe {

namespace {

std::vector<double> row_values(const num::Tensor& t) { return {t.values().begin(), t.values().end()}; }

double distance2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

void EmbeddingCloud::check() const {
  std::set<std::string> seen;
  for (const auto& p : points) {
    if (!seen.insert(p.label).second) throw ValidationError("embedding cloud: duplicate label '" + p.label + "'");
    if (p.values.size() != width()) throw ValidationError("embedding cloud: ragged vector for '" + p.label + "'");
  }
}

EmbeddingCloud encoder_cloud(const Inflector& model, std::span<const Word> words) {
  EmbeddingCloud cloud;
  cloud.layer = "encoder.l" + std::to_string(model.hparams().encoder_layers - 1) + ".summary";
  std::set<std::string> seen;
  for (const auto& w : words) {
    const std::string label = join_phonemes(w.phonemes);
    if (!seen.insert(label).second) continue;
    num::Tape tape(false);
    InflectorGraph graph(model, tape);
    const auto ids = model.vocab().encode(w.phonemes);
    const auto enc = graph.encode(ids);
    cloud.points.push_back({label, w.cls, row_values(tape.value(enc.summaries.back().h))});
  }
  return cloud;
}

EmbeddingCloud decoder_phoneme_cloud(const Inflector& model, const PhonemeClassTable& classes,
                                     std::span<const VerbEntry> corpus) {
  const Vocabulary& vocab = model.vocab();
  const std::size_t width = model.hparams().hidden_dim;
  std::vector<std::vector<double>> sums(vocab.size(), std::vector<double>(width, 0.0));
  std::vector<std::size_t> counts(vocab.size(), 0);

  auto add = [&](int id, const num::Tensor& h) {
    for (std::size_t j = 0; j < width; ++j) sums[id][j] += h.values()[j];
    ++counts[id];
  };

  for (const auto& e : corpus) {
    num::Tape tape(false);
    InflectorGraph graph(model, tape);
    const auto enc = graph.encode(vocab.encode(e.present));
    auto state = graph.initial_state(enc);
    state = graph.step(enc, state, Vocabulary::kBos).next;
    for (int id : vocab.encode(e.past)) {
      const auto s = graph.step(enc, state, id);
      add(id, tape.value(s.top_hidden));
      state = s.next;
    }
  }

  EmbeddingCloud cloud;
  cloud.layer = "decoder.l" + std::to_string(model.hparams().decoder_layers - 1) + ".hidden";
  for (const auto& token : vocab.tokens()) {
    const int id = vocab.id(token);
    std::vector<double> v(width);
    if (counts[id] > 0) {
      for (std::size_t j = 0; j < width; ++j) v[j] = sums[id][j] / static_cast<double>(counts[id]);
    } else {
      num::Tape tape(false);
      InflectorGraph graph(model, tape);
      const std::vector<int> single{id};
      const auto enc = graph.encode(single);
      const auto s = graph.step(enc, graph.initial_state(enc), id);
      v = row_values(tape.value(s.top_hidden));
    }
    cloud.points.push_back({token, to_string(classes.classify(token)), std::move(v)});
  }
  return cloud;
}

Projection pca_project(const EmbeddingCloud& cloud, std::size_t k) {
  cloud.check();
  const std::size_t n = cloud.points.size(), d = cloud.width();
  if (k == 0 || k > d) throw ContractError("pca_project: k must be in [1, width]");
  if (n < k + 1) throw ContractError("pca_project: needs at least k + 1 points");

  Eigen::MatrixXd x(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) x(i, j) = cloud.points[i].values[j];
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericError("pca_project: eigendecomposition failed");

  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const double total = std::max(0.0, cov.trace());
  const double tol = 1e-12 * std::max(total, 1e-300);

  Projection p;
  p.requested = k;
  for (const auto& pt : cloud.points) {
    p.labels.push_back(pt.label);
    p.classes.push_back(pt.cls);
  }
  std::vector<Eigen::VectorXd> axes;
  for (std::size_t c = 0; c < k; ++c) {
    const Eigen::Index idx = static_cast<Eigen::Index>(d - 1 - c);
    const double lambda = values(idx);
    if (!(lambda > tol)) break;
    Eigen::VectorXd axis = solver.eigenvectors().col(idx);
    Eigen::Index big = 0;
    axis.cwiseAbs().maxCoeff(&big);
    if (axis(big) < 0) axis = -axis;
    axes.push_back(axis);
    p.explained.push_back(total > 0 ? lambda / total : 0.0);
    p.components.emplace_back(axis.data(), axis.data() + axis.size());
  }
  if (axes.size() < k) {
    p.note = "only " + std::to_string(axes.size()) + " of " + std::to_string(k) + " components carry variance";
  }
  p.coords.assign(n, std::vector<double>(axes.size()));
  for (std::size_t c = 0; c < axes.size(); ++c) {
    const Eigen::VectorXd proj = x * axes[c];
    for (std::size_t i = 0; i < n; ++i) p.coords[i][c] = proj(static_cast<Eigen::Index>(i));
  }
  return p;
}

std::vector<std::vector<std::size_t>> nearest_neighbours(const EmbeddingCloud& cloud, std::size_t k) {
  cloud.check();
  const std::size_t n = cloud.points.size();
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d.emplace_back(distance2(cloud.points[i].values, cloud.points[j].values), j);
    std::sort(d.begin(), d.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return cloud.points[a.second].label < cloud.points[b.second].label;
    });
    for (std::size_t m = 0; m < std::min(k, d.size()); ++m) out[i].push_back(d[m].second);
  }
  return out;
}

double key_agreement(const std::vector<std::vector<std::size_t>>& neighbours,
                     const std::vector<std::string>& keys) {
  if (neighbours.size() != keys.size()) throw DimensionError("key_agreement: one key per point expected");
  std::size_t pairs = 0, same = 0;
  for (std::size_t i = 0; i < neighbours.size(); ++i) {
    for (std::size_t j : neighbours[i]) {
      ++pairs;
      same += keys[i] == keys[j];
    }
  }
  return pairs == 0 ? 0.0 : static_cast<double>(same) / static_cast<double>(pairs);
}

double chance_key_agreement(const std::vector<std::string>& keys) {
  const double n = static_cast<double>(keys.size());
  if (keys.size() < 2) return 0.0;
  std::map<std::string, std::size_t> groups;
  for (const auto& k : keys) ++groups[k];
  double s = 0.0;
  for (const auto& [key, c] : groups) s += static_cast<double>(c) * static_cast<double>(c - 1);
  return s / (n * (n - 1.0));
}

double nearest_centroid_accuracy(const Projection& projection) {
  const std::size_t n = projection.coords.size();
  if (n == 0) return 0.0;
  const std::size_t k = projection.coords.front().size();
  std::map<std::string, std::pair<std::vector<double>, std::size_t>> centroids;
  for (std::size_t i = 0; i < n; ++i) {
    auto& [sum, count] = centroids[projection.classes[i]];
    sum.resize(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) sum[c] += projection.coords[i][c];
    ++count;
  }
  for (auto& [cls, sc] : centroids)
    for (double& v : sc.first) v /= static_cast<double>(sc.second);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::string best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& [cls, sc] : centroids) {
      const double dd = distance2(projection.coords[i], sc.first);
      if (dd < best_d) best_d = dd, best = cls;
    }
    correct += best == projection.classes[i];
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

PhonemeSequence reversed(const PhonemeSequence& seq) { return PhonemeSequence(seq.rbegin(), seq.rend()); }

std::vector<VerbEntry> reverse_inputs(std::span<const VerbEntry> corpus) {
  std::vector<VerbEntry> out(corpus.begin(), corpus.end());
  for (auto& e : out) e.present = reversed(e.present);
  return out;
}

std::string trailing_key(const PhonemeSequence& seq, std::size_t n) {
  const std::size_t from = seq.size() > n ? seq.size() - n : 0;
  return join_phonemes(PhonemeSequence(seq.begin() + static_cast<std::ptrdiff_t>(from), seq.end()));
}

void write_cloud_csv(std::ostream& out, const EmbeddingCloud& cloud) {
  std::vector<std::string> head{"label", "class", "layer"};
  for (std::size_t j = 0; j < cloud.width(); ++j) head.push_back("v" + std::to_string(j));
  report::csv_row(out, head);
  for (const auto& p : cloud.points) {
    std::vector<std::string> row{p.label, p.cls, cloud.layer};
    for (double v : p.values) row.push_back(report::fmt(v));
    report::csv_row(out, row);
  }
}

void write_projection_csv(std::ostream& out, const Projection& projection) {
  std::vector<std::string> head{"label", "class"};
  for (std::size_t c = 0; c < projection.explained.size(); ++c) head.push_back("pc" + std::to_string(c + 1));
  report::csv_row(out, head);
  for (std::size_t i = 0; i < projection.labels.size(); ++i) {
    std::vector<std::string> row{projection.labels[i], projection.classes[i]};
    for (double v : projection.coords[i]) row.push_back(report::fmt(v));
    report::csv_row(out, row);
  }
}

std::string projection_svg(const Projection& projection, std::string_view title) {
  std::map<std::string, report::Series> by_class;
  for (std::size_t i = 0; i < projection.labels.size(); ++i) {
    auto& s = by_class[projection.classes[i]];
    s.name = projection.classes[i];
    const auto& c = projection.coords[i];
    s.x.push_back(c.empty() ? 0.0 : c[0]);
    s.y.push_back(c.size() < 2 ? 0.0 : c[1]);
    s.labels.push_back(projection.labels[i]);
  }
  std::vector<report::Series> series;
  for (auto& [cls, s] : by_class) series.push_back(std::move(s));
  std::string xl = "PC1", yl = "PC2";
  if (!projection.explained.empty()) xl += " (" + report::fmt(std::round(projection.explained[0] * 1000) / 10) + "%)";
  if (projection.explained.size() > 1) yl += " (" + report::fmt(std::round(projection.explained[1] * 1000) / 10) + "%)";
  return report::svg_scatter(title, xl, yl, series);
}

}  // namespace wug::probe
