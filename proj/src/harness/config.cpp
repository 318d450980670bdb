#include "wug/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "wug/datastore/checkpoint.hpp"
#include "wug/errors.hpp"
#include "wug/report.hpp"

namespace wug::harness {

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValidationError("config: bad value for '" + key + "': '" + v + "'");
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    out.push_back(parse_number<T>(key, item.substr(b, e - b + 1)));
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  return parse_list<std::uint64_t>("seeds", text);
}

std::vector<std::size_t> ExperimentConfig::saved_epochs() const {
  std::set<std::size_t> s;
  for (std::size_t e : checkpoint_epochs)
    if (e >= 1 && e <= hp.epochs) s.insert(e);
  s.insert(hp.epochs);
  return {s.begin(), s.end()};
}

void ExperimentConfig::validate() const {
  hp.validate();
  if (seeds.empty()) throw ValidationError("config: seed list is empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ValidationError("config: seed list has duplicates");
  }
  if (!corpus.empty() && nonce.empty()) throw ValidationError("config: corpus given without nonce file");
  if (workers == 0) throw ValidationError("config: workers must be >= 1");
  if (samples == 0) throw ValidationError("config: samples must be >= 1");
  if (hp.epochs == 0) throw ValidationError("config: epochs must be >= 1");
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os << "corpus = " << corpus.string() << '\n'
     << "nonce = " << nonce.string() << '\n'
     << "phoneme_classes = " << phoneme_classes.string() << '\n'
     << "embed_dim = " << hp.embed_dim << '\n'
     << "hidden_dim = " << hp.hidden_dim << '\n'
     << "encoder_layers = " << hp.encoder_layers << '\n'
     << "decoder_layers = " << hp.decoder_layers << '\n'
     << "batch_size = " << hp.batch_size << '\n'
     << "dropout = " << report::fmt(hp.dropout_p) << '\n'
     << "epochs = " << hp.epochs << '\n'
     << "beam_width = " << hp.beam_width << '\n'
     << "init_range = " << report::fmt(hp.init_range) << '\n'
     << "adadelta_rho = " << report::fmt(hp.adadelta.rho) << '\n'
     << "adadelta_epsilon = " << report::fmt(hp.adadelta.epsilon) << '\n'
     << "seeds = " << join(seeds) << '\n'
     << "checkpoint_epochs = " << join(checkpoint_epochs) << '\n'
     << "frequency_mode = " << data::to_string(frequency_mode) << '\n'
     << "out = " << out.string() << '\n'
     << "workers = " << workers << '\n'
     << "samples = " << samples << '\n'
     << "accuracy_every = " << accuracy_every << '\n'
     << "synthetic_seed = " << synthetic_seed << '\n'
     << "synthetic_regular = " << synthetic_regular << '\n'
     << "synthetic_irregular = " << synthetic_irregular << '\n';
  return os.str();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig ExperimentConfig::from_key_values(const std::map<std::string, std::string>& kv) {
  ExperimentConfig c;
  for (const auto& [key, v] : kv) {
    if (key == "corpus") c.corpus = v;
    else if (key == "nonce") c.nonce = v;
    else if (key == "phoneme_classes") c.phoneme_classes = v;
    else if (key == "embed_dim") c.hp.embed_dim = parse_number<std::size_t>(key, v);
    else if (key == "hidden_dim") c.hp.hidden_dim = parse_number<std::size_t>(key, v);
    else if (key == "encoder_layers") c.hp.encoder_layers = parse_number<std::size_t>(key, v);
    else if (key == "decoder_layers") c.hp.decoder_layers = parse_number<std::size_t>(key, v);
    else if (key == "batch_size") c.hp.batch_size = parse_number<std::size_t>(key, v);
    else if (key == "dropout") c.hp.dropout_p = parse_number<double>(key, v);
    else if (key == "epochs") c.hp.epochs = parse_number<std::size_t>(key, v);
    else if (key == "beam_width") c.hp.beam_width = parse_number<std::size_t>(key, v);
    else if (key == "init_range") c.hp.init_range = parse_number<double>(key, v);
    else if (key == "adadelta_rho") c.hp.adadelta.rho = parse_number<double>(key, v);
    else if (key == "adadelta_epsilon") c.hp.adadelta.epsilon = parse_number<double>(key, v);
    else if (key == "seeds") c.seeds = parse_list<std::uint64_t>(key, v);
    else if (key == "checkpoint_epochs") c.checkpoint_epochs = parse_list<std::size_t>(key, v);
    else if (key == "frequency_mode") {
      const auto m = data::parse_frequency_mode(v);
      if (!m) throw ValidationError("config: frequency_mode must be type, token or log-token");
      c.frequency_mode = *m;
    } else if (key == "out") c.out = v;
    else if (key == "workers") c.workers = parse_number<std::size_t>(key, v);
    else if (key == "samples") c.samples = parse_number<std::size_t>(key, v);
    else if (key == "accuracy_every") c.accuracy_every = parse_number<std::size_t>(key, v);
    else if (key == "synthetic_seed") c.synthetic_seed = parse_number<std::uint64_t>(key, v);
    else if (key == "synthetic_regular") c.synthetic_regular = parse_number<std::size_t>(key, v);
    else if (key == "synthetic_irregular") c.synthetic_irregular = parse_number<std::size_t>(key, v);
    else throw ValidationError("config: unknown key '" + key + "'");
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open config " + path.string());
  ExperimentConfig c = from_key_values(data::read_key_values(in, path.string()));
  // Relative data paths are taken relative to the config file.
  const auto base = path.parent_path();
  for (auto* p : {&c.corpus, &c.nonce, &c.phoneme_classes}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return c;
}

}  // namespace wug::harness
