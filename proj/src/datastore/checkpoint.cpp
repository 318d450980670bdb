#include "wug/datastore/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "wug/errors.hpp"
#include "wug/report.hpp"

namespace wug::data {

namespace {

constexpr std::string_view kMagic = "wug-checkpoint";

std::uint32_t crc(std::uint32_t seed, std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(seed, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

template <typename U>
void put_le(std::string& out, U bits) {
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

template <typename U>
U get_le(const char* p) {
  U v = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) v |= static_cast<U>(static_cast<unsigned char>(p[b])) << (8 * b);
  return v;
}

std::string num(double v) { return report::fmt(v); }

// Header fields in a fixed order; reading checks each key in turn.
std::vector<std::pair<std::string, std::string>> hp_fields(const Inflector& m) {
  const HyperParams& hp = m.hparams();
  return {{"seed", std::to_string(hp.seed)},
          {"epochs_completed", std::to_string(m.epochs_completed())},
          {"embed_dim", std::to_string(hp.embed_dim)},
          {"hidden_dim", std::to_string(hp.hidden_dim)},
          {"encoder_layers", std::to_string(hp.encoder_layers)},
          {"decoder_layers", std::to_string(hp.decoder_layers)},
          {"batch_size", std::to_string(hp.batch_size)},
          {"dropout", num(hp.dropout_p)},
          {"epochs", std::to_string(hp.epochs)},
          {"beam_width", std::to_string(hp.beam_width)},
          {"init_range", num(hp.init_range)},
          {"adadelta_rho", num(hp.adadelta.rho)},
          {"adadelta_epsilon", num(hp.adadelta.epsilon)}};
}

class HeaderReader {
 public:
  HeaderReader(std::istream& in, std::string_view source) : in_(in), source_(source) {}

  std::string line() {
    std::string l;
    if (!std::getline(in_, l)) fail("unexpected end of header");
    ++line_no_;
    text_ += l;
    text_ += '\n';
    return l;
  }
  // "key value" with the expected key.
  std::string field(std::string_view key) {
    const std::string l = line();
    const auto space = l.find(' ');
    if (space == std::string::npos || std::string_view(l).substr(0, space) != key) {
      fail("expected '" + std::string(key) + " <value>', found '" + l + "'");
    }
    return l.substr(space + 1);
  }
  template <typename T>
  T number(std::string_view key) {
    const std::string v = field(key);
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) fail("bad value for " + std::string(key) + ": '" + v + "'");
    return out;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw IngestionError(std::string(source_) + ": checkpoint header line " + std::to_string(line_no_) + ": " + why);
  }
  const std::string& text() const { return text_; }

 private:
  std::istream& in_;
  std::string_view source_;
  std::string text_;
  std::size_t line_no_ = 0;
};

}  // namespace

void write_checkpoint(std::ostream& out, const Inflector& model, Precision precision) {
  std::ostringstream head;
  head << kMagic << ' ' << kCheckpointVersion << '\n';
  head << "precision " << (precision == Precision::kFloat32 ? "f32" : "f64") << '\n';
  for (const auto& [k, v] : hp_fields(model)) head << k << ' ' << v << '\n';
  const auto& tokens = model.vocab().tokens();
  head << "vocab " << tokens.size() << '\n';
  for (const auto& t : tokens) head << t << '\n';

  std::string payload;
  head << "params " << model.parameters().size() << '\n';
  for (const auto& p : model.parameters()) {
    const auto& t = p.value;
    head << "param " << p.name << ' ' << t.rows() << 'x' << t.cols() << ' ' << payload.size() << ' '
         << t.size() << '\n';
    for (double x : t.values()) {
      if (precision == Precision::kFloat32) {
        put_le(payload, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
      } else {
        put_le(payload, std::bit_cast<std::uint64_t>(x));
      }
    }
  }
  head << "payload " << payload.size() << '\n';
  const std::string h = head.str();
  const std::uint32_t sum = crc(crc(0, h), payload);
  char hex[16];
  std::snprintf(hex, sizeof hex, "%08x", sum);
  out << h << "crc32 " << hex << "\nend\n";
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

Inflector read_checkpoint(std::istream& in, std::string_view source) {
  HeaderReader r(in, source);
  {
    const std::string first = r.line();
    const auto space = first.find(' ');
    if (space == std::string::npos || std::string_view(first).substr(0, space) != kMagic) {
      r.fail("not a checkpoint (missing '" + std::string(kMagic) + "' magic)");
    }
    const std::string v = first.substr(space + 1);
    if (v != std::to_string(kCheckpointVersion)) {
      throw VersionError(std::string(source) + ": checkpoint format version " + v +
                         ", this build reads version " + std::to_string(kCheckpointVersion));
    }
  }
  const std::string prec = r.field("precision");
  if (prec != "f32" && prec != "f64") r.fail("unknown precision '" + prec + "'");
  const std::size_t width = prec == "f32" ? 4 : 8;

  HyperParams hp;
  hp.seed = r.number<std::uint64_t>("seed");
  const auto epochs_completed = r.number<std::size_t>("epochs_completed");
  hp.embed_dim = r.number<std::size_t>("embed_dim");
  hp.hidden_dim = r.number<std::size_t>("hidden_dim");
  hp.encoder_layers = r.number<std::size_t>("encoder_layers");
  hp.decoder_layers = r.number<std::size_t>("decoder_layers");
  hp.batch_size = r.number<std::size_t>("batch_size");
  hp.dropout_p = r.number<double>("dropout");
  hp.epochs = r.number<std::size_t>("epochs");
  hp.beam_width = r.number<std::size_t>("beam_width");
  hp.init_range = r.number<double>("init_range");
  hp.adadelta.rho = r.number<double>("adadelta_rho");
  hp.adadelta.epsilon = r.number<double>("adadelta_epsilon");

  const auto n_tokens = r.number<std::size_t>("vocab");
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < n_tokens; ++i) tokens.push_back(r.line());

  // The constructor rebuilds the parameter table; the header must agree with it.
  Inflector model(Vocabulary(tokens), hp);
  model.set_epochs_completed(epochs_completed);
  const auto n_params = r.number<std::size_t>("params");
  if (n_params != model.parameters().size()) {
    r.fail("expected " + std::to_string(model.parameters().size()) + " parameters, header lists " +
           std::to_string(n_params));
  }
  struct Entry {
    std::size_t offset, count;
  };
  std::vector<Entry> entries;
  std::size_t expected_offset = 0;
  for (const auto& p : model.parameters()) {
    std::istringstream f(r.field("param"));
    std::string name, shape;
    std::size_t offset = 0, count = 0;
    if (!(f >> name >> shape >> offset >> count)) r.fail("malformed param line");
    const std::string want = std::to_string(p.value.rows()) + "x" + std::to_string(p.value.cols());
    if (name != p.name || shape != want || count != p.value.size()) {
      r.fail("param '" + name + "' " + shape + " does not match model tensor '" + p.name + "' " + want);
    }
    if (offset != expected_offset) r.fail("param '" + name + "' offset leaves a gap or overlap");
    entries.push_back({offset, count});
    expected_offset += count * width;
  }
  const auto payload_bytes = r.number<std::size_t>("payload");
  if (payload_bytes != expected_offset) r.fail("payload size does not match the parameter table");
  const std::string covered = r.text();
  const std::string sum_text = r.field("crc32");
  if (r.line() != "end") r.fail("missing 'end' after header");

  std::string payload(payload_bytes, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(payload_bytes));
  if (static_cast<std::size_t>(in.gcount()) != payload_bytes) {
    throw IngestionError(std::string(source) + ": truncated payload: expected " + std::to_string(payload_bytes) +
                         " bytes, found " + std::to_string(in.gcount()));
  }
  char hex[16];
  std::snprintf(hex, sizeof hex, "%08x", crc(crc(0, covered), payload));
  if (sum_text != hex) {
    throw ChecksumError(std::string(source) + ": checksum mismatch (stored " + sum_text + ", computed " + hex + ")");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IngestionError(std::string(source) + ": trailing bytes after payload");
  }

  auto& params = model.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto values = params[i].value.values();
    const char* p = payload.data() + entries[i].offset;
    for (std::size_t k = 0; k < entries[i].count; ++k, p += width) {
      values[k] = width == 4 ? static_cast<double>(std::bit_cast<float>(get_le<std::uint32_t>(p)))
                             : std::bit_cast<double>(get_le<std::uint64_t>(p));
    }
    if (!params[i].value.all_finite()) {
      throw NumericError(std::string(source) + ": non-finite value in parameter " + params[i].name);
    }
  }
  return model;
}

void save_checkpoint(const Inflector& model, const std::filesystem::path& path, Precision precision) {
  std::ostringstream os(std::ios::binary);
  write_checkpoint(os, model, precision);
  report::write_file(path, os.str());
}

Inflector load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open checkpoint " + path.string());
  return read_checkpoint(in, path.string());
}

std::map<std::string, std::string> read_key_values(std::istream& in, std::string_view source) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    auto fail = [&](const std::string& why) {
      throw IngestionError(std::string(source) + ":" + std::to_string(line_no) + ": " + why);
    };
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) fail("empty key");
    if (!out.emplace(key, trim(t.substr(eq + 1))).second) fail("repeated key '" + key + "'");
  }
  return out;
}

}  // namespace wug::data
