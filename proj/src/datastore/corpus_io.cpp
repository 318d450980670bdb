#include "wug/datastore/corpus_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "wug/errors.hpp"

namespace wug::data {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long> parse_long(std::string_view s) {
  s = trim(s);
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open " + path.string());
  return in;
}

std::string format_prob(double p) {
  std::ostringstream os;
  os << std::setprecision(17) << p;
  return os.str();
}

}  // namespace

const char* to_string(FrequencyMode m) {
  switch (m) {
    case FrequencyMode::kType: return "type";
    case FrequencyMode::kToken: return "token";
    case FrequencyMode::kLogToken: return "log-token";
  }
  return "?";
}

std::optional<FrequencyMode> parse_frequency_mode(std::string_view s) {
  if (s == "type") return FrequencyMode::kType;
  if (s == "token") return FrequencyMode::kToken;
  if (s == "log-token") return FrequencyMode::kLogToken;
  return std::nullopt;
}

std::vector<VerbEntry> read_corpus(std::istream& in, const CorpusOptions& options,
                                   std::string_view source) {
  std::vector<VerbEntry> out;
  std::set<std::pair<PhonemeSequence, PhonemeSequence>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto fail = [&](const std::string& why) {
      throw IngestionError(std::string(source) + ":" + std::to_string(line_no) + ": " + why);
    };
    const auto fields = split_tabs(line);
    if (fields.size() != 4 && fields.size() != 5) {
      fail("expected 4 or 5 tab-separated fields, found " + std::to_string(fields.size()));
    }
    VerbEntry e;
    e.lemma = std::string(trim(fields[0]));
    e.present = parse_phonemes(fields[1]);
    e.past = parse_phonemes(fields[2]);
    if (e.lemma.empty()) fail("empty orthography");
    if (e.present.empty() || e.past.empty()) fail("empty phoneme sequence");
    const auto cls = parse_verb_class(trim(fields[3]));
    if (!cls) fail("unknown class label '" + std::string(trim(fields[3])) + "'");
    e.verb_class = *cls;
    if (fields.size() == 5 && !trim(fields[4]).empty()) {
      const auto f = parse_long(fields[4]);
      if (!f || *f < 1) fail("frequency must be an integer >= 1");
      e.frequency = *f;
    }
    if (options.frequency_mode == FrequencyMode::kType &&
        !seen.emplace(e.present, e.past).second) {
      continue;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<VerbEntry> load_corpus(const std::filesystem::path& path,
                                   const CorpusOptions& options) {
  auto in = open_or_throw(path);
  return read_corpus(in, options, path.string());
}

void write_corpus(std::ostream& out, std::span<const VerbEntry> entries) {
  for (const auto& e : entries) {
    out << e.lemma << '\t' << join_phonemes(e.present) << '\t' << join_phonemes(e.past) << '\t'
        << to_string(e.verb_class);
    if (e.frequency) out << '\t' << *e.frequency;
    out << '\n';
  }
}

std::size_t multiplicity(const VerbEntry& entry, FrequencyMode mode) {
  if (!entry.frequency || mode == FrequencyMode::kType) return 1;
  const long f = *entry.frequency;
  if (mode == FrequencyMode::kToken) return static_cast<std::size_t>(f);
  const long r = std::lround(std::log(static_cast<double>(f)));
  return static_cast<std::size_t>(std::max(1L, r));
}

std::vector<VerbEntry> epoch_stream(std::span<const VerbEntry> entries, FrequencyMode mode) {
  std::vector<VerbEntry> out;
  for (const auto& e : entries) {
    const std::size_t k = multiplicity(e, mode);
    for (std::size_t i = 0; i < k; ++i) out.push_back(e);
  }
  return out;
}

std::vector<NonceItem> read_nonce(std::istream& in, std::string_view source) {
  std::vector<NonceItem> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto fail = [&](const std::string& why) {
      throw IngestionError(std::string(source) + ":" + std::to_string(line_no) + ": " + why);
    };
    const auto fields = split_tabs(line);
    const std::size_t n = fields.size();
    if (n < 12 || (n - 4) % 4 != 0 || (n - 4) / 4 > 3) {
      fail("expected id, present, category, 2 or 3 form groups of 4 fields, and 'other'");
    }
    NonceItem item;
    item.id = std::string(trim(fields[0]));
    item.present = parse_phonemes(fields[1]);
    const auto cat = parse_nonce_category(trim(fields[2]));
    if (!cat) fail("unknown category '" + std::string(trim(fields[2])) + "'");
    item.category = *cat;
    for (std::size_t g = 3; g + 1 < n; g += 4) {
      SuggestedForm f;
      std::string_view role = trim(fields[g]);
      if (auto colon = role.find(':'); colon != std::string_view::npos) {
        f.orthography = std::string(role.substr(colon + 1));
        role = role.substr(0, colon);
      }
      const auto r = parse_form_role(role);
      if (!r) fail("unknown form role '" + std::string(role) + "'");
      f.role = *r;
      f.phonemes = parse_phonemes(fields[g + 1]);
      const auto p = parse_double(fields[g + 2]);
      if (!p) fail("bad production probability '" + std::string(fields[g + 2]) + "'");
      f.production = *p;
      const std::string_view rating = trim(fields[g + 3]);
      if (!rating.empty() && rating != "NA") {
        const auto rv = parse_double(rating);
        if (!rv) fail("bad rating '" + std::string(rating) + "'");
        f.rating = *rv;
      }
      item.forms.push_back(std::move(f));
    }
    const auto other = parse_double(fields[n - 1]);
    if (!other) fail("bad 'other' probability '" + std::string(fields[n - 1]) + "'");
    item.other = *other;
    validate(item);
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<NonceItem> load_nonce(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_nonce(in, path.string());
}

void write_nonce(std::ostream& out, std::span<const NonceItem> items) {
  for (const auto& item : items) {
    out << item.id << '\t' << join_phonemes(item.present) << '\t' << to_string(item.category);
    for (const auto& f : item.forms) {
      out << '\t' << to_string(f.role);
      if (!f.orthography.empty()) out << ':' << f.orthography;
      out << '\t' << join_phonemes(f.phonemes) << '\t' << format_prob(f.production) << '\t'
          << (f.rating ? format_prob(*f.rating) : std::string("NA"));
    }
    out << '\t' << format_prob(item.other) << '\n';
  }
}

}  // namespace wug::data
