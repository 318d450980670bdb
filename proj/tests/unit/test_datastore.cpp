#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "wug/datastore/checkpoint.hpp"
#include "wug/datastore/corpus_io.hpp"
#include "wug/datastore/synthetic.hpp"
#include "wug/errors.hpp"
#include "wug/inflector/decode.hpp"
#include "wug/phonology.hpp"

using namespace wug;
using namespace wug::data;

namespace {

std::vector<VerbEntry> corpus_from(const std::string& text, FrequencyMode mode = FrequencyMode::kType) {
  std::istringstream in(text);
  return read_corpus(in, {mode});
}

std::vector<NonceItem> nonce_from(const std::string& text) {
  std::istringstream in(text);
  return read_nonce(in);
}

std::string checkpoint_bytes(const Inflector& m, Precision p) {
  std::ostringstream out;
  write_checkpoint(out, m, p);
  return out.str();
}

Inflector from_bytes(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_checkpoint(in);
}

const char* kScride =
    "scride\ts k r \"aI d\tIOR-both\treg:scrided\ts k r \"aI d @ d\t0.6\t5.1\t"
    "irr1:scrode\ts k r \"oU d\t0.25\t4.2\tirr2:scrid\ts k r \"I d\t0.1\tNA\t0.05\n";

}  // namespace

TEST_CASE("corpus: two valid lines, comments and blanks skipped") {
  const auto c = corpus_from("# header\nwant\tw \"A n t\tw \"A n t @ d\tregular\n\n"
                             "sing\ts \"I N\ts \"{ N\tirregular\t12\n");
  REQUIRE(c.size() == 2);
  CHECK(c[0].lemma == "want");
  CHECK(c[0].past == parse_phonemes("w \"A n t @ d"));
  CHECK_FALSE(c[0].frequency);
  CHECK(c[1].verb_class == VerbClass::kIrregular);
  CHECK(*c[1].frequency == 12);
}

TEST_CASE("corpus: duplicate types collapse only in type mode") {
  const std::string text = "ring\tr I N\tr { N\tirregular\t5\nring\tr I N\tr { N\tirregular\t5\n";
  CHECK(corpus_from(text).size() == 1);
  CHECK(corpus_from(text, FrequencyMode::kToken).size() == 2);
}

TEST_CASE("corpus: malformed lines name the line number") {
  auto message = [](const std::string& text) {
    try {
      corpus_from(text);
    } catch (const IngestionError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("a\tb\tc\tregular\nbad line\n").find(":2:") != std::string::npos);
  CHECK(message("a\tb\tc\tweird\n").find("weird") != std::string::npos);
  CHECK(message("a\tb\tc\tregular\t0\n").find(":1:") != std::string::npos);
  CHECK(message("a\t\tc\tregular\n").find(":1:") != std::string::npos);
}

TEST_CASE("frequency modes: multiplicities and epoch stream") {
  VerbEntry e{"x", {"a"}, {"b"}, VerbClass::kRegular, 100};
  CHECK(multiplicity(e, FrequencyMode::kType) == 1);
  CHECK(multiplicity(e, FrequencyMode::kToken) == 100);
  CHECK(multiplicity(e, FrequencyMode::kLogToken) == 5);  // round(ln 100) = round(4.605)
  e.frequency = 1;
  CHECK(multiplicity(e, FrequencyMode::kLogToken) == 1);
  e.frequency = std::nullopt;
  CHECK(multiplicity(e, FrequencyMode::kToken) == 1);
  const std::vector<VerbEntry> two = {{"x", {"a"}, {"b"}, VerbClass::kRegular, 100},
                                      {"y", {"c"}, {"d"}, VerbClass::kRegular, 3}};
  CHECK(epoch_stream(two, FrequencyMode::kLogToken).size() == 6);
  CHECK(parse_frequency_mode("log-token") == FrequencyMode::kLogToken);
  CHECK_FALSE(parse_frequency_mode("tokens"));
}

TEST_CASE("corpus write/read round trip") {
  const std::vector<VerbEntry> c = {{"want", parse_phonemes("w A n t"), parse_phonemes("w A n t @ d"),
                                     VerbClass::kRegular, 40},
                                    {"sing", parse_phonemes("s I N"), parse_phonemes("s { N"),
                                     VerbClass::kIrregular, std::nullopt}};
  std::ostringstream out;
  write_corpus(out, c);
  const auto back = corpus_from(out.str());
  REQUIRE(back.size() == 2);
  CHECK(back[0].present == c[0].present);
  CHECK(back[0].frequency == c[0].frequency);
  CHECK(back[1].past == c[1].past);
  CHECK_FALSE(back[1].frequency);
}

TEST_CASE("nonce: scride has one regular and two irregulars") {
  const auto items = nonce_from(kScride);
  REQUIRE(items.size() == 1);
  const NonceItem& it = items[0];
  CHECK(it.category == NonceCategory::kIorBoth);
  CHECK(it.regular().orthography == "scrided");
  CHECK(it.irregulars().size() == 2);
  CHECK(it.find(FormRole::kIrregular2)->phonemes == parse_phonemes("s k r \"I d"));
  CHECK_FALSE(it.find(FormRole::kIrregular2)->rating);
  CHECK(*it.regular().rating == 5.1);
  CHECK(it.other == 0.05);

  std::ostringstream out;
  write_nonce(out, items);
  const auto again = nonce_from(out.str());
  REQUIRE(again.size() == 1);
  CHECK(again[0].forms.size() == 3);
  CHECK(again[0].forms[1].production == 0.25);
}

TEST_CASE("nonce: probabilities summing to 0.8 are rejected by item name") {
  const std::string bad = "spling\ts p l I N\tanalogy\treg\ts p l I N d\t0.5\t\tirr1\ts p l { N\t0.2\t\t0.1\n";
  try {
    nonce_from(bad);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("spling") != std::string::npos);
  }
}

TEST_CASE("nonce: structural problems") {
  // two regulars
  CHECK_THROWS_AS(nonce_from("x\ta\tanalogy\treg\ta d\t0.5\t\treg\ta t\t0.5\t\t0\n"), ValidationError);
  // unknown category / role, wrong field count
  CHECK_THROWS_AS(nonce_from("x\ta\tfoo\treg\ta d\t0.5\t\tirr1\tb\t0.5\t\t0\n"), IngestionError);
  CHECK_THROWS_AS(nonce_from("x\ta\tanalogy\treg\ta d\t0.5\t\tirr9\tb\t0.5\t\t0\n"), IngestionError);
  CHECK_THROWS_AS(nonce_from("x\ta\tanalogy\treg\ta d\t1\t\t0\n"), IngestionError);
}

TEST_CASE("nonce: a 59-item file gives 59 items") {
  std::string text;
  for (int i = 0; i < 59; ++i) {
    text += "w" + std::to_string(i) + "\tn \"oU l d\tIOR-regular\treg\tn \"oU l d @ d\t0.9\t6\t"
            "irr1\tn \"E l d\t0.1\t2\t0\n";
  }
  CHECK(nonce_from(text).size() == 59);
}

TEST_CASE("phoneme classes: coronal stops, vowels, h, stress, edits") {
  const auto t = PhonemeClassTable::english_default();
  CHECK(t.classify("t") == SuffixClass::kCoronalStop);
  CHECK(t.classify("d") == SuffixClass::kCoronalStop);
  for (const char* v : {"I", "\"i:", "aI", "\"oU", "@"}) CHECK(t.classify(v) == SuffixClass::kVoiced);
  CHECK(t.classify("h") == SuffixClass::kVoiceless);
  CHECK(t.classify("k") == SuffixClass::kVoiceless);
  CHECK(t.classify("zz") == SuffixClass::kUnclassified);
  CHECK(strip_stress("\"oU") == "oU");

  std::ostringstream out;
  t.write(out);
  std::istringstream in("# comment\n" + out.str() + "x\tvoiced\n");
  const auto back = PhonemeClassTable::read(in);
  CHECK(back.size() == t.size() + 1);
  CHECK(back.classify("x") == SuffixClass::kVoiced);
  std::istringstream bad("t\tdental\n");
  CHECK_THROWS_AS(PhonemeClassTable::read(bad), IngestionError);

  CHECK(regular_past(parse_phonemes("w A n t"), t) == parse_phonemes("w A n t @ d"));
  CHECK(regular_past(parse_phonemes("h V g"), t) == parse_phonemes("h V g d"));
  CHECK(regular_past(parse_phonemes("w O k"), t) == parse_phonemes("w O k t"));
  CHECK_THROWS_AS(regular_past(parse_phonemes("a zz"), t), ValidationError);
}

TEST_CASE("bundled phoneme table matches the built-in one") {
  const auto path = std::filesystem::path(WUG_SOURCE_DIR) / "data" / "phoneme_classes.tsv";
  const auto file = PhonemeClassTable::load(path);
  const auto builtin = PhonemeClassTable::english_default();
  std::ostringstream a, b;
  file.write(a);
  builtin.write(b);
  CHECK(a.str() == b.str());
}

TEST_CASE("synthetic: deterministic, sized, voicing rule, family rimes") {
  const auto spec = SyntheticSpec::with_counts(200, 20);
  const auto a = make_synthetic_corpus(spec, 7);
  const auto b = make_synthetic_corpus(spec, 7);
  const auto c = make_synthetic_corpus(spec, 8);
  REQUIRE(a.corpus.size() == 220);
  bool same = true, differs = false;
  for (std::size_t i = 0; i < a.corpus.size(); ++i) {
    same = same && a.corpus[i].present == b.corpus[i].present && a.corpus[i].past == b.corpus[i].past;
    differs = differs || a.corpus[i].present != c.corpus[i].present;
  }
  CHECK(same);
  CHECK(differs);

  std::set<PhonemeSequence> presents;
  std::size_t regular = 0, irregular = 0;
  for (const auto& e : a.corpus) {
    presents.insert(e.present);
    if (e.verb_class == VerbClass::kRegular) {
      ++regular;
      CHECK(e.past == regular_past(e.present, spec.classes));
    } else {
      ++irregular;
      // some family: present ends in its present rime, past = same onset + past rime
      bool member = false;
      for (const auto& fam : spec.irregular_families) {
        const auto& pr = fam.present_rime;
        if (e.present.size() <= pr.size() || !std::equal(pr.rbegin(), pr.rend(), e.present.rbegin())) continue;
        PhonemeSequence expect(e.present.begin(), e.present.end() - static_cast<std::ptrdiff_t>(pr.size()));
        expect.insert(expect.end(), fam.past_rime.begin(), fam.past_rime.end());
        member = member || expect == e.past;
      }
      CHECK(member);
    }
  }
  CHECK(regular == 200);
  CHECK(irregular == 20);
  CHECK(presents.size() == 220);

  std::map<NonceCategory, int> per_category;
  for (const auto& item : a.nonce) {
    CHECK_NOTHROW(validate(item));
    CHECK(presents.count(item.present) == 0);
    CHECK(item.regular().phonemes == regular_past(item.present, spec.classes));
    for (const auto& f : item.forms) CHECK(f.rating.has_value());
    ++per_category[item.category];
  }
  CHECK(per_category.size() == 6);
  for (const auto& [cat, n] : per_category) CHECK(n == 3);
}

TEST_CASE("synthetic: an inventory that is too small is rejected") {
  auto spec = SyntheticSpec::with_counts(200, 20);
  spec.onsets = {{"p"}};
  spec.codas = {{"t"}};
  CHECK_THROWS_AS(make_synthetic_corpus(spec, 1), ValidationError);
}

TEST_CASE("checkpoint: round trip in both precisions") {
  Inflector m = fixture::toy_model(3, 5, 6, 6, 0.7);
  m.set_epochs_completed(17);
  const Inflector m64 = from_bytes(checkpoint_bytes(m, Precision::kFloat64));
  CHECK(m64.checksum() == m.checksum());
  CHECK(m64.epochs_completed() == 17);
  CHECK(m64.vocab() == m.vocab());
  CHECK(m64.hparams().seed == m.hparams().seed);
  CHECK(m64.hparams().init_range == m.hparams().init_range);

  Inflector rounded = m;
  rounded.round_to_float32();
  const Inflector m32 = from_bytes(checkpoint_bytes(m, Precision::kFloat32));
  CHECK(m32.checksum() == rounded.checksum());

  const PhonemeSequence w{"a", "c", "e"};
  const auto x = beam_decode(rounded, w, 6), y = beam_decode(m32, w, 6);
  REQUIRE(x.hypotheses.size() == y.hypotheses.size());
  for (std::size_t i = 0; i < x.hypotheses.size(); ++i) {
    CHECK(x.hypotheses[i].ids == y.hypotheses[i].ids);
    CHECK(x.hypotheses[i].log_prob == y.hypotheses[i].log_prob);
  }
}

TEST_CASE("checkpoint: header offsets tile the payload") {
  const Inflector m = fixture::toy_model(4, 3);
  const std::string bytes = checkpoint_bytes(m, Precision::kFloat32);
  std::istringstream in(bytes);
  std::string line;
  std::size_t expected_offset = 0, payload = 0, params = 0;
  while (std::getline(in, line) && line != "end") {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "param") {
      std::string name, shape;
      std::size_t offset = 0, count = 0;
      ls >> name >> shape >> offset >> count;
      CHECK(offset == expected_offset);
      expected_offset += 4 * count;
      ++params;
    } else if (key == "payload") {
      ls >> payload;
    }
  }
  CHECK(params == m.parameters().size());
  CHECK(payload == expected_offset);
}

TEST_CASE("checkpoint: corruption, version, truncation, trailing bytes") {
  const Inflector m = fixture::toy_model(5, 3);
  const std::string good = checkpoint_bytes(m, Precision::kFloat32);

  std::string flipped = good;
  flipped[flipped.size() - 3] ^= 0x10;
  CHECK_THROWS_AS(from_bytes(flipped), ChecksumError);

  std::string header_edit = good;
  const auto pos = header_edit.find("seed ");
  header_edit[pos + 5] = header_edit[pos + 5] == '9' ? '8' : '9';
  CHECK_THROWS_AS(from_bytes(header_edit), ChecksumError);

  std::string bumped = good;
  bumped.replace(0, std::string("wug-checkpoint 1").size(), "wug-checkpoint 2");
  try {
    from_bytes(bumped);
    FAIL("expected VersionError");
  } catch (const VersionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find('2') != std::string::npos);
    CHECK(msg.find('1') != std::string::npos);
  }

  CHECK_THROWS_AS(from_bytes(good.substr(0, good.size() - 10)), IngestionError);
  CHECK_THROWS_AS(from_bytes(good + "x"), IngestionError);
  CHECK_THROWS_AS(from_bytes("not a checkpoint\n"), IngestionError);
}

TEST_CASE("checkpoint: non-finite parameters are refused") {
  Inflector m = fixture::toy_model(6, 3);
  m.parameters()[0].value[0] = std::nan("");
  CHECK_THROWS_AS(from_bytes(checkpoint_bytes(m, Precision::kFloat64)), NumericError);
}

TEST_CASE("checkpoint files: atomic save, load, missing file") {
  const auto dir = std::filesystem::temp_directory_path() / "wug-unit-ckpt";
  std::filesystem::remove_all(dir);
  const Inflector m = fixture::toy_model(7, 3);
  save_checkpoint(m, dir / "a" / "m.ckpt", Precision::kFloat64);
  CHECK(std::filesystem::exists(dir / "a" / "m.ckpt"));
  CHECK_FALSE(std::filesystem::exists(dir / "a" / "m.ckpt.tmp"));
  CHECK(load_checkpoint(dir / "a" / "m.ckpt").checksum() == m.checksum());
  CHECK_THROWS_AS(load_checkpoint(dir / "missing.ckpt"), IngestionError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("key-value files") {
  std::istringstream ok("# c\na = 1\n b=two words \n");
  const auto kv = read_key_values(ok);
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "two words");
  std::istringstream repeated("a = 1\na = 2\n");
  CHECK_THROWS_AS(read_key_values(repeated), IngestionError);
  std::istringstream malformed("a 1\n");
  CHECK_THROWS_AS(read_key_values(malformed), IngestionError);
}
