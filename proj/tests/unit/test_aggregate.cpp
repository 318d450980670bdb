#include <filesystem>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "wug/aggregate/production.hpp"
#include "wug/errors.hpp"

using namespace wug;
using namespace wug::agg;

namespace {

PhonemeSequence ph(const char* s) { return parse_phonemes(s); }

NonceItem item(const std::string& id, NonceCategory cat, double reg, double irr1, std::optional<double> irr2 = {}) {
  NonceItem it;
  it.id = id;
  it.category = cat;
  it.present = {"a"};
  it.forms.push_back({FormRole::kRegular, "", ph("a d"), reg, {}});
  it.forms.push_back({FormRole::kIrregular1, "", ph("b"), irr1, {}});
  if (irr2) it.forms.push_back({FormRole::kIrregular2, "", ph("c"), *irr2, {}});
  it.other = 1.0 - reg - irr1 - irr2.value_or(0.0);
  return it;
}

ProductionCounts counts(std::size_t r, std::size_t i1, std::size_t i2, std::size_t o) {
  ProductionCounts c;
  c.regular = r;
  c.irregular1 = i1;
  c.irregular2 = i2;
  c.other = o;
  return c;
}

std::filesystem::path scratch(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("categorize: exact match by role, truncation is other") {
  const NonceItem it = item("x", NonceCategory::kIorBoth, 0.5, 0.3, 0.2);
  CHECK(categorize(it, {ph("a d"), false}) == Outcome::kRegular);
  CHECK(categorize(it, {ph("b"), false}) == Outcome::kIrregular1);
  CHECK(categorize(it, {ph("c"), false}) == Outcome::kIrregular2);
  CHECK(categorize(it, {ph("a"), false}) == Outcome::kOther);
  CHECK(categorize(it, {ph("a d d"), false}) == Outcome::kOther);
  CHECK(categorize(it, {ph("a d"), true}) == Outcome::kOther);
}

TEST_CASE("production counts add up") {
  ProductionCounts c;
  c.add(Outcome::kRegular);
  c.add(Outcome::kRegular);
  c.add(Outcome::kIrregular2);
  c.add(Outcome::kOther);
  CHECK(c.regular == 2);
  CHECK(c.irregular2 == 1);
  CHECK(c.total() == 4);
  c += counts(1, 2, 3, 4);
  CHECK(c.total() == 14);
  CHECK(c.irregular1 == 2);
}

TEST_CASE("tabulate: shares sum to one, totals, seed order does not matter") {
  const std::vector<NonceItem> items = {item("p", NonceCategory::kIorBoth, 0.6, 0.4),
                                        item("q", NonceCategory::kAnalogy, 0.5, 0.3, 0.2)};
  const std::vector<std::uint64_t> seeds{3, 1, 2};
  const std::vector<std::vector<ProductionCounts>> per_seed = {{counts(5, 3, 0, 2), counts(1, 1, 7, 1)},
                                                               {counts(10, 0, 0, 0), counts(0, 0, 0, 10)},
                                                               {counts(0, 9, 0, 1), counts(2, 2, 2, 4)}};
  const ProductionTable t = tabulate(items, seeds, per_seed, 10);
  CHECK(t.seeds == std::vector<std::uint64_t>{1, 2, 3});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].id == "p");
  CHECK_FALSE(t.rows[0].has_irregular2);
  CHECK(t.rows[1].has_irregular2);
  CHECK(t.rows[1].category == NonceCategory::kAnalogy);
  for (const auto& r : t.rows) {
    CHECK(r.counts.total() == 30);
    const auto& s = r.shares;
    CHECK(s.regular + s.irregular1 + s.irregular2 + s.other == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(t.rows[0].shares.regular == doctest::Approx(15.0 / 30));
  CHECK(t.rows[0].shares.irregular1 == doctest::Approx(12.0 / 30));
  CHECK(t.rows[1].shares.other == doctest::Approx(15.0 / 30));

  const std::vector<std::uint64_t> reversed{2, 1, 3};
  const std::vector<std::vector<ProductionCounts>> swapped = {per_seed[1], per_seed[2], per_seed[0]};
  const ProductionTable u = tabulate(items, reversed, swapped, 10);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(u.rows[i].shares.regular == t.rows[i].shares.regular);
    CHECK(u.rows[i].shares.irregular1 == t.rows[i].shares.irregular1);
    CHECK(u.rows[i].shares.irregular2 == t.rows[i].shares.irregular2);
    CHECK(u.rows[i].shares.other == t.rows[i].shares.other);
  }
  CHECK(t.share_table().at("q").irregular2 == doctest::Approx(9.0 / 30));

  const std::vector<std::vector<ProductionCounts>> short_one = {{counts(1, 0, 0, 0)}};
  const std::vector<std::uint64_t> one{1};
  CHECK_THROWS_AS(tabulate(items, one, short_one, 1), DimensionError);
  CHECK_THROWS_AS(tabulate(items, seeds, short_one, 1), DimensionError);
}

TEST_CASE("compare_to_humans: copied human shares give rho 1 and matching preferences") {
  const std::vector<NonceItem> items = {item("a", NonceCategory::kIorBoth, 0.7, 0.2, 0.05),
                                        item("b", NonceCategory::kIorIrregular, 0.3, 0.6),
                                        item("c", NonceCategory::kAnalogy, 0.5, 0.1, 0.3),
                                        item("d", NonceCategory::kIorRegular, 0.9, 0.05)};
  ProductionTable t;
  for (const auto& it : items) {
    ProductionRow r;
    r.id = it.id;
    r.shares = eval::human_shares(it);
    t.rows.push_back(r);
  }
  const HumanComparison h = compare_to_humans(t, items);
  CHECK(*h.regular_rho == doctest::Approx(1.0));
  CHECK(*h.irregular_rho == doctest::Approx(1.0));
  CHECK(h.model_prefers_irregular == h.human_prefers_irregular);
  CHECK(h.human_prefers_irregular == std::vector<bool>{false, true, false, false});
  CHECK(h.disagreements() == 0);

  std::vector<NonceItem> extra = items;
  extra.push_back(item("zz", NonceCategory::kIorBoth, 0.5, 0.5));
  CHECK_THROWS_AS(compare_to_humans(t, extra), ContractError);
}

TEST_CASE("compare_to_humans: hand 3-item fixture") {
  const std::vector<NonceItem> items = {item("a", NonceCategory::kIorBoth, 0.8, 0.1),
                                        item("b", NonceCategory::kIorBoth, 0.5, 0.4),
                                        item("c", NonceCategory::kIorBoth, 0.2, 0.7)};
  ProductionTable t;
  const double model_reg[] = {0.3, 0.9, 0.6};
  const double model_irr[] = {0.6, 0.05, 0.3};
  for (std::size_t i = 0; i < 3; ++i) {
    ProductionRow r;
    r.id = items[i].id;
    r.shares.regular = model_reg[i];
    r.shares.irregular1 = model_irr[i];
    r.shares.other = 1 - model_reg[i] - model_irr[i];
    t.rows.push_back(r);
  }
  const HumanComparison h = compare_to_humans(t, items);
  // regular: model ranks (1,3,2), human (3,2,1): sum d^2 = 4+1+1 = 6 -> 1 - 36/24
  CHECK(*h.regular_rho == doctest::Approx(-0.5));
  CHECK(*h.regular_rho == doctest::Approx(*oracle::spearman({0.3, 0.9, 0.6}, {0.8, 0.5, 0.2})));
  CHECK(*h.irregular_rho == doctest::Approx(*oracle::spearman({0.6, 0.05, 0.3}, {0.1, 0.4, 0.7})));
  CHECK(h.model_prefers_irregular == std::vector<bool>{true, false, false});
  CHECK(h.human_prefers_irregular == std::vector<bool>{false, false, true});
  CHECK(h.disagreements() == 2);
}

TEST_CASE("one-hot model, one seed: every sample lands in one cell") {
  Inflector m(fixture::letters(3), fixture::small_hp(4, 4, 4));
  m.fill_parameters(0.0);
  auto& bias = m.parameters()[m.layout().out_bias].value;
  bias[0] = 200.0;  // EOS at once: the empty form
  NonceItem it = item("e", NonceCategory::kIorBoth, 0.5, 0.5);
  it.forms[1].phonemes = {};
  const std::vector<NonceItem> items{it};
  const auto c = sample_productions(m, items, 50);
  REQUIRE(c.size() == 1);
  CHECK(c[0].irregular1 == 50);
  const std::vector<std::uint64_t> seeds{4};
  const std::vector<std::vector<ProductionCounts>> per_seed{c};
  const ProductionTable t = tabulate(items, seeds, per_seed, 50);
  CHECK(t.rows[0].shares.irregular1 == 1.0);

  bias[0] = 0.0;
  bias[1] = 200.0;  // "a" forever, truncated
  const auto d = sample_productions(m, items, 20);
  CHECK(d[0].other == 20);
}

TEST_CASE("run_participants: checkpoints reused, workers do not matter, seed mismatch caught") {
  const std::vector<VerbEntry> corpus = {{"ab", ph("a b"), ph("a b d"), VerbClass::kRegular, {}},
                                         {"ba", ph("b a"), ph("b a d"), VerbClass::kRegular, {}},
                                         {"aa", ph("a a"), ph("a"), VerbClass::kIrregular, {}}};
  NonceItem it;
  it.id = "bb";
  it.present = ph("b b");
  it.category = NonceCategory::kIorBoth;
  it.forms = {{FormRole::kRegular, "", ph("b b d"), 0.6, {}}, {FormRole::kIrregular1, "", ph("b"), 0.4, {}}};
  const std::vector<NonceItem> items{it};
  Vocabulary vocab({"a", "b", "d"});
  HyperParams hp = fixture::small_hp(0, 4, 4);
  hp.epochs = 2;

  const auto dir = scratch("wug-test-participants");
  ParticipantOptions opt;
  opt.seeds = {2, 1};
  opt.samples = 30;
  opt.checkpoint_for = [&](std::uint64_t s) { return dir / ("seed" + std::to_string(s) + ".ckpt"); };
  const ProductionTable first = run_participants(corpus, items, vocab, hp, opt);
  CHECK(std::filesystem::exists(dir / "seed1.ckpt"));
  CHECK(std::filesystem::exists(dir / "seed2.ckpt"));
  CHECK(first.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(first.rows[0].counts.total() == 60);

  opt.workers = 2;
  const ProductionTable again = run_participants(corpus, items, vocab, hp, opt);
  CHECK(again.rows[0].shares.regular == first.rows[0].shares.regular);
  CHECK(again.rows[0].shares.other == first.rows[0].shares.other);

  ParticipantOptions fresh = opt;
  fresh.checkpoint_for = nullptr;
  fresh.workers = 1;
  const ProductionTable trained = run_participants(corpus, items, vocab, hp, fresh);
  // f32 checkpoints round the weights; counts may move, totals may not
  CHECK(trained.rows[0].counts.total() == 60);

  std::filesystem::copy_file(dir / "seed1.ckpt", dir / "seed2.ckpt", std::filesystem::copy_options::overwrite_existing);
  CHECK_THROWS_AS(run_participants(corpus, items, vocab, hp, opt), ProvenanceError);

  ParticipantOptions dup = fresh;
  dup.seeds = {1, 1};
  CHECK_THROWS_AS(run_participants(corpus, items, vocab, hp, dup), ValidationError);
  dup.seeds.clear();
  CHECK_THROWS_AS(run_participants(corpus, items, vocab, hp, dup), ValidationError);
  std::filesystem::remove_all(dir);
}
