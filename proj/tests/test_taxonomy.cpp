#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "prs/errors.hpp"
#include "prs/taxonomy.hpp"

using namespace prs;

TEST_CASE("inventory shape") {
  const Taxonomy& tax = load_taxonomy();
  CHECK(kVocabSize == 78);
  CHECK(tax.category_size(tax.category_of(tax.find("boy"))) == 7);
  CHECK(tax.category_size(tax.category_of(tax.find("girl"))) == 7);
  CHECK(tax.category_size(tax.category_of(tax.find("clothing"))) == 10);
  CHECK(tax.category_size(tax.category_of(tax.find("large_objects"))) == 10);
  CHECK(tax.category_size(tax.category_of(tax.find("toys"))) == 15);
  CHECK(tax.category_size(tax.category_of(tax.find("food"))) == 7);
  CHECK(tax.category_size(tax.category_of(tax.find("sky_objects"))) == 8);
  CHECK(tax.category_size(tax.category_of(tax.find("animal"))) == 6);

  int total = 0;
  for (int c = 0; c < kNumHypernyms; ++c) total += tax.category_size(c);
  CHECK(total == kNumObjects);
}

TEST_CASE("interning covers the vocabulary exactly once") {
  const Taxonomy& tax = load_taxonomy();
  std::set<std::string> seen;
  for (int t = 0; t < kVocabSize; ++t) {
    CHECK(tax.find(tax.name(t)) == t);
    seen.insert(tax.name(t));
  }
  CHECK(seen.size() == kVocabSize);
  CHECK(tax.find("unicorn") == -1);
  CHECK(tax.find("") == -1);
  CHECK(tax.find(kUnkToken) == -1);
}

TEST_CASE("hypernym lookups") {
  const Taxonomy& tax = load_taxonomy();
  CHECK(tax.hypernym_of("pizza") == "food");
  CHECK(tax.hypernym_of("bear") == "animal");
  CHECK(tax.hypernym_of("mike_kick") == "boy");
  CHECK(tax.hypernym_of("jenny_wave") == "girl");
  CHECK(tax.hypernym_of("wizzard_hat") == "clothing");
  CHECK(tax.hypernym_of("christmas_tree") == "large_objects");
  CHECK(tax.hypernym_of("baseball_poll") == "toys");
  CHECK(tax.hypernym_of("lightening") == "sky_objects");
  // hypernyms map to themselves
  CHECK(tax.hypernym_of("animal") == "animal");
  CHECK(tax.hypernym_of("food") == "food");
  CHECK_THROWS_AS(tax.hypernym_of("dragon"), UnknownTokenError);
  CHECK_THROWS_AS(tax.hypernym_of("[UNK]"), UnknownTokenError);
}

TEST_CASE("interned hypernym_token is idempotent") {
  const Taxonomy& tax = load_taxonomy();
  for (int t = 0; t < kVocabSize; ++t) {
    TokenId h = tax.hypernym_token(t);
    CHECK(tax.is_hypernym(h));
    CHECK(tax.hypernym_token(h) == h);
    CHECK(tax.category_of(t) == tax.category_of(h));
  }
}

TEST_CASE("in_category") {
  const Taxonomy& tax = load_taxonomy();
  CHECK(tax.in_category("dog", "animal"));
  CHECK(tax.in_category("animal", "animal"));
  CHECK_FALSE(tax.in_category("dog", "food"));
  CHECK_FALSE(tax.in_category("[UNK]", "food"));
  CHECK_FALSE(tax.in_category("dragon", "animal"));
  CHECK_THROWS_AS(tax.in_category("dog", "pets"), ConfigError);
  CHECK_THROWS_AS(tax.in_category("dog", "dog"), ConfigError);
}

TEST_CASE("animal category membership") {
  const Taxonomy& tax = load_taxonomy();
  auto inv = tax.inverse();
  std::vector<std::string> animals = {"bear", "cat", "dog", "duck", "owl",
                                      "snake"};
  CHECK(inv.at("animal") == animals);
  CHECK(inv.size() == kNumHypernyms);
  CHECK(tax.mapping().size() == kNumObjects);
}

TEST_CASE("taxonomy TSV file matches the built-in table byte for byte") {
  const Taxonomy& tax = load_taxonomy();
  std::ifstream in(std::string(PRS_DATA_DIR) + "/taxonomy.tsv",
                   std::ios::binary);
  REQUIRE(in.good());
  std::string file((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(file == tax.to_tsv());
}

TEST_CASE("load_taxonomy_file round-trips and validates") {
  const Taxonomy& tax = load_taxonomy();
  const auto dir = std::filesystem::temp_directory_path();
  const std::string good = (dir / "tax_good.tsv").string();
  {
    std::ofstream out(good, std::ios::binary);
    out << tax.to_tsv();
  }
  Taxonomy loaded = load_taxonomy_file(good);
  CHECK(loaded.to_tsv() == tax.to_tsv());

  const std::string bad = (dir / "tax_bad.tsv").string();
  {
    std::ofstream out(bad, std::ios::binary);
    std::string tsv = tax.to_tsv();
    tsv.replace(tsv.find("food"), 4, "feed");
    out << tsv;
  }
  CHECK_THROWS_AS(load_taxonomy_file(bad), ParseError);
  CHECK_THROWS_AS(load_taxonomy_file("no_such_file.tsv"), std::exception);

  const std::string truncated = (dir / "tax_short.tsv").string();
  {
    std::ofstream out(truncated, std::ios::binary);
    std::string tsv = tax.to_tsv();
    out << tsv.substr(0, tsv.find('\n') + 1);
  }
  CHECK_THROWS_AS(load_taxonomy_file(truncated), ParseError);
}
