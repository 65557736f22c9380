#include <doctest.h>

#include <fstream>
#include <random>

#include "hww2v/errors.hpp"
#include "hww2v/persistence.hpp"
#include "test_util.hpp"

using namespace hww2v;
using hww2v::test::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

DictionaryMatrix random_matrix(std::uint32_t rows, std::uint32_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<std::string> tokens;
  std::vector<float> values;
  for (std::uint32_t r = 0; r < rows; ++r) {
    tokens.push_back("tok" + std::to_string(r));
    for (std::uint32_t k = 0; k < dim; ++k) values.push_back(g(rng));
  }
  return DictionaryMatrix(dim, std::move(tokens), std::move(values));
}

std::vector<FeatureVector> dense_rows(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  std::vector<FeatureVector> x;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector v{static_cast<std::uint32_t>(dim + 2), 2, {{static_cast<std::uint32_t>(i % 2), 1.5}}, {}};
    for (std::size_t k = 0; k < dim; ++k) v.dense.push_back(u(rng) + (i % 2 ? 0.7 : 0.0));
    x.push_back(std::move(v));
  }
  return x;
}

}  // namespace

TEST_CASE("vocabulary round trip") {
  TempDir dir;
  const Vocabulary v = Vocabulary::from_entries(7, {{"plot", 2}, {"bad", 3}, {"NOT_good", 1}});
  save_vocabulary(v, dir.file("v.bin"));
  const Vocabulary back = load_vocabulary(dir.file("v.bin"));
  CHECK(back == v);
  CHECK(back.index_of("plot") == v.index_of("plot"));
  CHECK(back.idf(0) == v.idf(0));
}

TEST_CASE("embedding matrix round trip is bit-identical") {
  TempDir dir;
  const DictionaryMatrix m = random_matrix(100, 5, 3);
  save_embeddings(m, dir.file("e.bin"));
  CHECK(load_embeddings(dir.file("e.bin")) == m);
  // saving again gives the same bytes
  save_embeddings(load_embeddings(dir.file("e.bin")), dir.file("e2.bin"));
  CHECK(slurp(dir.file("e.bin")) == slurp(dir.file("e2.bin")));
}

TEST_CASE("bundles round trip with every classifier") {
  TempDir dir;
  const auto x = dense_rows(30, 3, 5);
  std::vector<Polarity> y;
  for (std::size_t i = 0; i < x.size(); ++i) y.push_back(i % 2 ? Polarity::Positive : Polarity::Negative);

  auto lexicon = std::make_shared<const LexiconIndex>(
      LexiconIndex::from_rows({{"good", {0.5, 0.5, 0.0, 0.0}}, {"zany", {0.125, 0.75, 0.125, 0.0}}}));
  const std::vector<std::string> keys{"good", "NOT_good"};

  for (const auto kind : {ClassifierKind::NaiveBayes, ClassifierKind::MaxEnt, ClassifierKind::SvmLinear,
                          ClassifierKind::SvmRbf}) {
    ClassifierConfig cc;
    cc.kind = kind;
    ModelBundle b;
    b.metadata = ModelMetadata::from(PrepConfig::defaults());
    b.metadata.scaling = Scaling::UnitL2;
    b.metadata.lexicon_version = "3.0.0";
    b.vocabulary = Vocabulary::from_entries(30, {{"a", 2}, {"b", 5}});
    b.embedding_stats = DocumentFrequencies::from_counts(30, {{"a", 2}, {"b", 5}, {"c", 1}});
    b.embeddings = random_matrix(3, 1, 8);
    b.sentiment = build_sentiment_matrix(lexicon, keys);
    b.classifier = train_classifier(x, y, cc);

    const auto path = dir.file(std::string(to_string(kind)) + ".hww2v");
    save_bundle(b, path);
    const ModelBundle back = load_bundle(path);
    CHECK(back.metadata == b.metadata);
    CHECK(back.vocabulary == b.vocabulary);
    CHECK(back.embedding_stats == b.embedding_stats);
    CHECK(back.embeddings == b.embeddings);
    CHECK(back.sentiment->same_rows(*b.sentiment));
    REQUIRE(back.sentiment->fallback());
    CHECK(*back.sentiment->fallback() == *lexicon);
    CHECK(back.sentiment->row("zany") == b.sentiment->row("zany"));
    CHECK(back.classifier == b.classifier);
    for (const auto& v : x) CHECK(decision_value(*back.classifier, v) == decision_value(*b.classifier, v));
  }
}

TEST_CASE("metadata restores the preprocessing configuration") {
  PrepConfig p = PrepConfig::defaults();
  p.stopwords = {"zeta", "alpha"};
  p.negation_toggle = false;
  const ModelMetadata m = ModelMetadata::from(p);
  CHECK(m.stopwords == std::vector<std::string>{"alpha", "zeta"});
  const PrepConfig q = m.prep_config();
  CHECK(q.stopwords == p.stopwords);
  CHECK(q.negation_cues == p.negation_cues);
  CHECK_FALSE(q.negation_toggle);
}

TEST_CASE("corrupt model files") {
  TempDir dir;
  ModelBundle b;
  b.vocabulary = Vocabulary::from_entries(3, {{"a", 1}});
  save_bundle(b, dir.file("ok.hww2v"));
  const std::string bytes = slurp(dir.file("ok.hww2v"));

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  dir.write("magic.hww2v", bad_magic);
  CHECK_THROWS_WITH_AS(load_bundle(dir.file("magic.hww2v")), doctest::Contains("bad magic"), FormatError);

  std::string bad_version = bytes;
  bad_version[5] = 9;  // first byte of the little-endian version
  dir.write("version.hww2v", bad_version);
  CHECK_THROWS_WITH_AS(load_bundle(dir.file("version.hww2v")), doctest::Contains("9"), FormatError);

  dir.write("short.hww2v", bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(load_bundle(dir.file("short.hww2v")), FormatError);
  dir.write("long.hww2v", bytes + "xx");
  CHECK_THROWS_AS(load_bundle(dir.file("long.hww2v")), FormatError);
  CHECK_THROWS_AS(load_bundle(dir.file("missing.hww2v")), InputError);
  CHECK_THROWS_AS(load_vocabulary(dir.file("magic.hww2v")), FormatError);
}
