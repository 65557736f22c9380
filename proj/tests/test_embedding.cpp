#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hww2v/embedding.hpp"
#include "hww2v/errors.hpp"
#include "test_util.hpp"

using namespace hww2v;
using hww2v::test::doc_of;

namespace {

double cosine(std::span<const float> a, std::span<const float> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

std::vector<PreparedDocument> temperature_corpus() {
  // hot and warm share their contexts; cold has its own
  std::mt19937 rng(11);
  const std::vector<std::string> summer{"sun", "summer", "beach", "sand", "bright"};
  const std::vector<std::string> winter{"snow", "winter", "ice", "frost", "dark"};
  std::vector<PreparedDocument> docs;
  for (int i = 0; i < 300; ++i) {
    const int kind = i % 3;
    const auto& ctx = kind == 2 ? winter : summer;
    const std::string center = kind == 0 ? "hot" : kind == 1 ? "warm" : "cold";
    std::string s;
    for (int k = 0; k < 3; ++k) s += ctx[rng() % ctx.size()] + " ";
    s += center;
    for (int k = 0; k < 3; ++k) s += " " + ctx[rng() % ctx.size()];
    docs.push_back(doc_of(s));
  }
  return docs;
}

}  // namespace

TEST_CASE("tfidf_weight") {
  CHECK(tfidf_weight(2, 3, 1) == doctest::Approx(2.0 * 1.0986122886681098));
  CHECK(tfidf_weight(5, 4, 4) == 0.0);
  CHECK(tfidf_weight(0, 4, 1) == 0.0);
  CHECK(tfidf_weight(1, 4, 0) == 0.0);
}

TEST_CASE("weighted_doc_vector on hand-made embeddings") {
  const DictionaryMatrix v(2, {"a", "b", "t"}, {1.0f, 2.0f, -1.0f, 0.5f, 3.0f, -4.0f});
  const std::vector<PreparedDocument> corpus{doc_of("t a b"), doc_of("x")};
  const DocumentFrequencies stats(corpus);
  const double l2 = std::log(2.0);

  const auto single = weighted_doc_vector(doc_of("t"), v, stats);
  CHECK(single[0] == doctest::Approx(3.0 * l2));
  CHECK(single[1] == doctest::Approx(-4.0 * l2));

  // a and b share IDF log 2
  const auto two = weighted_doc_vector(doc_of("a b"), v, stats);
  CHECK(two[0] == doctest::Approx(l2 * (1.0 - 1.0)));
  CHECK(two[1] == doctest::Approx(l2 * (2.0 + 0.5)));

  const auto empty = weighted_doc_vector(PreparedDocument{}, v, stats);
  CHECK(empty == std::vector<double>{0.0, 0.0});
  CHECK(weighted_doc_vector(doc_of("unknown"), v, stats) == std::vector<double>{0.0, 0.0});

  const auto avg = weighted_doc_vector(doc_of("a b"), v, stats, true);
  CHECK(avg[1] == doctest::Approx((2.0 + 0.5) / 2.0));
}

TEST_CASE("pooling is linear in documents and scales with frequencies") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "NOT_a"};
  std::vector<float> values(words.size() * 4);
  for (auto& x : values) x = u(rng);
  const DictionaryMatrix v(4, words, values);
  const std::vector<PreparedDocument> corpus{doc_of("a b"), doc_of("c d e"), doc_of("a NOT_a"), doc_of("e")};
  const DocumentFrequencies stats(corpus);

  for (int trial = 0; trial < 20; ++trial) {
    std::string s1, s2;
    for (int k = 0; k < 6; ++k) s1 += words[rng() % words.size()] + " ";
    for (int k = 0; k < 4; ++k) s2 += words[rng() % words.size()] + " ";
    const auto a = weighted_doc_vector(doc_of(s1), v, stats);
    const auto b = weighted_doc_vector(doc_of(s2), v, stats);
    const auto ab = weighted_doc_vector(doc_of(s1 + "| " + s2), v, stats);
    const auto a3 = weighted_doc_vector(doc_of(s1 + s1 + s1), v, stats);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(ab[k] == doctest::Approx(a[k] + b[k]).epsilon(1e-12));
      CHECK(a3[k] == doctest::Approx(3.0 * a[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("CBOW separates tokens by shared context") {
  CbowConfig cfg;
  cfg.dim = 20;
  cfg.epochs = 20;
  cfg.window = 3;
  CbowReport report;
  const DictionaryMatrix m = train_cbow(temperature_corpus(), cfg, &report);
  const auto hot = m.vector(*m.find("hot"));
  const auto warm = m.vector(*m.find("warm"));
  const auto cold = m.vector(*m.find("cold"));
  CHECK(cosine(hot, warm) > cosine(hot, cold));
  REQUIRE(report.epoch_loss.size() == 20);
  CHECK(report.epoch_loss.back() < report.epoch_loss.front());
  CHECK(m.all_finite());
}

TEST_CASE("CBOW is reproducible with one worker") {
  CbowConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 3;
  const auto docs = temperature_corpus();
  CHECK(train_cbow(docs, cfg) == train_cbow(docs, cfg));
  cfg.seed = 2;
  const auto other = train_cbow(docs, cfg);
  cfg.seed = 1;
  CHECK_FALSE(train_cbow(docs, cfg) == other);
}

TEST_CASE("CBOW with several workers still gives finite vectors") {
  CbowConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 2;
  cfg.workers = 3;
  CHECK(train_cbow(temperature_corpus(), cfg).all_finite());
}

TEST_CASE("CBOW edge cases") {
  CbowConfig cfg;
  cfg.dim = 5;
  cfg.epochs = 1;
  const std::vector<PreparedDocument> one{doc_of("just one short sentence")};
  CHECK(train_cbow(one, cfg).size() == 4);
  cfg.epochs = 0;
  CHECK_THROWS_AS(train_cbow(one, cfg), ConfigError);
  cfg.epochs = 1;
  cfg.min_count = 5;
  CHECK_THROWS_AS(train_cbow(one, cfg), ConfigError);
  cfg.min_count = 1;
  cfg.dim = 0;
  CHECK_THROWS_AS(train_cbow(one, cfg), ConfigError);
}

TEST_CASE("word2vec text format round trip") {
  CbowConfig cfg;
  cfg.dim = 6;
  cfg.epochs = 2;
  const DictionaryMatrix m = train_cbow(temperature_corpus(), cfg);
  std::stringstream io;
  m.save_text(io);
  CHECK(DictionaryMatrix::load_text(io) == m);

  std::istringstream headerless("x 1 2\ny 3 4\n");
  const DictionaryMatrix h = DictionaryMatrix::load_text(headerless);
  CHECK(h.dim() == 2);
  CHECK(h.size() == 2);
  CHECK(h.vector(*h.find("y"))[1] == 4.0f);
}
