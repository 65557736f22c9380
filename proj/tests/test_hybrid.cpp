#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "hww2v/errors.hpp"
#include "hww2v/hybrid.hpp"
#include "test_util.hpp"

using namespace hww2v;
using hww2v::test::doc_of;

namespace {

struct Fixture {
  Vocabulary vocab = Vocabulary::from_entries(10, {{"bad", 3}, {"good", 4}, {"plot", 2}});
  DocumentFrequencies stats = DocumentFrequencies::from_counts(10, {{"bad", 3}, {"good", 4}, {"plot", 2}, {"NOT_good", 1}});
  DictionaryMatrix embeddings;
  SentimentMatrix sentiment = SentimentMatrix::from_rows(
      {{"bad", {0.0, 0.25, 0.75, 0.0}}, {"good", {0.625, 0.375, 0.0, 0.0}}, {"NOT_good", {0.0, 0.375, 0.625, 0.0}}},
      nullptr);

  explicit Fixture(std::uint32_t dim = 100) {
    std::vector<float> values;
    for (std::uint32_t t = 0; t < 3; ++t) {
      for (std::uint32_t k = 0; k < dim; ++k) values.push_back(static_cast<float>(t + 1) * 0.01f * static_cast<float>(k % 7));
    }
    embeddings = DictionaryMatrix(dim, {"bad", "good", "plot"}, std::move(values));
  }

  RepresentationComponents components() const { return {&vocab, &embeddings, &stats, &sentiment, false}; }
};

}  // namespace

TEST_CASE("sentiment-only output is the document sentiment") {
  const Fixture f;
  const auto doc = doc_of("good plot | bad NOT_good zzz");
  const FeatureVector v = assemble(doc, Representation::SentimentOnly, f.components(), Scaling::None);
  const SentimentFeatures s = document_sentiment(doc, f.sentiment);
  CHECK(v.dim == 4);
  CHECK(v.dense == std::vector<double>{s.positive, s.objective, s.negative, s.unknown});
  // hand computation: sentence 1 = (0.625, 0.375, 0, 1) / 2, sentence 2 = (0, 0.625, 1.375, 1) / 3
  CHECK(v.dense[0] == doctest::Approx((0.3125 + 0.0) / 2));
  CHECK(v.dense[1] == doctest::Approx((0.1875 + 0.625 / 3) / 2));
  CHECK(v.dense[2] == doctest::Approx((0.0 + 1.375 / 3) / 2));
  CHECK(v.dense[3] == doctest::Approx((0.5 + 1.0 / 3) / 2));
}

TEST_CASE("hybrid layout and block contents") {
  const Fixture f;
  const auto c = f.components();
  const BlockLayout layout = layout_for(Representation::Hybrid, c);
  CHECK(layout.dim() == 107);
  CHECK(layout.boundaries() == std::vector<std::uint32_t>{0, 3, 103, 107});

  const auto doc = doc_of("good good plot | bad");
  const FeatureVector v = assemble(doc, Representation::Hybrid, c, Scaling::None);
  CHECK(v.dim == 107);
  CHECK(v.dense_offset == 3);
  CHECK(v.dense.size() == 104);

  // each block equals the corresponding standalone representation
  const FeatureVector bow = extract_block(v, layout, Block::Bow);
  CHECK(bow.sparse == bow_vector(doc, f.vocab).entries);
  CHECK(extract_block(v, layout, Block::Embedding).dense == weighted_doc_vector(doc, f.embeddings, f.stats));
  const FeatureVector alone = assemble(doc, Representation::SentimentOnly, c, Scaling::None);
  CHECK(extract_block(v, layout, Block::Sentiment).dense == alone.dense);

  CHECK(layout_for(Representation::BowOnly, c).boundaries() == std::vector<std::uint32_t>{0, 3});
  CHECK(layout_for(Representation::WeightedW2VOnly, c).boundaries() == std::vector<std::uint32_t>{0, 100});
}

TEST_CASE("extract_block round-trips every block exactly") {
  const Fixture f(6);
  const auto c = f.components();
  const BlockLayout layout = layout_for(Representation::Hybrid, c);
  const auto doc = doc_of("bad plot NOT_good | good");
  const FeatureVector v = assemble(doc, Representation::Hybrid, c, Scaling::UnitL2);
  std::vector<double> rebuilt(v.dim, 0.0);
  for (const auto& r : layout.ranges) {
    const FeatureVector b = extract_block(v, layout, r.block);
    CHECK(b.dim == r.end - r.begin);
    for (std::uint32_t k = 0; k < b.dim; ++k) rebuilt[r.begin + k] = b.at(k);
  }
  for (std::uint32_t i = 0; i < v.dim; ++i) CHECK(rebuilt[i] == v.at(i));
}

TEST_CASE("unit-l2 scaling") {
  const Vocabulary vocab;
  const DocumentFrequencies stats = DocumentFrequencies::from_counts(4, {{"a", 1}});
  const DictionaryMatrix emb(2, {"a"}, {3.0f, 4.0f});
  const RepresentationComponents c{&vocab, &emb, &stats, nullptr, true};
  const FeatureVector v = assemble(doc_of("a a"), Representation::WeightedW2VOnly, c, Scaling::UnitL2);
  CHECK(v.dense[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(v.dense[1] == doctest::Approx(0.8).epsilon(1e-12));

  const FeatureVector zero = assemble(doc_of("zzz"), Representation::WeightedW2VOnly, c, Scaling::UnitL2);
  CHECK(zero.dense == std::vector<double>{0.0, 0.0});

  const Fixture f;
  for (const char* text : {"good plot", "bad | NOT_good good", "plot"}) {
    const FeatureVector h = assemble(doc_of(text), Representation::Hybrid, f.components(), Scaling::UnitL2);
    CHECK(std::abs(std::sqrt(h.squared_norm()) - 1.0) < 1e-9);
  }
}

TEST_CASE("missing artifacts") {
  const Fixture f;
  RepresentationComponents c = f.components();
  c.sentiment = nullptr;
  CHECK_THROWS_AS(layout_for(Representation::Hybrid, c), ConfigError);
  CHECK_NOTHROW(layout_for(Representation::BowOnly, c));
  c = f.components();
  c.embeddings = nullptr;
  CHECK_THROWS_AS(assemble(doc_of("good"), Representation::WeightedW2VOnly, c, Scaling::None), ConfigError);
  c = f.components();
  c.vocabulary = nullptr;
  CHECK_THROWS_AS(layout_for(Representation::BowOnly, c), ConfigError);
  CHECK_THROWS_AS(parse_representation("tfidf"), ConfigError);
  CHECK(parse_representation("hybrid") == Representation::Hybrid);
}

TEST_CASE("dot and norm across the sparse head and dense tail") {
  FeatureVector a{5, 2, {{0, 1.0}, {1, -2.0}}, {1.0, 0.0, 3.0}};
  FeatureVector b{5, 2, {{1, 4.0}}, {2.0, 5.0, -1.0}};
  CHECK(dot(a, b) == doctest::Approx(-8.0 + 2.0 - 3.0));
  CHECK(a.squared_norm() == doctest::Approx(1 + 4 + 1 + 9));
  CHECK(a.at(1) == -2.0);
  CHECK(a.at(4) == 3.0);
  FeatureVector c{5, 3, {}, {0, 0}};
  CHECK_THROWS_AS(dot(a, c), ConfigError);
}

TEST_CASE("feature shift") {
  const std::vector<FeatureVector> train{
      FeatureVector{3, 1, {{0, 2.0}}, {-0.5, 1.0}},
      FeatureVector{3, 1, {}, {0.25, 2.0}},
  };
  const FeatureShift s = FeatureShift::fit(train);
  CHECK(s.offsets() == std::vector<double>{0.5, 0.0});
  FeatureVector t{3, 1, {{0, 1.0}}, {-2.0, 0.5}};
  s.apply(t);
  CHECK(t.dense == std::vector<double>{0.0, 0.5});  // below the training minimum clamps to 0
  CHECK(t.sparse == std::vector<SparseEntry>{{0, 1.0}});
  FeatureVector wrong{4, 1, {}, {1, 2, 3}};
  CHECK_THROWS_AS(s.apply(wrong), ConfigError);
}

TEST_CASE("feature matrix export") {
  const Fixture f(2);
  const auto c = f.components();
  const BlockLayout layout = layout_for(Representation::BowOnly, c);
  const std::vector<FeatureVector> rows{assemble(doc_of("good"), Representation::BowOnly, c, Scaling::None),
                                        assemble(doc_of("zzz"), Representation::BowOnly, c, Scaling::None)};
  const std::vector<Polarity> labels{Polarity::Positive, Polarity::Negative};
  std::ostringstream out;
  write_feature_matrix(out, rows, labels, layout);
  char idf[64];
  std::snprintf(idf, sizeof idf, "%.17g", std::log(10.0 / 4.0));
  CHECK(out.str() == std::string("%hww2v-features 1\n%rows 2 cols 3\n%blocks bow:0:3\n%label 0 +1\n0 1 ") + idf +
                         "\n%label 1 -1\n");
}
