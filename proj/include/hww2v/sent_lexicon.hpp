#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hww2v/corpus_io.hpp"
#include "hww2v/string_map.hpp"
#include "hww2v/text_prep.hpp"

namespace hww2v {

/// (positive, objective, negative, unknown) scores.
struct SentimentScores {
  double positive = 0.0;
  double objective = 0.0;
  double negative = 0.0;
  double unknown = 0.0;

  static constexpr SentimentScores all_unknown() { return {0.0, 0.0, 0.0, 1.0}; }
  /// Swaps positive and negative; objective and unknown are unchanged.
  constexpr SentimentScores reversed() const { return {negative, objective, positive, unknown}; }
  constexpr double sum() const { return positive + objective + negative + unknown; }

  bool operator==(const SentimentScores&) const = default;
};

using SentimentFeatures = SentimentScores;

/// Lemma -> mean (pos, obj, neg) over every synset listing that lemma, across
/// all parts of speech. Sense ranks are ignored.
class LexiconIndex {
 public:
  LexiconIndex() = default;
  explicit LexiconIndex(const SentiWordNet& lexicon);
  explicit LexiconIndex(std::span<const LexiconEntry> entries);

  /// Row for a plain (non-negated) surface form; all_unknown() if absent.
  SentimentScores lookup(std::string_view lemma) const;
  std::size_t size() const noexcept { return rows_.size(); }

  std::vector<std::pair<std::string, SentimentScores>> sorted() const;
  static LexiconIndex from_rows(std::vector<std::pair<std::string, SentimentScores>> rows);

  bool operator==(const LexiconIndex&) const = default;

 private:
  StringMap<SentimentScores> rows_;
};

/// Token-key -> sentiment row for a fixed token set. Keys outside the set fall
/// back to the lexicon index when one is attached, else count as unknown.
class SentimentMatrix {
 public:
  SentimentMatrix() = default;

  static SentimentMatrix build(std::shared_ptr<const LexiconIndex> index,
                               std::span<const std::string> token_keys);

  SentimentScores row(std::string_view key) const;
  SentimentScores row(const Token& token) const;

  std::size_t size() const noexcept { return rows_.size(); }
  std::vector<std::pair<std::string, SentimentScores>> sorted_rows() const;
  const std::shared_ptr<const LexiconIndex>& fallback() const noexcept { return index_; }

  static SentimentMatrix from_rows(std::vector<std::pair<std::string, SentimentScores>> rows,
                                   std::shared_ptr<const LexiconIndex> fallback);

  /// Compares materialized rows only.
  bool same_rows(const SentimentMatrix& other) const { return rows_ == other.rows_; }

 private:
  StringMap<SentimentScores> rows_;
  std::shared_ptr<const LexiconIndex> index_;
};

SentimentMatrix build_sentiment_matrix(std::shared_ptr<const LexiconIndex> index,
                                       std::span<const std::string> token_keys);

/// Token-count vector times the matrix, divided by the token count. An empty
/// sentence is all unknown.
SentimentFeatures sentence_sentiment(std::span<const Token> sentence, const SentimentMatrix& matrix);

/// Unweighted mean over sentences; a document with no sentences is all
/// unknown.
SentimentFeatures document_sentiment(const PreparedDocument& doc, const SentimentMatrix& matrix);

/// `label<TAB>positive<TAB>objective<TAB>negative<TAB>unknown` per document.
void dump_sentiment_features(std::ostream& out, std::span<const PreparedDocument> docs,
                             const SentimentMatrix& matrix);

}  // namespace hww2v
