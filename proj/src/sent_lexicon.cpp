#include "hww2v/sent_lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

namespace hww2v {

LexiconIndex::LexiconIndex(const SentiWordNet& lexicon) : LexiconIndex(std::span(lexicon.entries)) {}

LexiconIndex::LexiconIndex(std::span<const LexiconEntry> entries) {
  struct Acc {
    double pos = 0, neg = 0;
    std::size_t n = 0;
  };
  std::unordered_map<std::string, Acc> acc;
  for (const auto& e : entries) {
    for (const auto& term : e.terms) {
      std::string lemma = term.lemma;
      for (auto& c : lemma) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      auto& a = acc[lemma];
      a.pos += e.pos_score;
      a.neg += e.neg_score;
      ++a.n;
    }
  }
  rows_.reserve(acc.size());
  for (const auto& [lemma, a] : acc) {
    const double n = static_cast<double>(a.n);
    const double pos = a.pos / n;
    const double neg = a.neg / n;
    rows_.emplace(lemma, SentimentScores{pos, 1.0 - pos - neg, neg, 0.0});
  }
}

SentimentScores LexiconIndex::lookup(std::string_view lemma) const {
  const auto it = rows_.find(lemma);
  return it == rows_.end() ? SentimentScores::all_unknown() : it->second;
}

std::vector<std::pair<std::string, SentimentScores>> LexiconIndex::sorted() const {
  std::vector<std::pair<std::string, SentimentScores>> out(rows_.begin(), rows_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

LexiconIndex LexiconIndex::from_rows(std::vector<std::pair<std::string, SentimentScores>> rows) {
  LexiconIndex idx;
  for (auto& [k, v] : rows) idx.rows_.emplace(std::move(k), v);
  return idx;
}

namespace {

SentimentScores row_from_index(const LexiconIndex& index, const Token& token) {
  const auto base = index.lookup(token.surface);
  return token.negated ? base.reversed() : base;
}

}  // namespace

SentimentMatrix SentimentMatrix::build(std::shared_ptr<const LexiconIndex> index,
                                       std::span<const std::string> token_keys) {
  SentimentMatrix m;
  m.index_ = std::move(index);
  m.rows_.reserve(token_keys.size());
  for (const auto& key : token_keys) {
    const auto token = Token::from_key(key);
    m.rows_.emplace(key, m.index_ ? row_from_index(*m.index_, token) : SentimentScores::all_unknown());
  }
  return m;
}

SentimentScores SentimentMatrix::row(std::string_view key) const {
  if (const auto it = rows_.find(key); it != rows_.end()) return it->second;
  if (index_) return row_from_index(*index_, Token::from_key(key));
  return SentimentScores::all_unknown();
}

SentimentScores SentimentMatrix::row(const Token& token) const {
  if (const auto it = rows_.find(token.key()); it != rows_.end()) return it->second;
  if (index_) return row_from_index(*index_, token);
  return SentimentScores::all_unknown();
}

std::vector<std::pair<std::string, SentimentScores>> SentimentMatrix::sorted_rows() const {
  std::vector<std::pair<std::string, SentimentScores>> out(rows_.begin(), rows_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

SentimentMatrix SentimentMatrix::from_rows(std::vector<std::pair<std::string, SentimentScores>> rows,
                                           std::shared_ptr<const LexiconIndex> fallback) {
  SentimentMatrix m;
  m.index_ = std::move(fallback);
  for (auto& [k, v] : rows) m.rows_.emplace(std::move(k), v);
  return m;
}

SentimentMatrix build_sentiment_matrix(std::shared_ptr<const LexiconIndex> index,
                                       std::span<const std::string> token_keys) {
  return SentimentMatrix::build(std::move(index), token_keys);
}

SentimentFeatures sentence_sentiment(std::span<const Token> sentence, const SentimentMatrix& matrix) {
  if (sentence.empty()) return SentimentScores::all_unknown();
  // Count vector first so the dot product runs over distinct tokens in a fixed
  // order.
  std::map<std::string, std::size_t> counts;
  for (const auto& t : sentence) ++counts[t.key()];
  SentimentScores acc;
  for (const auto& [key, c] : counts) {
    const auto r = matrix.row(key);
    const auto w = static_cast<double>(c);
    acc.positive += w * r.positive;
    acc.objective += w * r.objective;
    acc.negative += w * r.negative;
    acc.unknown += w * r.unknown;
  }
  const auto n = static_cast<double>(sentence.size());
  return {acc.positive / n, acc.objective / n, acc.negative / n, acc.unknown / n};
}

SentimentFeatures document_sentiment(const PreparedDocument& doc, const SentimentMatrix& matrix) {
  if (doc.sentences.empty()) return SentimentScores::all_unknown();
  SentimentScores acc;
  for (const auto& sentence : doc.sentences) {
    const auto s = sentence_sentiment(sentence, matrix);
    acc.positive += s.positive;
    acc.objective += s.objective;
    acc.negative += s.negative;
    acc.unknown += s.unknown;
  }
  const auto n = static_cast<double>(doc.sentences.size());
  return {acc.positive / n, acc.objective / n, acc.negative / n, acc.unknown / n};
}

void dump_sentiment_features(std::ostream& out, std::span<const PreparedDocument> docs,
                             const SentimentMatrix& matrix) {
  char buf[128];
  for (const auto& doc : docs) {
    const auto f = document_sentiment(doc, matrix);
    std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f\t%.6f\t%.6f\n", f.positive, f.objective, f.negative, f.unknown);
    out << to_string(doc.label) << buf;
  }
}

}  // namespace hww2v
