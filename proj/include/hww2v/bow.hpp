#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hww2v/string_map.hpp"
#include "hww2v/text_prep.hpp"

namespace hww2v {

struct SparseEntry {
  std::uint32_t index = 0;
  double value = 0.0;

  bool operator==(const SparseEntry&) const = default;
};

/// Sorted by index, no explicit zeros.
struct SparseVector {
  std::uint32_t dimension = 0;
  std::vector<SparseEntry> entries;

  bool operator==(const SparseVector&) const = default;
};

/// Distinct token keys of a document, sorted.
std::vector<std::string> distinct_keys(const PreparedDocument& doc);

/// Per-token document frequencies over a document collection, without any
/// pruning. Used as the IDF statistics of the embedding pooling.
class DocumentFrequencies {
 public:
  DocumentFrequencies() = default;
  explicit DocumentFrequencies(std::span<const PreparedDocument> docs);

  std::uint32_t total_docs() const noexcept { return total_docs_; }
  /// 0 for tokens never seen.
  std::uint32_t of(std::string_view key) const;
  std::size_t size() const noexcept { return freq_.size(); }

  /// Sorted (key, df) pairs, for dumps and persistence.
  std::vector<std::pair<std::string, std::uint32_t>> sorted() const;
  static DocumentFrequencies from_counts(std::uint32_t total_docs,
                                         std::vector<std::pair<std::string, std::uint32_t>> counts);

  bool operator==(const DocumentFrequencies&) const = default;

 private:
  std::uint32_t total_docs_ = 0;
  StringMap<std::uint32_t> freq_;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Keeps tokens with min_df <= D_i <= floor(max_df_ratio * D); indices
  /// follow lexicographic order of the token keys.
  static Vocabulary build(std::span<const PreparedDocument> docs, std::uint32_t min_df,
                          double max_df_ratio);
  static Vocabulary from_frequencies(const DocumentFrequencies& df, std::uint32_t min_df,
                                     double max_df_ratio);
  /// Tokens must be unique; they are sorted on construction.
  static Vocabulary from_entries(std::uint32_t total_docs,
                                 std::vector<std::pair<std::string, std::uint32_t>> entries);

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(tokens_.size()); }
  std::uint32_t total_docs() const noexcept { return total_docs_; }
  const std::string& token(std::uint32_t i) const { return tokens_.at(i); }
  std::uint32_t doc_freq(std::uint32_t i) const { return doc_freq_.at(i); }
  std::optional<std::uint32_t> index_of(std::string_view key) const;
  /// log(D / D_i), natural log.
  double idf(std::uint32_t i) const;

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  /// `token<TAB>index<TAB>df` per line.
  void dump(std::ostream& out) const;

  bool operator==(const Vocabulary& o) const {
    return total_docs_ == o.total_docs_ && tokens_ == o.tokens_ && doc_freq_ == o.doc_freq_;
  }

 private:
  void rebuild_index();

  std::uint32_t total_docs_ = 0;
  std::vector<std::string> tokens_;
  std::vector<std::uint32_t> doc_freq_;
  StringMap<std::uint32_t> index_;
};

Vocabulary build_vocabulary(std::span<const PreparedDocument> docs, std::uint32_t min_df,
                            double max_df_ratio);

/// Binary term presence times IDF; out-of-vocabulary tokens are ignored and
/// zero-IDF terms are left out.
SparseVector bow_vector(const PreparedDocument& doc, const Vocabulary& vocab);

}  // namespace hww2v
