#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hww2v/bow.hpp"
#include "hww2v/string_map.hpp"
#include "hww2v/text_prep.hpp"

namespace hww2v {

/// Per-token dense embeddings: one row of `dim` floats per token.
class DictionaryMatrix {
 public:
  DictionaryMatrix() = default;
  DictionaryMatrix(std::uint32_t dim, std::vector<std::string> tokens, std::vector<float> values);

  std::uint32_t dim() const noexcept { return dim_; }
  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(tokens_.size()); }
  const std::string& token(std::uint32_t i) const { return tokens_.at(i); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::optional<std::uint32_t> find(std::string_view key) const;
  std::span<const float> vector(std::uint32_t i) const {
    return {values_.data() + static_cast<std::size_t>(i) * dim_, dim_};
  }
  const std::vector<float>& values() const noexcept { return values_; }
  bool all_finite() const noexcept;

  /// word2vec text format: "count dim" header, then "token v1 ... vN".
  void save_text(std::ostream& out) const;
  /// Accepts files with or without the header line.
  static DictionaryMatrix load_text(std::istream& in);

  bool operator==(const DictionaryMatrix& o) const {
    return dim_ == o.dim_ && tokens_ == o.tokens_ && values_ == o.values_;
  }

 private:
  std::uint32_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<float> values_;
  StringMap<std::uint32_t> index_;
};

struct CbowConfig {
  std::uint32_t dim = 100;
  std::uint32_t window = 5;
  std::uint32_t negative_samples = 5;
  std::uint32_t epochs = 15;
  double initial_lr = 0.025;
  std::uint32_t min_count = 1;
  std::uint64_t seed = 1;
  // 1 = deterministic single worker; >1 = unsynchronized shared updates.
  unsigned workers = 1;
  // Frequent-word subsampling threshold; 0 disables it.
  double subsample = 0.0;

  void validate() const;
};

struct CbowReport {
  std::vector<double> epoch_loss;  // mean negative-sampling loss per prediction
  std::uint64_t words_per_epoch = 0;
};

/// CBOW with negative sampling over each document's token sequence.
DictionaryMatrix train_cbow(std::span<const PreparedDocument> docs, const CbowConfig& config,
                            CbowReport* report = nullptr);

/// f * log(D / D_i); zero when f == 0 or D_i == 0.
double tfidf_weight(std::uint32_t frequency, std::uint32_t total_docs, std::uint32_t doc_freq);

/// Sum over the document's tokens of tfidf_weight * embedding. Tokens without
/// an embedding or without statistics contribute nothing. With `normalize`,
/// the sum is divided by the total weight.
std::vector<double> weighted_doc_vector(const PreparedDocument& doc, const DictionaryMatrix& embeddings,
                                        const DocumentFrequencies& stats, bool normalize = false);

}  // namespace hww2v
