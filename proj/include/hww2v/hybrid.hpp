#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "hww2v/bow.hpp"
#include "hww2v/embedding.hpp"
#include "hww2v/sent_lexicon.hpp"

namespace hww2v {

/// A feature vector with a sparse head and a dense tail:
/// indices [0, dense_offset) are stored sparsely, [dense_offset, dim) densely.
struct FeatureVector {
  std::uint32_t dim = 0;
  std::uint32_t dense_offset = 0;
  std::vector<SparseEntry> sparse;
  std::vector<double> dense;

  double at(std::uint32_t i) const;
  double squared_norm() const noexcept;
  void scale(double factor) noexcept;
  bool same_layout(const FeatureVector& o) const noexcept {
    return dim == o.dim && dense_offset == o.dense_offset;
  }

  bool operator==(const FeatureVector&) const = default;
};

/// Requires matching layouts.
double dot(const FeatureVector& a, const FeatureVector& b);

enum class Representation { SentimentOnly, WeightedW2VOnly, BowOnly, Hybrid };

std::string_view to_string(Representation r) noexcept;
Representation parse_representation(std::string_view name);
bool uses_embeddings(Representation r) noexcept;

enum class Scaling { None, UnitL2 };

std::string_view to_string(Scaling s) noexcept;
Scaling parse_scaling(std::string_view name);

enum class Block { Bow, Embedding, Sentiment };

std::string_view to_string(Block b) noexcept;

struct BlockLayout {
  struct Range {
    Block block;
    std::uint32_t begin;
    std::uint32_t end;

    bool operator==(const Range&) const = default;
  };
  std::vector<Range> ranges;  // fixed order: BoW, embedding, sentiment

  std::uint32_t dim() const noexcept { return ranges.empty() ? 0 : ranges.back().end; }
  /// Offsets (0, b1, ..., dim).
  std::vector<std::uint32_t> boundaries() const;
  std::optional<Range> find(Block b) const;

  bool operator==(const BlockLayout&) const = default;
};

/// Fitted artifacts needed to vectorize; only those used by the requested
/// representation must be set.
struct RepresentationComponents {
  const Vocabulary* vocabulary = nullptr;
  const DictionaryMatrix* embeddings = nullptr;
  const DocumentFrequencies* embedding_stats = nullptr;
  const SentimentMatrix* sentiment = nullptr;
  bool normalize_pool = false;
};

/// Throws ConfigError when an artifact required by `choice` is missing.
BlockLayout layout_for(Representation choice, const RepresentationComponents& components);

FeatureVector assemble(const PreparedDocument& doc, Representation choice,
                       const RepresentationComponents& components, Scaling scaling);

/// The given block as a standalone vector (dimension = block width).
FeatureVector extract_block(const FeatureVector& v, const BlockLayout& layout, Block block);

/// Per-coordinate shift of the dense part that makes training features
/// nonnegative for multinomial Naive Bayes. Values still negative after the
/// shift (test points below the training minimum) are clamped to 0.
class FeatureShift {
 public:
  FeatureShift() = default;
  FeatureShift(std::uint32_t dense_offset, std::vector<double> offsets)
      : dense_offset_(dense_offset), offsets_(std::move(offsets)) {}

  static FeatureShift fit(std::span<const FeatureVector> training);

  void apply(FeatureVector& v) const;
  std::uint32_t dense_offset() const noexcept { return dense_offset_; }
  const std::vector<double>& offsets() const noexcept { return offsets_; }

  bool operator==(const FeatureShift&) const = default;

 private:
  std::uint32_t dense_offset_ = 0;
  std::vector<double> offsets_;
};

/// Sparse text export: '%'-prefixed header lines with the shape and block
/// boundaries, a "%label <row> <+1|-1>" line per row, then "row col value"
/// triplets for the nonzero entries.
void write_feature_matrix(std::ostream& out, std::span<const FeatureVector> rows,
                          std::span<const Polarity> labels, const BlockLayout& layout);

}  // namespace hww2v
