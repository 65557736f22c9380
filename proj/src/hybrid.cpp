#include "hww2v/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "hww2v/errors.hpp"

namespace hww2v {

double FeatureVector::at(std::uint32_t i) const {
  if (i >= dim) throw std::out_of_range("feature index out of range");
  if (i >= dense_offset) return dense[i - dense_offset];
  const auto it = std::lower_bound(sparse.begin(), sparse.end(), i,
                                   [](const SparseEntry& e, std::uint32_t idx) { return e.index < idx; });
  return (it != sparse.end() && it->index == i) ? it->value : 0.0;
}

double FeatureVector::squared_norm() const noexcept {
  double s = 0.0;
  for (const auto& e : sparse) s += e.value * e.value;
  for (const double d : dense) s += d * d;
  return s;
}

void FeatureVector::scale(double factor) noexcept {
  for (auto& e : sparse) e.value *= factor;
  for (auto& d : dense) d *= factor;
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  if (!a.same_layout(b)) throw ConfigError("feature vectors have different layouts");
  double s = 0.0;
  auto i = a.sparse.begin();
  auto j = b.sparse.begin();
  while (i != a.sparse.end() && j != b.sparse.end()) {
    if (i->index < j->index) {
      ++i;
    } else if (j->index < i->index) {
      ++j;
    } else {
      s += i->value * j->value;
      ++i;
      ++j;
    }
  }
  const std::size_t n = a.dense.size();
  const double* x = a.dense.data();
  const double* y = b.dense.data();
  for (std::size_t k = 0; k < n; ++k) s += x[k] * y[k];
  return s;
}

std::string_view to_string(Representation r) noexcept {
  switch (r) {
    case Representation::SentimentOnly: return "sentiment";
    case Representation::WeightedW2VOnly: return "w2v";
    case Representation::BowOnly: return "bow";
    case Representation::Hybrid: return "hybrid";
  }
  return "?";
}

Representation parse_representation(std::string_view name) {
  if (name == "sentiment") return Representation::SentimentOnly;
  if (name == "w2v") return Representation::WeightedW2VOnly;
  if (name == "bow") return Representation::BowOnly;
  if (name == "hybrid" || name == "hww2v") return Representation::Hybrid;
  throw ConfigError("unknown representation '" + std::string(name) + "' (expected sentiment|w2v|bow|hybrid)");
}

bool uses_embeddings(Representation r) noexcept {
  return r == Representation::WeightedW2VOnly || r == Representation::Hybrid;
}

std::string_view to_string(Scaling s) noexcept { return s == Scaling::UnitL2 ? "unit-l2" : "none"; }

Scaling parse_scaling(std::string_view name) {
  if (name == "none") return Scaling::None;
  if (name == "unit-l2" || name == "l2") return Scaling::UnitL2;
  throw ConfigError("unknown scaling '" + std::string(name) + "' (expected none|unit-l2)");
}

std::string_view to_string(Block b) noexcept {
  switch (b) {
    case Block::Bow: return "bow";
    case Block::Embedding: return "embedding";
    case Block::Sentiment: return "sentiment";
  }
  return "?";
}

std::vector<std::uint32_t> BlockLayout::boundaries() const {
  std::vector<std::uint32_t> out{0};
  for (const auto& r : ranges) out.push_back(r.end);
  return out;
}

std::optional<BlockLayout::Range> BlockLayout::find(Block b) const {
  for (const auto& r : ranges) {
    if (r.block == b) return r;
  }
  return std::nullopt;
}

namespace {

bool wants(Representation choice, Block b) {
  switch (b) {
    case Block::Bow: return choice == Representation::BowOnly || choice == Representation::Hybrid;
    case Block::Embedding: return uses_embeddings(choice);
    case Block::Sentiment: return choice == Representation::SentimentOnly || choice == Representation::Hybrid;
  }
  return false;
}

}  // namespace

BlockLayout layout_for(Representation choice, const RepresentationComponents& c) {
  BlockLayout layout;
  std::uint32_t at = 0;
  if (wants(choice, Block::Bow)) {
    if (!c.vocabulary) throw ConfigError("representation '" + std::string(to_string(choice)) + "' needs a vocabulary");
    layout.ranges.push_back({Block::Bow, at, at + c.vocabulary->size()});
    at += c.vocabulary->size();
  }
  if (wants(choice, Block::Embedding)) {
    if (!c.embeddings || !c.embedding_stats) {
      throw ConfigError("representation '" + std::string(to_string(choice)) +
                        "' needs word embeddings and document-frequency statistics");
    }
    layout.ranges.push_back({Block::Embedding, at, at + c.embeddings->dim()});
    at += c.embeddings->dim();
  }
  if (wants(choice, Block::Sentiment)) {
    if (!c.sentiment) throw ConfigError("representation '" + std::string(to_string(choice)) + "' needs a sentiment matrix");
    layout.ranges.push_back({Block::Sentiment, at, at + 4});
    at += 4;
  }
  return layout;
}

FeatureVector assemble(const PreparedDocument& doc, Representation choice, const RepresentationComponents& c,
                       Scaling scaling) {
  const auto layout = layout_for(choice, c);
  FeatureVector v;
  v.dim = layout.dim();
  v.dense_offset = v.dim;
  for (const auto& r : layout.ranges) {
    switch (r.block) {
      case Block::Bow: {
        auto bow = bow_vector(doc, *c.vocabulary);
        for (auto& e : bow.entries) e.index += r.begin;
        v.sparse = std::move(bow.entries);
        break;
      }
      case Block::Embedding: {
        v.dense_offset = std::min(v.dense_offset, r.begin);
        const auto s = weighted_doc_vector(doc, *c.embeddings, *c.embedding_stats, c.normalize_pool);
        v.dense.insert(v.dense.end(), s.begin(), s.end());
        break;
      }
      case Block::Sentiment: {
        v.dense_offset = std::min(v.dense_offset, r.begin);
        const auto f = document_sentiment(doc, *c.sentiment);
        v.dense.insert(v.dense.end(), {f.positive, f.objective, f.negative, f.unknown});
        break;
      }
    }
  }
  if (scaling == Scaling::UnitL2) {
    const double norm = std::sqrt(v.squared_norm());
    if (norm > 0.0) v.scale(1.0 / norm);
  }
  return v;
}

FeatureVector extract_block(const FeatureVector& v, const BlockLayout& layout, Block block) {
  const auto r = layout.find(block);
  if (!r) throw ConfigError("block '" + std::string(to_string(block)) + "' is not part of this layout");
  FeatureVector out;
  out.dim = r->end - r->begin;
  if (r->end <= v.dense_offset) {
    out.dense_offset = out.dim;
    for (const auto& e : v.sparse) {
      if (e.index >= r->begin && e.index < r->end) out.sparse.push_back({e.index - r->begin, e.value});
    }
  } else {
    out.dense_offset = 0;
    const auto first = v.dense.begin() + (r->begin - v.dense_offset);
    out.dense.assign(first, first + out.dim);
  }
  return out;
}

FeatureShift FeatureShift::fit(std::span<const FeatureVector> training) {
  if (training.empty()) return {};
  const auto& first = training.front();
  std::vector<double> mins(first.dense.size(), std::numeric_limits<double>::infinity());
  for (const auto& v : training) {
    if (!v.same_layout(first)) throw ConfigError("feature vectors have different layouts");
    for (std::size_t k = 0; k < mins.size(); ++k) mins[k] = std::min(mins[k], v.dense[k]);
  }
  std::vector<double> offsets(mins.size());
  for (std::size_t k = 0; k < mins.size(); ++k) offsets[k] = mins[k] < 0.0 ? -mins[k] : 0.0;
  return FeatureShift(first.dense_offset, std::move(offsets));
}

void FeatureShift::apply(FeatureVector& v) const {
  if (v.dense.size() != offsets_.size() || v.dense_offset != dense_offset_) {
    throw ConfigError("feature shift does not match the feature layout");
  }
  for (std::size_t k = 0; k < offsets_.size(); ++k) v.dense[k] = std::max(0.0, v.dense[k] + offsets_[k]);
}

void write_feature_matrix(std::ostream& out, std::span<const FeatureVector> rows, std::span<const Polarity> labels,
                          const BlockLayout& layout) {
  if (rows.size() != labels.size()) throw ConfigError("feature rows and labels differ in length");
  out << "%hww2v-features 1\n";
  out << "%rows " << rows.size() << " cols " << layout.dim() << '\n';
  out << "%blocks";
  for (const auto& r : layout.ranges) out << ' ' << to_string(r.block) << ':' << r.begin << ':' << r.end;
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << "%label " << i << ' ' << (labels[i] == Polarity::Positive ? "+1" : "-1") << '\n';
    const auto& v = rows[i];
    for (const auto& e : v.sparse) {
      std::snprintf(buf, sizeof buf, " %.17g\n", e.value);
      out << i << ' ' << e.index << buf;
    }
    for (std::size_t k = 0; k < v.dense.size(); ++k) {
      if (v.dense[k] == 0.0) continue;
      std::snprintf(buf, sizeof buf, " %.17g\n", v.dense[k]);
      out << i << ' ' << (v.dense_offset + k) << buf;
    }
  }
}

}  // namespace hww2v
