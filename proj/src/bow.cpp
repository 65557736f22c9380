#include "hww2v/bow.hpp"

#include <algorithm>
#include <cmath>

#include "hww2v/errors.hpp"

namespace hww2v {

std::vector<std::string> distinct_keys(const PreparedDocument& doc) {
  std::vector<std::string> keys;
  keys.reserve(doc.token_count());
  for (const auto& sentence : doc.sentences) {
    for (const auto& t : sentence) keys.push_back(t.key());
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

DocumentFrequencies::DocumentFrequencies(std::span<const PreparedDocument> docs)
    : total_docs_(static_cast<std::uint32_t>(docs.size())) {
  for (const auto& doc : docs) {
    for (auto& key : distinct_keys(doc)) ++freq_[std::move(key)];
  }
}

std::uint32_t DocumentFrequencies::of(std::string_view key) const {
  const auto it = freq_.find(key);
  return it == freq_.end() ? 0 : it->second;
}

std::vector<std::pair<std::string, std::uint32_t>> DocumentFrequencies::sorted() const {
  std::vector<std::pair<std::string, std::uint32_t>> out(freq_.begin(), freq_.end());
  std::sort(out.begin(), out.end());
  return out;
}

DocumentFrequencies DocumentFrequencies::from_counts(
    std::uint32_t total_docs, std::vector<std::pair<std::string, std::uint32_t>> counts) {
  DocumentFrequencies df;
  df.total_docs_ = total_docs;
  for (auto& [k, v] : counts) df.freq_.emplace(std::move(k), v);
  return df;
}

Vocabulary Vocabulary::build(std::span<const PreparedDocument> docs, std::uint32_t min_df,
                             double max_df_ratio) {
  return from_frequencies(DocumentFrequencies(docs), min_df, max_df_ratio);
}

Vocabulary Vocabulary::from_frequencies(const DocumentFrequencies& df, std::uint32_t min_df,
                                        double max_df_ratio) {
  if (min_df < 1) throw ConfigError("min_df must be >= 1");
  if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0)) {
    throw ConfigError("max_df_ratio must be in (0, 1]");
  }
  const auto max_df = static_cast<std::uint32_t>(std::floor(max_df_ratio * df.total_docs()));
  std::vector<std::pair<std::string, std::uint32_t>> kept;
  for (auto& [key, d] : df.sorted()) {
    if (d >= min_df && d <= max_df) kept.emplace_back(key, d);
  }
  if (kept.empty()) {
    throw ConfigError("vocabulary is empty after document-frequency pruning (min_df=" +
                      std::to_string(min_df) + ", max_df=" + std::to_string(max_df) + ")");
  }
  return from_entries(df.total_docs(), std::move(kept));
}

Vocabulary Vocabulary::from_entries(std::uint32_t total_docs,
                                    std::vector<std::pair<std::string, std::uint32_t>> entries) {
  std::sort(entries.begin(), entries.end());
  Vocabulary v;
  v.total_docs_ = total_docs;
  v.tokens_.reserve(entries.size());
  v.doc_freq_.reserve(entries.size());
  for (auto& [k, d] : entries) {
    if (d < 1 || d > total_docs) throw ValidationError("document frequency out of range for '" + k + "'");
    v.tokens_.push_back(std::move(k));
    v.doc_freq_.push_back(d);
  }
  v.rebuild_index();
  if (v.index_.size() != v.tokens_.size()) throw ValidationError("duplicate vocabulary token");
  return v;
}

void Vocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (std::uint32_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(std::uint32_t i) const {
  return std::log(static_cast<double>(total_docs_) / static_cast<double>(doc_freq_.at(i)));
}

void Vocabulary::dump(std::ostream& out) const {
  for (std::uint32_t i = 0; i < size(); ++i) {
    out << tokens_[i] << '\t' << i << '\t' << doc_freq_[i] << '\n';
  }
}

Vocabulary build_vocabulary(std::span<const PreparedDocument> docs, std::uint32_t min_df,
                            double max_df_ratio) {
  return Vocabulary::build(docs, min_df, max_df_ratio);
}

SparseVector bow_vector(const PreparedDocument& doc, const Vocabulary& vocab) {
  SparseVector v;
  v.dimension = vocab.size();
  for (const auto& key : distinct_keys(doc)) {
    const auto idx = vocab.index_of(key);
    if (!idx) continue;
    const double w = vocab.idf(*idx);
    if (w != 0.0) v.entries.push_back({*idx, w});
  }
  std::sort(v.entries.begin(), v.entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  return v;
}

}  // namespace hww2v
