#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hww2v/bow.hpp"
#include "hww2v/classifier.hpp"
#include "hww2v/embedding.hpp"
#include "hww2v/hybrid.hpp"
#include "hww2v/sent_lexicon.hpp"
#include "hww2v/text_prep.hpp"

namespace hww2v {

// Model file layout (all integers little-endian):
//   "HWW2V"            5-byte magic
//   u32 version
//   u32 section count
//   per section: u32 kind, u64 offset, u64 length   (offsets from file start)
//   section payloads
// Doubles are stored as their IEEE-754 bit patterns, so a round trip is
// bit-identical.
inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Everything predict needs to rebuild the training-time pipeline.
struct ModelMetadata {
  Representation representation = Representation::Hybrid;
  Scaling scaling = Scaling::None;
  bool normalize_pool = false;
  std::vector<std::string> stopwords;  // sorted
  std::vector<std::string> negation_cues;  // sorted
  bool negation_toggle = true;
  bool keep_punctuation_tokens = true;
  std::string lexicon_version;

  static ModelMetadata from(const PrepConfig& prep);
  PrepConfig prep_config() const;

  bool operator==(const ModelMetadata&) const = default;
};

struct ModelBundle {
  ModelMetadata metadata;
  std::optional<Vocabulary> vocabulary;
  std::optional<DocumentFrequencies> embedding_stats;
  std::optional<DictionaryMatrix> embeddings;
  std::optional<SentimentMatrix> sentiment;
  std::optional<TrainedClassifier> classifier;

  /// Views into this bundle; valid while it lives.
  RepresentationComponents components() const;
};

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
/// Throws FormatError when the bytes are not a model of this format version
/// and InputError when the file cannot be opened.
ModelBundle load_bundle(const std::filesystem::path& path);

// Single-artifact files in the same container format.
void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path);
void save_embeddings(const DictionaryMatrix& m, const std::filesystem::path& path);
DictionaryMatrix load_embeddings(const std::filesystem::path& path);

}  // namespace hww2v
