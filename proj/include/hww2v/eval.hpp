#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hww2v/bow.hpp"
#include "hww2v/classifier.hpp"
#include "hww2v/embedding.hpp"
#include "hww2v/hybrid.hpp"
#include "hww2v/sent_lexicon.hpp"
#include "hww2v/text_prep.hpp"

namespace hww2v {

struct FoldPlan {
  std::uint64_t seed = 0;
  std::uint32_t folds = 10;
  std::vector<std::uint32_t> assignment;  // fold index per document

  std::vector<std::size_t> test_indices(std::uint32_t fold) const;
  std::vector<std::size_t> train_indices(std::uint32_t fold) const;

  bool operator==(const FoldPlan&) const = default;
};

/// Shuffles each class with the seed, then deals its documents round-robin
/// over the folds. The negative class starts where the positive class
/// stopped, so fold sizes differ by at most one overall as well as per class.
FoldPlan make_folds(std::span<const Polarity> labels, std::uint64_t seed = 0, std::uint32_t folds = 10);

/// Fraction of exact matches. Throws ConfigError on empty or unequal input.
double accuracy(std::span<const Polarity> predictions, std::span<const Polarity> truth);

struct CellSpec {
  Representation representation = Representation::Hybrid;
  ClassifierKind classifier = ClassifierKind::NaiveBayes;
  std::uint32_t dim = 0;  // embedding dimension; 0 when the representation has none

  bool operator==(const CellSpec&) const = default;
};

struct CellResult {
  CellSpec spec;
  std::vector<double> fold_accuracy;
  std::vector<double> fold_seconds;
  double mean_accuracy = 0.0;
  bool converged = true;  // every fold's classifier met its tolerance
  bool failed = false;
  std::string error;

  bool operator==(const CellResult&) const = default;
};

/// Sentiment-only and BoW cells once per classifier; embedding cells once per
/// classifier and dimension.
std::vector<CellSpec> expand_grid(std::span<const std::uint32_t> dims);

struct ExperimentConfig {
  std::uint32_t min_df = 2;
  double max_df_ratio = 0.5;
  CbowConfig cbow;  // dim is taken from each cell
  // Train embeddings once on every document's text (labels unused) instead
  // of once per fold on the training folds.
  bool shared_embeddings = false;
  // Build the vocabulary and embedding statistics on the whole corpus; for
  // comparison runs only, since test-fold text then shapes the features.
  bool global_vocabulary = false;
  // Pre-trained vectors used for every cell instead of CBOW training.
  std::shared_ptr<const DictionaryMatrix> external_embeddings;
  Scaling scaling = Scaling::None;
  bool normalize_pool = false;
  ClassifierConfig classifier;  // kind is taken from each cell
  std::shared_ptr<const LexiconIndex> lexicon;
  unsigned jobs = 1;  // cells evaluated concurrently within a fold
  // Called after each fold with (fold, folds, seconds spent on it).
  std::function<void(std::uint32_t, std::uint32_t, double)> on_fold;
};

/// Artifacts fitted on one fold's training documents.
struct FoldArtifacts {
  Vocabulary vocabulary;
  DocumentFrequencies embedding_stats;
  std::optional<SentimentMatrix> sentiment;
  std::vector<std::pair<std::uint32_t, std::shared_ptr<const DictionaryMatrix>>> embeddings;

  const DictionaryMatrix* embeddings_for(std::uint32_t dim) const;
};

/// Fits every per-fold artifact on `train` alone.
/// Embeddings are trained for each requested dimension unless `shared` or the
/// config supplies them.
FoldArtifacts fit_fold_artifacts(std::span<const PreparedDocument> train, const ExperimentConfig& config,
                                 std::span<const std::uint32_t> dims,
                                 std::span<const std::pair<std::uint32_t, std::shared_ptr<const DictionaryMatrix>>> shared = {});

/// Cross-validates every cell. Artifacts are fitted once per fold and shared
/// by all cells; a failing cell is marked and the others continue.
std::vector<CellResult> run_grid(std::span<const PreparedDocument> docs, std::span<const CellSpec> cells,
                                 const FoldPlan& plan, const ExperimentConfig& config);

CellResult run_cell(std::span<const PreparedDocument> docs, const CellSpec& cell, const FoldPlan& plan,
                    const ExperimentConfig& config);

struct ReportOptions {
  bool timings = true;
};

/// Aligned table with one row per cell.
void write_table(std::ostream& out, std::span<const CellResult> results, const ReportOptions& options = {});

/// Tab-separated `representation classifier dim fold accuracy seconds`, one
/// line per fold plus a `mean` line per cell. Failed cells get one FAILED line.
void write_tsv(std::ostream& out, std::span<const CellResult> results, const ReportOptions& options = {});

}  // namespace hww2v
