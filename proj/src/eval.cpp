#include "hww2v/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "hww2v/errors.hpp"
#include "hww2v/parallel.hpp"

namespace hww2v {
namespace {

// Uniform integer in [0, n) by rejection, so the sequence does not depend on
// the standard library's distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[bounded(rng, i)]);
}

std::string dim_text(std::uint32_t dim) { return dim ? std::to_string(dim) : "-"; }

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<PreparedDocument> pick(std::span<const PreparedDocument> docs, std::span<const std::size_t> idx) {
  std::vector<PreparedDocument> out;
  out.reserve(idx.size());
  for (const auto i : idx) out.push_back(docs[i]);
  return out;
}

std::vector<std::uint32_t> embedding_dims(std::span<const CellSpec> cells) {
  std::set<std::uint32_t> dims;
  for (const auto& c : cells) {
    if (uses_embeddings(c.representation)) dims.insert(c.dim);
  }
  return {dims.begin(), dims.end()};
}

std::shared_ptr<const DictionaryMatrix> train_embeddings(std::span<const PreparedDocument> docs,
                                                         const CbowConfig& base, std::uint32_t dim) {
  CbowConfig cfg = base;
  cfg.dim = dim;
  return std::make_shared<const DictionaryMatrix>(train_cbow(docs, cfg));
}

}  // namespace

std::vector<std::size_t> FoldPlan::test_indices(std::uint32_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::uint32_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan make_folds(std::span<const Polarity> labels, std::uint64_t seed, std::uint32_t folds) {
  if (folds < 2) throw ConfigError("need at least 2 folds");
  FoldPlan plan;
  plan.seed = seed;
  plan.folds = folds;
  plan.assignment.assign(labels.size(), 0);
  std::mt19937_64 rng(seed);
  std::size_t next = 0;  // round-robin position carried from one class to the next
  for (const auto cls : {Polarity::Positive, Polarity::Negative}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    fisher_yates(members, rng);
    for (const auto i : members) plan.assignment[i] = static_cast<std::uint32_t>(next++ % folds);
  }
  return plan;
}

double accuracy(std::span<const Polarity> predictions, std::span<const Polarity> truth) {
  if (predictions.size() != truth.size()) throw ConfigError("predictions and labels differ in length");
  if (predictions.empty()) throw ConfigError("accuracy of an empty set is undefined");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predictions[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::vector<CellSpec> expand_grid(std::span<const std::uint32_t> dims) {
  std::vector<CellSpec> cells;
  for (const auto rep : {Representation::SentimentOnly, Representation::WeightedW2VOnly, Representation::BowOnly,
                         Representation::Hybrid}) {
    for (const auto clf : {ClassifierKind::NaiveBayes, ClassifierKind::MaxEnt, ClassifierKind::SvmLinear,
                           ClassifierKind::SvmRbf}) {
      if (!uses_embeddings(rep)) {
        cells.push_back({rep, clf, 0});
        continue;
      }
      for (const auto d : dims) cells.push_back({rep, clf, d});
    }
  }
  return cells;
}

const DictionaryMatrix* FoldArtifacts::embeddings_for(std::uint32_t dim) const {
  for (const auto& [d, m] : embeddings) {
    if (d == dim) return m.get();
  }
  return nullptr;
}

FoldArtifacts fit_fold_artifacts(std::span<const PreparedDocument> train, const ExperimentConfig& config,
                                 std::span<const std::uint32_t> dims,
                                 std::span<const std::pair<std::uint32_t, std::shared_ptr<const DictionaryMatrix>>> shared) {
  FoldArtifacts a;
  const DocumentFrequencies df(train);
  a.vocabulary = Vocabulary::from_frequencies(df, config.min_df, config.max_df_ratio);
  a.embedding_stats = df;
  if (config.lexicon) {
    std::vector<std::string> keys;
    for (const auto& [k, n] : df.sorted()) keys.push_back(k);
    a.sentiment = build_sentiment_matrix(config.lexicon, keys);
  }
  for (const auto dim : dims) {
    if (config.external_embeddings) {
      if (config.external_embeddings->dim() != dim) {
        throw ConfigError("external embeddings have dimension " + std::to_string(config.external_embeddings->dim()) +
                          ", cell asks for " + std::to_string(dim));
      }
      a.embeddings.emplace_back(dim, config.external_embeddings);
      continue;
    }
    auto it = std::find_if(shared.begin(), shared.end(), [&](const auto& p) { return p.first == dim; });
    a.embeddings.emplace_back(dim, it != shared.end() ? it->second : train_embeddings(train, config.cbow, dim));
  }
  return a;
}

std::vector<CellResult> run_grid(std::span<const PreparedDocument> docs, std::span<const CellSpec> cells,
                                 const FoldPlan& plan, const ExperimentConfig& config) {
  if (plan.assignment.size() != docs.size()) throw ConfigError("fold plan does not match the corpus size");
  config.classifier.validate();
  std::vector<CellResult> results(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) results[c].spec = cells[c];

  const auto dims = embedding_dims(cells);
  std::vector<std::pair<std::uint32_t, std::shared_ptr<const DictionaryMatrix>>> shared;
  if (config.shared_embeddings && !config.external_embeddings) {
    for (const auto d : dims) shared.emplace_back(d, train_embeddings(docs, config.cbow, d));
  }
  std::optional<FoldArtifacts> global;
  if (config.global_vocabulary) global = fit_fold_artifacts(docs, config, {}, {});

  for (std::uint32_t fold = 0; fold < plan.folds; ++fold) {
    const auto fold_start = std::chrono::steady_clock::now();
    const auto train_idx = plan.train_indices(fold);
    const auto test_idx = plan.test_indices(fold);
    const auto train_docs = pick(docs, train_idx);
    const auto test_docs = pick(docs, test_idx);

    std::optional<FoldArtifacts> art;
    std::string fold_error;
    try {
      if (train_docs.empty() || test_docs.empty()) throw ConfigError("empty train or test split");
      art = fit_fold_artifacts(train_docs, config, dims, shared);
      if (global) {
        art->vocabulary = global->vocabulary;
        art->embedding_stats = global->embedding_stats;
      }
    } catch (const std::exception& e) {
      fold_error = e.what();
    }

    parallel_for(cells.size(), config.jobs, [&](std::size_t c) {
      CellResult& r = results[c];
      if (r.failed) return;
      if (!art) {
        r.failed = true;
        r.error = "fold " + std::to_string(fold) + ": " + fold_error;
        return;
      }
      try {
        const auto start = std::chrono::steady_clock::now();
        const CellSpec& cell = cells[c];
        RepresentationComponents comp;
        comp.vocabulary = &art->vocabulary;
        comp.embedding_stats = &art->embedding_stats;
        comp.sentiment = art->sentiment ? &*art->sentiment : nullptr;
        comp.embeddings = uses_embeddings(cell.representation) ? art->embeddings_for(cell.dim) : nullptr;
        comp.normalize_pool = config.normalize_pool;
        layout_for(cell.representation, comp);

        std::vector<FeatureVector> xtrain, xtest;
        std::vector<Polarity> ytrain, ytest;
        for (const auto& d : train_docs) {
          xtrain.push_back(assemble(d, cell.representation, comp, config.scaling));
          ytrain.push_back(d.label);
        }
        ClassifierConfig cc = config.classifier;
        cc.kind = cell.classifier;
        const TrainedClassifier clf = train_classifier(xtrain, ytrain, cc);
        std::vector<Polarity> predictions;
        for (const auto& d : test_docs) {
          predictions.push_back(predict(clf, assemble(d, cell.representation, comp, config.scaling)));
          ytest.push_back(d.label);
        }
        const double acc = accuracy(predictions, ytest);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.fold_accuracy.push_back(acc);
        r.fold_seconds.push_back(seconds);
        r.converged = r.converged && clf.converged;
      } catch (const std::exception& e) {
        r.failed = true;
        r.error = "fold " + std::to_string(fold) + ": " + e.what();
      }
    });
    if (config.on_fold) {
      config.on_fold(fold, plan.folds,
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - fold_start).count());
    }
  }

  for (auto& r : results) {
    if (r.failed || r.fold_accuracy.empty()) continue;
    r.mean_accuracy = std::accumulate(r.fold_accuracy.begin(), r.fold_accuracy.end(), 0.0) /
                      static_cast<double>(r.fold_accuracy.size());
  }
  return results;
}

CellResult run_cell(std::span<const PreparedDocument> docs, const CellSpec& cell, const FoldPlan& plan,
                    const ExperimentConfig& config) {
  const CellSpec cells[] = {cell};
  auto results = run_grid(docs, cells, plan, config);
  if (results.front().failed) throw Error(results.front().error);
  return results.front();
}

void write_table(std::ostream& out, std::span<const CellResult> results, const ReportOptions& options) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"representation", "classifier", "dim", "accuracy"});
  if (options.timings) rows.front().push_back("sec/fold");
  rows.front().push_back("status");
  for (const auto& r : results) {
    std::vector<std::string> row{std::string(to_string(r.spec.representation)), std::string(to_string(r.spec.classifier)),
                                 dim_text(r.spec.dim), r.failed ? "-" : fixed(r.mean_accuracy, 4)};
    if (options.timings) {
      const double s = r.fold_seconds.empty() ? 0.0
                                              : std::accumulate(r.fold_seconds.begin(), r.fold_seconds.end(), 0.0) /
                                                    static_cast<double>(r.fold_seconds.size());
      row.push_back(r.failed ? "-" : fixed(s, 2));
    }
    row.push_back(r.failed ? "FAILED: " + r.error : (r.converged ? "ok" : "ok (not converged)"));
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t k = 0; k + 1 < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
  }
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      out << row[k];
      if (k + 1 < row.size()) out << std::string(width[k] - row[k].size() + 2, ' ');
    }
    out << '\n';
  }
}

void write_tsv(std::ostream& out, std::span<const CellResult> results, const ReportOptions& options) {
  out << "representation\tclassifier\tdim\tfold\taccuracy";
  if (options.timings) out << "\tseconds";
  out << '\n';
  for (const auto& r : results) {
    const std::string head = std::string(to_string(r.spec.representation)) + '\t' +
                             std::string(to_string(r.spec.classifier)) + '\t' + dim_text(r.spec.dim) + '\t';
    if (r.failed) {
      out << head << "FAILED\tNA";
      if (options.timings) out << "\tNA";
      out << '\n';
      continue;
    }
    for (std::size_t f = 0; f < r.fold_accuracy.size(); ++f) {
      out << head << f << '\t' << fixed(r.fold_accuracy[f], 6);
      if (options.timings) out << '\t' << fixed(r.fold_seconds[f], 3);
      out << '\n';
    }
    out << head << "mean\t" << fixed(r.mean_accuracy, 6);
    if (options.timings) {
      out << '\t' << fixed(std::accumulate(r.fold_seconds.begin(), r.fold_seconds.end(), 0.0), 3);
    }
    out << '\n';
  }
}

}  // namespace hww2v
