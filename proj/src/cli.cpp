#include "hww2v/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "hww2v/bow.hpp"
#include "hww2v/classifier.hpp"
#include "hww2v/corpus_io.hpp"
#include "hww2v/embedding.hpp"
#include "hww2v/errors.hpp"
#include "hww2v/eval.hpp"
#include "hww2v/hybrid.hpp"
#include "hww2v/persistence.hpp"
#include "hww2v/sent_lexicon.hpp"
#include "hww2v/text_prep.hpp"

namespace hww2v {
namespace {

namespace fs = std::filesystem;

constexpr const char* kCommands[][2] = {
    {"prepare", "Tokenize the corpus and dump prepared documents and the vocabulary"},
    {"train-embeddings", "Train CBOW word vectors on the corpus"},
    {"represent", "Fit representation artifacts on the corpus and export the feature matrix"},
    {"train", "Train one representation + classifier on the whole corpus and save the model"},
    {"evaluate", "Cross-validate one representation + classifier"},
    {"grid", "Cross-validate every representation x classifier (x dimension) cell"},
    {"predict", "Label text lines with a saved model"},
};

void build_app(CLI::App& app, RunConfig& c) {
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "key=value config file; flags on the command line override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1, 1);

  app.add_option("--pos", c.pos_path, "Positive snippets, one per line");
  app.add_option("--neg", c.neg_path, "Negative snippets, one per line");
  app.add_option("--lexicon", c.lexicon_path, "SentiWordNet 3.0 text file");
  app.add_option("--out", c.out_dir, "Output directory");
  app.add_option("--model", c.model_path, "Model file (predict)");
  app.add_option("--input", c.input_path, "Text to label, one item per line; - for stdin (predict)");
  app.add_option("--embeddings", c.embeddings_path, "Pre-trained vectors in word2vec text format");
  app.add_option("--stopwords", c.stopwords_path, "Stopword list replacing the built-in one");

  app.add_option("--encoding", c.encoding, "Input encoding: windows-1252, latin-1 or utf-8");
  app.add_flag("--strict", c.strict, "Reject undecodable bytes; exit 3 when a classifier does not converge");

  app.add_option("--negation-toggle", c.negation_toggle, "A second negation cue closes the scope");
  app.add_option("--keep-punctuation", c.keep_punctuation, "Keep punctuation tokens as features");

  app.add_option("--representation", c.representation, "sentiment, w2v, bow or hybrid");
  app.add_option("--dim", c.dim, "Embedding dimension (single-cell commands)");
  app.add_option("--dims", c.dims, "Embedding dimensions for grid")->delimiter(',');
  app.add_option("--min-df", c.min_df, "Minimum document frequency");
  app.add_option("--max-df-ratio", c.max_df_ratio, "Maximum document frequency as a fraction of documents");
  app.add_option("--scaling", c.scaling, "none or unit-l2");
  app.add_option("--normalize-pool", c.normalize_pool, "Divide the weighted embedding sum by the total weight");

  app.add_option("--window", c.window, "CBOW window");
  app.add_option("--negative", c.negative, "CBOW negative samples");
  app.add_option("--epochs", c.epochs, "CBOW epochs");
  app.add_option("--learning-rate", c.learning_rate, "CBOW initial learning rate");
  app.add_option("--min-count", c.min_count, "CBOW minimum token count");
  app.add_option("--subsample", c.subsample, "CBOW frequent-word subsampling threshold, 0 = off");
  app.add_option("--embedding-workers", c.embedding_workers,
                 "CBOW threads; 1 is deterministic, more use unsynchronized updates");
  app.add_option("--embedding-seed", c.embedding_seed, "CBOW seed");

  app.add_option("--clf", c.classifier, "nb, maxent, svm-linear or svm-rbf");
  app.add_option("--C", c.C, "SVM C");
  app.add_option("--gamma", c.gamma, "RBF gamma; 0 = 1 / (features * variance)");
  app.add_option("--l2", c.l2, "MaxEnt L2 strength");
  app.add_option("--tol", c.tol, "Convergence tolerance");
  app.add_option("--max-iter", c.max_iter, "Iteration cap; 0 = trainer default");
  app.add_option("--cache-mb", c.cache_mb, "SVM kernel row cache size");
  app.add_option("--svm-grid", c.svm_grid, "Tune C and gamma on an inner holdout of each training set");

  app.add_option("--seed", c.seed, "Fold plan seed");
  app.add_option("--folds", c.folds, "Number of folds");
  app.add_option("--shared-embeddings", c.shared_embeddings,
                                "Train embeddings once on all text instead of once per fold");
  app.add_option("--global-vocabulary", c.global_vocabulary,
                 "Fit vocabulary and IDF statistics on the whole corpus (comparison only)");
  app.add_option("--timings", c.timings, "Include timing columns in reports");
  app.add_option("--jobs", c.jobs, "Worker threads");

  for (const auto& cmd : kCommands) app.add_subcommand(cmd[0], cmd[1]);
}

void require(const RunConfig& c, std::initializer_list<std::pair<const char*, const std::string*>> paths) {
  std::string missing;
  for (const auto& [flag, value] : paths) {
    if (value->empty()) missing += std::string(missing.empty() ? "" : ", ") + flag;
  }
  if (!missing.empty()) {
    throw CLI::RequiredError(c.command + " requires " + missing, CLI::ExitCodes::RequiredError);
  }
}

void validate(RunConfig& c) {
  parse_encoding(c.encoding);
  parse_scaling(c.scaling);
  parse_classifier(c.classifier);
  const Representation rep = parse_representation(c.representation);
  if (c.dims.empty()) throw ConfigError("--dims needs at least one dimension");
  for (const auto d : c.dims) {
    if (d == 0) throw ConfigError("embedding dimensions must be > 0");
  }
  if (c.folds < 2) throw ConfigError("--folds must be >= 2");
  if (c.jobs < 1) throw ConfigError("--jobs must be >= 1");
  if (!c.embeddings_path.empty() && c.shared_embeddings) {
    throw CLI::ValidationError("--embeddings and --shared-embeddings", "pick one embedding source");
  }

  const auto& cmd = c.command;
  if (cmd == "predict") {
    require(c, {{"--model", &c.model_path}});
    return;
  }
  require(c, {{"--pos", &c.pos_path}, {"--neg", &c.neg_path}, {"--out", &c.out_dir}});
  const bool needs_lexicon =
      cmd == "grid" || ((cmd == "represent" || cmd == "train" || cmd == "evaluate") &&
                        (rep == Representation::SentimentOnly || rep == Representation::Hybrid));
  if (needs_lexicon) require(c, {{"--lexicon", &c.lexicon_path}});
}

struct Logger {
  std::ostream& err;
  template <typename... Args>
  void operator()(const Args&... args) const {
    err << "[hww2v] ";
    (err << ... << args);
    err << '\n';
  }
};

PrepConfig prep_config(const RunConfig& c) {
  PrepConfig p = PrepConfig::defaults();
  if (!c.stopwords_path.empty()) p.stopwords = load_stopwords(c.stopwords_path);
  p.negation_toggle = c.negation_toggle;
  p.keep_punctuation_tokens = c.keep_punctuation;
  return p;
}

CbowConfig cbow_config(const RunConfig& c, std::uint32_t dim) {
  CbowConfig cb;
  cb.dim = dim;
  cb.window = c.window;
  cb.negative_samples = c.negative;
  cb.epochs = c.epochs;
  cb.initial_lr = c.learning_rate;
  cb.min_count = c.min_count;
  cb.seed = c.embedding_seed;
  cb.workers = c.embedding_workers;
  cb.subsample = c.subsample;
  cb.validate();
  return cb;
}

ClassifierConfig classifier_config(const RunConfig& c) {
  ClassifierConfig cc;
  cc.kind = parse_classifier(c.classifier);
  cc.C = c.C;
  cc.gamma = c.gamma;
  cc.l2 = c.l2;
  cc.tol = c.tol;
  cc.max_iter = c.max_iter;
  cc.cache_mb = c.cache_mb;
  cc.workers = c.jobs;
  cc.svm_grid = c.svm_grid;
  cc.validate();
  return cc;
}

class Session {
 public:
  Session(const RunConfig& c, std::ostream& out, std::ostream& err) : c_(c), out_(out), log_{err} {}

  int run() {
    const auto& cmd = c_.command;
    if (cmd == "predict") return predict();
    fs::create_directories(c_.out_dir);
    {
      std::ofstream cfg(fs::path(c_.out_dir) / "config.txt");
      cfg << to_config_text(c_);
    }
    if (cmd == "prepare") return prepare_cmd();
    if (cmd == "train-embeddings") return train_embeddings();
    if (cmd == "represent") return represent();
    if (cmd == "train") return train();
    return evaluate(cmd == "grid");
  }

 private:
  std::vector<PreparedDocument> load_docs() {
    DecodeOptions opts;
    opts.encoding = parse_encoding(c_.encoding);
    opts.strict = c_.strict;
    const RawCorpus raw = load_polarity_corpus(c_.pos_path, c_.neg_path, opts);
    log_("corpus: ", raw.count(Polarity::Positive), " positive + ", raw.count(Polarity::Negative), " negative");
    prep_ = prep_config(c_);
    return prepare(raw, prep_, c_.jobs);
  }

  std::shared_ptr<const LexiconIndex> load_lexicon() {
    if (c_.lexicon_path.empty()) return nullptr;
    const SentiWordNet swn = load_sentiwordnet(c_.lexicon_path);
    lexicon_version_ = swn.version;
    log_("lexicon: ", swn.entries.size(), " synsets, version ", swn.version.empty() ? "unknown" : swn.version, ", ",
         swn.multiword_terms, " multi-word terms (never matched)");
    return std::make_shared<const LexiconIndex>(swn);
  }

  ExperimentConfig experiment(std::uint32_t dim) {
    ExperimentConfig e;
    e.min_df = c_.min_df;
    e.max_df_ratio = c_.max_df_ratio;
    e.cbow = cbow_config(c_, dim);
    e.shared_embeddings = c_.shared_embeddings;
    e.global_vocabulary = c_.global_vocabulary;
    if (!c_.embeddings_path.empty()) {
      std::ifstream in(c_.embeddings_path);
      if (!in) throw InputError("cannot open " + c_.embeddings_path);
      e.external_embeddings = std::make_shared<const DictionaryMatrix>(DictionaryMatrix::load_text(in));
      log_("embeddings: ", e.external_embeddings->size(), " vectors of dimension ", e.external_embeddings->dim());
    }
    e.scaling = parse_scaling(c_.scaling);
    e.normalize_pool = c_.normalize_pool;
    e.classifier = classifier_config(c_);
    e.lexicon = load_lexicon();
    e.jobs = c_.jobs;
    e.on_fold = [this](std::uint32_t fold, std::uint32_t folds, double seconds) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", seconds);
      log_("fold ", fold + 1, "/", folds, " done in ", buf, " s");
    };
    return e;
  }

  std::ofstream open_out(const char* name) {
    const fs::path p = fs::path(c_.out_dir) / name;
    std::ofstream f(p);
    if (!f) throw InputError("cannot write " + p.string());
    log_("writing ", p.string());
    return f;
  }

  int prepare_cmd() {
    const auto docs = load_docs();
    auto f = open_out("prepared.txt");
    for (const auto& d : docs) {
      f << (d.label == Polarity::Positive ? "+1" : "-1") << '\t';
      for (std::size_t s = 0; s < d.sentences.size(); ++s) {
        if (s) f << " | ";
        for (std::size_t t = 0; t < d.sentences[s].size(); ++t) f << (t ? " " : "") << d.sentences[s][t].key();
      }
      f << '\n';
    }
    const Vocabulary vocab = build_vocabulary(docs, c_.min_df, c_.max_df_ratio);
    log_("vocabulary: ", vocab.size(), " tokens");
    auto v = open_out("vocabulary.tsv");
    vocab.dump(v);
    return kExitOk;
  }

  int train_embeddings() {
    const auto docs = load_docs();
    CbowReport report;
    const DictionaryMatrix m = train_cbow(docs, cbow_config(c_, c_.dim), &report);
    for (std::size_t e = 0; e < report.epoch_loss.size(); ++e) log_("epoch ", e + 1, " loss ", report.epoch_loss[e]);
    auto f = open_out("embeddings.txt");
    m.save_text(f);
    return kExitOk;
  }

  struct Fitted {
    std::vector<PreparedDocument> docs;
    Representation rep;
    ExperimentConfig exp;
    FoldArtifacts art;
    RepresentationComponents comp;
  };

  std::unique_ptr<Fitted> fit_all() {
    auto f = std::make_unique<Fitted>();
    f->docs = load_docs();
    f->rep = parse_representation(c_.representation);
    f->exp = experiment(c_.dim);
    const std::vector<std::uint32_t> dims = uses_embeddings(f->rep) ? std::vector<std::uint32_t>{c_.dim}
                                                                    : std::vector<std::uint32_t>{};
    f->art = fit_fold_artifacts(f->docs, f->exp, dims);
    f->comp.vocabulary = &f->art.vocabulary;
    f->comp.embedding_stats = &f->art.embedding_stats;
    f->comp.sentiment = f->art.sentiment ? &*f->art.sentiment : nullptr;
    f->comp.embeddings = uses_embeddings(f->rep) ? f->art.embeddings_for(c_.dim) : nullptr;
    f->comp.normalize_pool = c_.normalize_pool;
    return f;
  }

  int represent() {
    const auto f = fit_all();
    const BlockLayout layout = layout_for(f->rep, f->comp);
    std::vector<FeatureVector> rows;
    std::vector<Polarity> labels;
    for (const auto& d : f->docs) {
      rows.push_back(assemble(d, f->rep, f->comp, f->exp.scaling));
      labels.push_back(d.label);
    }
    auto m = open_out("features.txt");
    write_feature_matrix(m, rows, labels, layout);
    auto v = open_out("vocabulary.tsv");
    f->art.vocabulary.dump(v);
    if (f->comp.sentiment) {
      auto s = open_out("sentiment.tsv");
      dump_sentiment_features(s, f->docs, *f->comp.sentiment);
    }
    return kExitOk;
  }

  int train() {
    const auto f = fit_all();
    layout_for(f->rep, f->comp);
    std::vector<FeatureVector> rows;
    std::vector<Polarity> labels;
    for (const auto& d : f->docs) {
      rows.push_back(assemble(d, f->rep, f->comp, f->exp.scaling));
      labels.push_back(d.label);
    }
    ModelBundle b;
    b.metadata = ModelMetadata::from(prep_);
    b.metadata.representation = f->rep;
    b.metadata.scaling = f->exp.scaling;
    b.metadata.normalize_pool = c_.normalize_pool;
    b.metadata.lexicon_version = lexicon_version_;
    if (f->rep == Representation::BowOnly || f->rep == Representation::Hybrid) b.vocabulary = f->art.vocabulary;
    if (uses_embeddings(f->rep)) {
      b.embedding_stats = f->art.embedding_stats;
      b.embeddings = *f->comp.embeddings;
    }
    if (f->rep == Representation::SentimentOnly || f->rep == Representation::Hybrid) b.sentiment = *f->comp.sentiment;
    b.classifier = train_classifier(rows, labels, f->exp.classifier);
    const fs::path path = fs::path(c_.out_dir) / "model.hww2v";
    save_bundle(b, path);
    log_("saved ", path.string());
    return converged_exit(b.classifier->converged);
  }

  int evaluate(bool grid) {
    const auto docs = load_docs();
    std::vector<CellSpec> cells;
    if (grid) {
      cells = expand_grid(c_.dims);
    } else {
      const Representation rep = parse_representation(c_.representation);
      cells.push_back({rep, parse_classifier(c_.classifier), uses_embeddings(rep) ? c_.dim : 0u});
    }
    const ExperimentConfig exp = experiment(c_.dim);
    std::vector<Polarity> labels;
    for (const auto& d : docs) labels.push_back(d.label);
    const FoldPlan plan = make_folds(labels, c_.seed, c_.folds);
    log_(cells.size(), " cell(s), ", plan.folds, " folds, seed ", plan.seed);
    const auto results = run_grid(docs, cells, plan, exp);

    ReportOptions ro;
    ro.timings = c_.timings;
    write_table(out_, results, ro);
    {
      auto t = open_out("report.txt");
      write_table(t, results, ro);
    }
    {
      auto t = open_out("report.tsv");
      write_tsv(t, results, ro);
    }
    bool failed = false, converged = true;
    for (const auto& r : results) {
      failed = failed || r.failed;
      converged = converged && r.converged;
      if (r.failed) log_("cell ", to_string(r.spec.representation), "/", to_string(r.spec.classifier), " failed: ", r.error);
    }
    if (failed) return kExitData;
    return converged_exit(converged);
  }

  int predict() {
    const ModelBundle b = load_bundle(c_.model_path);
    if (!b.classifier) throw FormatError(c_.model_path + " holds no classifier");
    if (c_.representation_given && parse_representation(c_.representation) != b.metadata.representation) {
      throw ConfigError("representation mismatch: requested " + c_.representation + ", model was trained with " +
                        std::string(to_string(b.metadata.representation)));
    }
    const PrepConfig prep = b.metadata.prep_config();
    const RepresentationComponents comp = b.components();
    layout_for(b.metadata.representation, comp);

    DecodeOptions opts;
    opts.encoding = parse_encoding(c_.encoding);
    opts.strict = c_.strict;
    std::ifstream file;
    std::istream* in = &std::cin;
    if (c_.input_path != "-") {
      file.open(c_.input_path, std::ios::binary);
      if (!file) throw InputError("cannot open " + c_.input_path);
      in = &file;
    }
    std::string line;
    std::size_t n = 0;
    char buf[64];
    while (std::getline(*in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string text = decode_to_utf8(line, opts, n);
      const PreparedDocument doc = prepare_text(text, Polarity::Positive, prep);
      const FeatureVector x = assemble(doc, b.metadata.representation, comp, b.metadata.scaling);
      const double score = decision_value(*b.classifier, x);
      std::snprintf(buf, sizeof buf, "%.9g", score);
      out_ << to_string(score >= 0.0 ? Polarity::Positive : Polarity::Negative) << '\t' << buf << '\n';
    }
    return kExitOk;
  }

  int converged_exit(bool converged) {
    if (converged) return kExitOk;
    log_("warning: a classifier stopped at its iteration cap before reaching the tolerance");
    return c_.strict ? kExitNotConverged : kExitOk;
  }

  const RunConfig& c_;
  std::ostream& out_;
  Logger log_;
  PrepConfig prep_;
  std::string lexicon_version_;
};

RunConfig parse_into(CLI::App& app, RunConfig& c, int argc, const char* const* argv) {
  app.parse(argc, argv);
  for (const auto* sub : app.get_subcommands()) c.command = sub->get_name();
  c.representation_given = app.get_option("--representation")->count() > 0;
  validate(c);
  return c;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"hww2v"};
  build_app(app, c);
  return parse_into(app, c, argc, argv);
}

std::string to_config_text(const RunConfig& config) {
  RunConfig copy = config;
  CLI::App app{"hww2v"};
  build_app(app, copy);
  std::ostringstream out;
  out << "# hww2v " << config.command << '\n';
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config") continue;
    std::string value = opt->get_default_str();
    if (name == "strict") value = config.strict ? "true" : "false";  // flags capture no default
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
    out << name << '=' << (value.empty() ? "\"\"" : value) << '\n';
  }
  return out.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Sentiment classification with hybrid weighted word2vec features", "hww2v"};
  build_app(app, c);
  try {
    parse_into(app, c, argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    err << "hww2v: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    return Session(c, out, err).run();
  } catch (const ConfigError& e) {
    err << "hww2v: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "hww2v: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace hww2v
