#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hww2v {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNotConverged = 3,  // only under --strict
};

/// Every knob of a run. Written to <out>/config.txt by each command that has
/// an output directory; that file can be passed back with --config.
struct RunConfig {
  std::string command;

  std::string pos_path;
  std::string neg_path;
  std::string lexicon_path;
  std::string out_dir;
  std::string model_path;
  std::string input_path = "-";
  std::string embeddings_path;  // pre-trained vectors in word2vec text format
  std::string stopwords_path;

  std::string encoding = "windows-1252";
  bool strict = false;

  bool negation_toggle = true;
  bool keep_punctuation = true;

  std::string representation = "hybrid";
  std::uint32_t dim = 300;
  std::vector<std::uint32_t> dims{100, 300};
  std::uint32_t min_df = 2;
  double max_df_ratio = 0.5;
  std::string scaling = "none";
  bool normalize_pool = false;

  std::uint32_t window = 5;
  std::uint32_t negative = 5;
  std::uint32_t epochs = 15;
  double learning_rate = 0.025;
  std::uint32_t min_count = 1;
  double subsample = 0.0;
  unsigned embedding_workers = 1;

  std::string classifier = "nb";
  double C = 1.0;
  double gamma = 0.0;
  double l2 = 1.0;
  double tol = 1e-3;
  std::uint64_t max_iter = 0;
  std::size_t cache_mb = 1024;
  bool svm_grid = false;

  std::uint64_t seed = 0;  // fold plan
  std::uint64_t embedding_seed = 1;
  std::uint32_t folds = 10;
  bool shared_embeddings = false;
  bool global_vocabulary = false;
  bool timings = true;
  unsigned jobs = 1;

  // Set when --representation appeared on the command line or in a config
  // file; predict then checks it against the model. Not serialized.
  bool representation_given = false;
};

/// Throws CLI::ParseError for usage problems such as an unknown config key,
/// and hww2v::ConfigError for bad values.
RunConfig parse_args(int argc, const char* const* argv);

/// key=value lines accepted by --config.
std::string to_config_text(const RunConfig& config);

/// Runs a command and maps failures to ExitCode values. Results go to `out`,
/// logs and errors to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hww2v
