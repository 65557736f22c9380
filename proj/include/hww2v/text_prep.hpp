#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hww2v/corpus_io.hpp"

namespace hww2v {

/// Prefix used in the string form of a negated token.
inline constexpr std::string_view kNegationMarker = "NOT_";

struct Token {
  std::string surface;  // lowercase, never empty
  bool negated = false;

  /// Canonical string form: "NOT_" + surface for negated tokens.
  std::string key() const;
  /// Inverse of key().
  static Token from_key(std::string_view key);

  bool operator==(const Token&) const = default;
};

using Sentence = std::vector<Token>;

struct PreparedDocument {
  std::vector<Sentence> sentences;
  Polarity label = Polarity::Positive;

  std::size_t token_count() const noexcept;
  bool operator==(const PreparedDocument&) const = default;
};

struct PrepConfig {
  std::unordered_set<std::string> stopwords;
  std::unordered_set<std::string> negation_cues;
  // A cue met while already inside a negation scope closes the scope.
  bool negation_toggle = true;
  bool keep_punctuation_tokens = true;

  static PrepConfig defaults();
};

const std::vector<std::string>& default_stopwords();
const std::vector<std::string>& default_negation_cues();

/// Reads one stopword per line; blank lines and '#' comments are ignored.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

/// True for tokens made only of punctuation (no letters, digits, apostrophes
/// or non-ASCII bytes).
bool is_punctuation(std::string_view token) noexcept;

/// Lowercased tokens split into sentences at '.', '!' and '?'. A run of
/// terminators ("...", "?!") stays in the sentence it closes.
std::vector<std::vector<std::string>> tokenize(std::string_view text);

std::vector<std::string> expand_contractions(std::span<const std::string> tokens);

std::vector<Token> mark_negations(std::span<const std::string> sentence, const PrepConfig& config);

std::vector<Token> remove_stopwords(std::span<const Token> tokens, const PrepConfig& config);

PreparedDocument prepare_text(std::string_view text, Polarity label, const PrepConfig& config);

/// Output order matches corpus order regardless of `workers`.
std::vector<PreparedDocument> prepare(const RawCorpus& raw, const PrepConfig& config,
                                      unsigned workers = 1);

}  // namespace hww2v
