#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hww2v {

enum class Polarity : int { Negative = -1, Positive = 1 };

constexpr int to_sign(Polarity p) noexcept { return static_cast<int>(p); }
constexpr Polarity from_sign(double s) noexcept {
  return s >= 0 ? Polarity::Positive : Polarity::Negative;
}
std::string_view to_string(Polarity p) noexcept;

struct LabeledText {
  std::string text;  // UTF-8
  Polarity label;

  bool operator==(const LabeledText&) const = default;
};

struct RawCorpus {
  std::vector<LabeledText> records;

  std::size_t size() const noexcept { return records.size(); }
  std::size_t count(Polarity p) const noexcept;
  std::vector<Polarity> labels() const;

  bool operator==(const RawCorpus&) const = default;
};

enum class TextEncoding { Windows1252, Latin1, Utf8 };

TextEncoding parse_encoding(std::string_view name);
std::string_view to_string(TextEncoding e) noexcept;

struct DecodeOptions {
  TextEncoding encoding = TextEncoding::Windows1252;
  // Strict mode rejects bytes that have no mapping in the encoding instead
  // of substituting them.
  bool strict = false;
};

/// Converts one line of raw bytes to UTF-8. `line` is only used for error
/// messages.
std::string decode_to_utf8(std::string_view bytes, const DecodeOptions& options,
                           std::size_t line);

/// Reads one snippet per line from each file. Lines that are blank after
/// trimming are skipped; file order is kept within each class, positives
/// first.
RawCorpus load_polarity_corpus(const std::filesystem::path& pos_path,
                               const std::filesystem::path& neg_path,
                               const DecodeOptions& options = {});

enum class PosTag : char { Adjective = 'a', Noun = 'n', Verb = 'v', Adverb = 'r' };

struct SynsetTerm {
  std::string lemma;
  int sense_rank = 0;

  bool operator==(const SynsetTerm&) const = default;
};

struct LexiconEntry {
  PosTag pos_tag = PosTag::Noun;
  std::uint64_t synset_id = 0;
  double pos_score = 0.0;
  double neg_score = 0.0;
  std::vector<SynsetTerm> terms;

  double objective() const noexcept { return 1.0 - pos_score - neg_score; }
  bool operator==(const LexiconEntry&) const = default;
};

struct SentiWordNet {
  std::vector<LexiconEntry> entries;
  std::string version;  // from the "# SentiWordNet vX" banner, if present
  std::size_t multiword_terms = 0;  // lemmas containing '_'; never match a token
};

/// Parses one data line of the SentiWordNet 3.0 tab-separated format.
LexiconEntry parse_sentiwordnet_line(std::string_view line, std::size_t line_no);

SentiWordNet load_sentiwordnet(const std::filesystem::path& path);

}  // namespace hww2v
