#include "hww2v/text_prep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>

#include "hww2v/errors.hpp"
#include "hww2v/parallel.hpp"

namespace hww2v {
namespace detail {
const std::unordered_map<std::string, std::vector<std::string>>& contraction_table();
}

namespace {

enum class CharClass { Space, Word, Apostrophe, Terminator, Punct };

// Classifies the UTF-8 sequence at text[i] and reports its byte length.
CharClass classify(std::string_view text, std::size_t i, std::size_t& len) {
  const auto b = static_cast<unsigned char>(text[i]);
  len = 1;
  if (b < 0x80) {
    if (b == '.' || b == '!' || b == '?') return CharClass::Terminator;
    if (b == '\'') return CharClass::Apostrophe;
    if (std::isalnum(b)) return CharClass::Word;
    if (std::isspace(b) || b < 0x20) return CharClass::Space;
    return CharClass::Punct;
  }
  if ((b & 0xE0) == 0xC0) len = 2;
  else if ((b & 0xF0) == 0xE0) len = 3;
  else if ((b & 0xF8) == 0xF0) len = 4;
  len = std::min(len, text.size() - i);
  // U+2000..U+206F General Punctuation: curly quotes, dashes, ellipsis.
  if (b == 0xE2 && len == 3) {
    const auto b1 = static_cast<unsigned char>(text[i + 1]);
    const auto b2 = static_cast<unsigned char>(text[i + 2]);
    if (b1 == 0x80 && (b2 == 0x98 || b2 == 0x99)) return CharClass::Apostrophe;
    if (b1 == 0x80 && b2 == 0xA6) return CharClass::Terminator;  // ellipsis
    if (b1 == 0x80 || b1 == 0x81) return CharClass::Punct;
  }
  if (b == 0xC2 && len == 2) {
    const auto b1 = static_cast<unsigned char>(text[i + 1]);
    if (b1 == 0xA0) return CharClass::Space;
    if (b1 < 0xC0) return CharClass::Punct;  // Latin-1 symbols: ¡ « » ° etc.
  }
  return CharClass::Word;
}

void ascii_lower(std::string& s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string Token::key() const {
  if (!negated) return surface;
  std::string out(kNegationMarker);
  out += surface;
  return out;
}

Token Token::from_key(std::string_view key) {
  if (key.starts_with(kNegationMarker) && key.size() > kNegationMarker.size()) {
    return {std::string(key.substr(kNegationMarker.size())), true};
  }
  return {std::string(key), false};
}

std::size_t PreparedDocument::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

PrepConfig PrepConfig::defaults() {
  PrepConfig c;
  c.stopwords.insert(default_stopwords().begin(), default_stopwords().end());
  c.negation_cues.insert(default_negation_cues().begin(), default_negation_cues().end());
  return c;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stopword file: " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    if (start == line.size() || line[start] == '#') continue;
    auto w = line.substr(start);
    ascii_lower(w);
    words.insert(std::move(w));
  }
  return words;
}

bool is_punctuation(std::string_view token) noexcept {
  if (token.empty()) return false;
  for (std::size_t i = 0; i < token.size();) {
    std::size_t len = 1;
    const auto cls = classify(token, i, len);
    if (cls == CharClass::Word || cls == CharClass::Apostrophe) return false;
    i += len;
  }
  return true;
}

std::vector<std::vector<std::string>> tokenize(std::string_view text) {
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  std::string word;
  bool closing = false;  // inside a run of sentence terminators

  const auto flush_word = [&] {
    if (word.empty()) return;
    const auto& table = detail::contraction_table();
    // Quotes around a word are not part of it; keep leading apostrophes only
    // for known forms such as 'em.
    while (!word.empty() && word.back() == '\'') word.pop_back();
    while (!word.empty() && word.front() == '\'' && !table.contains(word)) word.erase(0, 1);
    if (!word.empty()) current.push_back(std::move(word));
    word.clear();
  };
  const auto close_sentence = [&] {
    if (!current.empty()) sentences.push_back(std::move(current));
    current.clear();
    closing = false;
  };

  for (std::size_t i = 0; i < text.size();) {
    std::size_t len = 1;
    const auto cls = classify(text, i, len);
    if (closing && cls != CharClass::Terminator && cls != CharClass::Space) close_sentence();
    switch (cls) {
      case CharClass::Word: {
        auto piece = std::string(text.substr(i, len));
        ascii_lower(piece);
        word += piece;
        break;
      }
      case CharClass::Apostrophe:
        word.push_back('\'');
        break;
      case CharClass::Space:
        flush_word();
        break;
      case CharClass::Terminator:
        flush_word();
        current.emplace_back(text.substr(i, len));
        closing = true;
        break;
      case CharClass::Punct:
        flush_word();
        current.emplace_back(text.substr(i, len));
        break;
    }
    i += len;
  }
  flush_word();
  close_sentence();
  return sentences;
}

std::vector<std::string> expand_contractions(std::span<const std::string> tokens) {
  const auto& table = detail::contraction_table();
  std::vector<std::string> out;
  out.reserve(tokens.size() + 4);
  for (const auto& t : tokens) {
    if (auto it = table.find(t); it != table.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    } else if (t == "n't") {
      out.emplace_back("not");
    } else if (ends_with(t, "n't") && t.size() > 3) {
      out.push_back(t.substr(0, t.size() - 3));
      out.emplace_back("not");
    } else {
      out.push_back(t);
    }
  }
  return out;
}

std::vector<Token> mark_negations(std::span<const std::string> sentence, const PrepConfig& config) {
  std::vector<Token> out;
  out.reserve(sentence.size());
  bool negating = false;
  for (const auto& t : sentence) {
    if (is_punctuation(t)) {
      out.push_back({t, false});
    } else if (config.negation_cues.contains(t)) {
      negating = (negating && config.negation_toggle) ? false : true;
      out.push_back({t, false});
    } else {
      out.push_back({t, negating});
    }
  }
  return out;
}

std::vector<Token> remove_stopwords(std::span<const Token> tokens, const PrepConfig& config) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t.negated) {
      out.push_back(t);
      continue;
    }
    if (is_punctuation(t.surface)) {
      if (config.keep_punctuation_tokens) out.push_back(t);
      continue;
    }
    if (!config.stopwords.contains(t.surface)) out.push_back(t);
  }
  return out;
}

PreparedDocument prepare_text(std::string_view text, Polarity label, const PrepConfig& config) {
  PreparedDocument doc;
  doc.label = label;
  for (const auto& raw : tokenize(text)) {
    const auto expanded = expand_contractions(raw);
    const auto marked = mark_negations(expanded, config);
    auto kept = remove_stopwords(marked, config);
    if (!kept.empty()) doc.sentences.push_back(std::move(kept));
  }
  return doc;
}

std::vector<PreparedDocument> prepare(const RawCorpus& raw, const PrepConfig& config, unsigned workers) {
  std::vector<PreparedDocument> docs(raw.size());
  parallel_for(raw.size(), workers, [&](std::size_t i) {
    docs[i] = prepare_text(raw.records[i].text, raw.records[i].label, config);
  });
  return docs;
}

}  // namespace hww2v
