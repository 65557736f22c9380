#include "hww2v/corpus_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "hww2v/errors.hpp"

namespace hww2v {
namespace {

// Code points for bytes 0x80..0x9F in Windows-1252; 0 marks an unassigned byte.
constexpr std::array<char32_t, 32> kCp1252High = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0,      0x017D, 0,
    0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

constexpr char32_t kReplacement = 0xFFFD;

// Length of the valid UTF-8 sequence starting at `s[i]`, or 0 if invalid.
std::size_t utf8_sequence_length(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  char32_t min_cp = 0;
  if (b0 < 0x80) return 1;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    min_cp = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    min_cp = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    min_cp = 0x10000;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  char32_t cp = b0 & (0x7F >> len);
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return len;
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

void read_snippets(const std::filesystem::path& path, Polarity label,
                   const DecodeOptions& options, std::vector<LabeledText>& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    try {
      out.push_back({decode_to_utf8(body, options, line_no), label});
    } catch (const DecodeError& e) {
      throw DecodeError(path.string() + ": " + e.reason(), line_no);
    }
  }
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_score(std::string_view field, const char* name, std::size_t line_no) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(std::string("malformed ") + name + " '" + std::string(field) + "'", line_no);
  }
  return v;
}

}  // namespace

std::string_view to_string(Polarity p) noexcept {
  return p == Polarity::Positive ? "positive" : "negative";
}

std::size_t RawCorpus::count(Polarity p) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [p](const LabeledText& r) { return r.label == p; }));
}

std::vector<Polarity> RawCorpus::labels() const {
  std::vector<Polarity> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.label);
  return out;
}

TextEncoding parse_encoding(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "windows-1252" || n == "cp1252") return TextEncoding::Windows1252;
  if (n == "latin-1" || n == "latin1" || n == "iso-8859-1") return TextEncoding::Latin1;
  if (n == "utf-8" || n == "utf8") return TextEncoding::Utf8;
  throw ConfigError("unknown encoding '" + std::string(name) + "'");
}

std::string_view to_string(TextEncoding e) noexcept {
  switch (e) {
    case TextEncoding::Windows1252: return "windows-1252";
    case TextEncoding::Latin1: return "latin-1";
    case TextEncoding::Utf8: return "utf-8";
  }
  return "?";
}

std::string decode_to_utf8(std::string_view bytes, const DecodeOptions& options, std::size_t line) {
  std::string out;
  out.reserve(bytes.size());
  for (std::size_t i = 0; i < bytes.size();) {
    const auto b = static_cast<unsigned char>(bytes[i]);
    if (b < 0x80) {
      out.push_back(static_cast<char>(b));
      ++i;
      continue;
    }
    switch (options.encoding) {
      case TextEncoding::Latin1:
        append_utf8(out, b);
        ++i;
        break;
      case TextEncoding::Windows1252: {
        char32_t cp = b;
        if (b < 0xA0) {
          cp = kCp1252High[b - 0x80];
          if (cp == 0) {
            if (options.strict) {
              char hex[8];
              std::snprintf(hex, sizeof hex, "0x%02X", b);
              throw DecodeError(std::string("byte ") + hex + " is undefined in windows-1252", line);
            }
            cp = b;  // lenient: pass through as the C1 control code point
          }
        }
        append_utf8(out, cp);
        ++i;
        break;
      }
      case TextEncoding::Utf8: {
        const auto len = utf8_sequence_length(bytes, i);
        if (len == 0) {
          if (options.strict) throw DecodeError("invalid UTF-8 sequence", line);
          append_utf8(out, kReplacement);
          ++i;
        } else {
          out.append(bytes.substr(i, len));
          i += len;
        }
        break;
      }
    }
  }
  return out;
}

RawCorpus load_polarity_corpus(const std::filesystem::path& pos_path,
                               const std::filesystem::path& neg_path,
                               const DecodeOptions& options) {
  RawCorpus corpus;
  read_snippets(pos_path, Polarity::Positive, options, corpus.records);
  read_snippets(neg_path, Polarity::Negative, options, corpus.records);
  return corpus;
}

LexiconEntry parse_sentiwordnet_line(std::string_view line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto fields = split(line, '\t');
  if (fields.size() < 5) throw ParseError("expected at least 5 tab-separated fields", line_no);

  LexiconEntry e;
  if (fields[0].size() != 1) throw ParseError("bad POS field '" + std::string(fields[0]) + "'", line_no);
  switch (fields[0][0]) {
    case 'a': e.pos_tag = PosTag::Adjective; break;
    case 'n': e.pos_tag = PosTag::Noun; break;
    case 'v': e.pos_tag = PosTag::Verb; break;
    case 'r': e.pos_tag = PosTag::Adverb; break;
    default: throw ParseError("bad POS field '" + std::string(fields[0]) + "'", line_no);
  }
  {
    const auto f = fields[1];
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), e.synset_id);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      throw ParseError("bad synset id '" + std::string(f) + "'", line_no);
    }
  }
  e.pos_score = parse_score(fields[2], "PosScore", line_no);
  e.neg_score = parse_score(fields[3], "NegScore", line_no);
  if (e.pos_score < 0 || e.pos_score > 1 || e.neg_score < 0 || e.neg_score > 1 ||
      e.pos_score + e.neg_score > 1 + 1e-9) {
    throw ValidationError("scores out of range at line " + std::to_string(line_no));
  }
  for (const auto term : split(fields[4], ' ')) {
    if (term.empty()) continue;
    const auto hash = term.rfind('#');
    if (hash == std::string_view::npos || hash == 0 || hash + 1 == term.size()) {
      throw ParseError("bad synset term '" + std::string(term) + "'", line_no);
    }
    SynsetTerm t;
    t.lemma = std::string(term.substr(0, hash));
    const auto rank = term.substr(hash + 1);
    auto [ptr, ec] = std::from_chars(rank.data(), rank.data() + rank.size(), t.sense_rank);
    if (ec != std::errc() || ptr != rank.data() + rank.size()) {
      throw ParseError("bad sense rank in '" + std::string(term) + "'", line_no);
    }
    e.terms.push_back(std::move(t));
  }
  if (e.terms.empty()) throw ParseError("synset without terms", line_no);
  return e;
}

SentiWordNet load_sentiwordnet(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open lexicon file: " + path.string());
  SentiWordNet lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      constexpr std::string_view kBanner = "# SentiWordNet v";
      if (lex.version.empty() && body.starts_with(kBanner)) {
        const auto rest = body.substr(kBanner.size());
        lex.version = std::string(rest.substr(0, rest.find(' ')));
      }
      continue;
    }
    auto entry = parse_sentiwordnet_line(line, line_no);
    for (const auto& t : entry.terms) {
      if (t.lemma.find('_') != std::string::npos) ++lex.multiword_terms;
    }
    lex.entries.push_back(std::move(entry));
  }
  return lex;
}

}  // namespace hww2v
