// Fixed word lists used by the preprocessing pipeline.

#include <string>
#include <unordered_map>
#include <vector>

#include "hww2v/text_prep.hpp"

namespace hww2v {

const std::vector<std::string>& default_stopwords() {
  // Common English function words. Negation cues such as "not", "no" and
  // "nor" are listed: removal runs after negation marking, so they still
  // open a scope before being dropped.
  static const std::vector<std::string> words = {
      "i",       "me",      "my",      "myself",  "we",       "our",     "ours",    "ourselves",
      "you",     "your",    "yours",   "yourself", "yourselves", "he",   "him",     "his",
      "himself", "she",     "her",     "hers",    "herself",  "it",      "its",     "itself",
      "they",    "them",    "their",   "theirs",  "themselves", "what",  "which",   "who",
      "whom",    "this",    "that",    "these",   "those",    "am",      "is",      "are",
      "was",     "were",    "be",      "been",    "being",    "have",    "has",     "had",
      "having",  "do",      "does",    "did",     "doing",    "would",   "should",  "could",
      "a",       "an",      "the",     "and",     "or",       "because", "as",      "until",
      "while",   "of",      "at",      "by",      "for",      "with",    "about",  
      "into",    "through", "during",  "before",  "after",    "above",   "below",   "to",
      "from",    "up",      "down",    "in",      "out",      "on",      "off",     "over",
      "under",   "again",   "further", "then",    "once",     "here",    "there",   "when",
      "where",   "why",     "how",     "all",     "any",      "both",    "each",    "other",
      "some",    "such",    "no",      "nor",     "not",      "only",    "own",     "same",
      "than",    "s",       "t",       "can",      "will",    "just",    "don",
      "now",     "d",       "ll",      "m",       "o",        "re",      "ve",      "y",
      "us",      "shall",   "may",     "might",   "must",     "also",    "if",      "whose",
      "yet",     "though",  "upon",    "within",  "via",     "whether", "let",
      "else",    "ever",    "often",   "since",   "therefore", "thus",   "whereas", "wherever",
  };
  return words;
}

const std::vector<std::string>& default_negation_cues() {
  static const std::vector<std::string> cues = {"not",     "no",   "never",   "nothing", "nowhere",
                                                "none",    "neither", "nor"};
  return cues;
}

namespace detail {

const std::unordered_map<std::string, std::vector<std::string>>& contraction_table() {
  static const std::unordered_map<std::string, std::vector<std::string>> table = {
      {"ain't", {"is", "not"}},         {"aren't", {"are", "not"}},
      {"can't", {"can", "not"}},        {"cannot", {"can", "not"}},
      {"couldn't", {"could", "not"}},   {"didn't", {"did", "not"}},
      {"doesn't", {"does", "not"}},     {"don't", {"do", "not"}},
      {"hadn't", {"had", "not"}},       {"hasn't", {"has", "not"}},
      {"haven't", {"have", "not"}},     {"isn't", {"is", "not"}},
      {"mightn't", {"might", "not"}},   {"mustn't", {"must", "not"}},
      {"needn't", {"need", "not"}},     {"shan't", {"shall", "not"}},
      {"shouldn't", {"should", "not"}}, {"wasn't", {"was", "not"}},
      {"weren't", {"were", "not"}},     {"won't", {"will", "not"}},
      {"wouldn't", {"would", "not"}},   {"daren't", {"dare", "not"}},
      {"i'm", {"i", "am"}},             {"i've", {"i", "have"}},
      {"i'll", {"i", "will"}},          {"i'd", {"i", "would"}},
      {"you're", {"you", "are"}},       {"you've", {"you", "have"}},
      {"you'll", {"you", "will"}},      {"you'd", {"you", "would"}},
      {"he's", {"he", "is"}},           {"he'll", {"he", "will"}},
      {"he'd", {"he", "would"}},        {"she's", {"she", "is"}},
      {"she'll", {"she", "will"}},      {"she'd", {"she", "would"}},
      {"it's", {"it", "is"}},           {"it'll", {"it", "will"}},
      {"it'd", {"it", "would"}},        {"we're", {"we", "are"}},
      {"we've", {"we", "have"}},        {"we'll", {"we", "will"}},
      {"we'd", {"we", "would"}},        {"they're", {"they", "are"}},
      {"they've", {"they", "have"}},    {"they'll", {"they", "will"}},
      {"they'd", {"they", "would"}},    {"that's", {"that", "is"}},
      {"that'll", {"that", "will"}},    {"that'd", {"that", "would"}},
      {"there's", {"there", "is"}},     {"there're", {"there", "are"}},
      {"there'll", {"there", "will"}},  {"there'd", {"there", "would"}},
      {"here's", {"here", "is"}},       {"what's", {"what", "is"}},
      {"what're", {"what", "are"}},     {"what'll", {"what", "will"}},
      {"what'd", {"what", "did"}},      {"where's", {"where", "is"}},
      {"where'd", {"where", "did"}},    {"who's", {"who", "is"}},
      {"who're", {"who", "are"}},       {"who'll", {"who", "will"}},
      {"who'd", {"who", "would"}},      {"who've", {"who", "have"}},
      {"how's", {"how", "is"}},         {"how'd", {"how", "did"}},
      {"when's", {"when", "is"}},       {"why's", {"why", "is"}},
      {"let's", {"let", "us"}},         {"y'all", {"you", "all"}},
      {"could've", {"could", "have"}},  {"should've", {"should", "have"}},
      {"would've", {"would", "have"}},  {"might've", {"might", "have"}},
      {"must've", {"must", "have"}},    {"'em", {"them"}},
      {"'cause", {"because"}},          {"ma'am", {"madam"}},
      {"gonna", {"going", "to"}},       {"wanna", {"want", "to"}},
      {"gotta", {"got", "to"}},         {"gimme", {"give", "me"}},
      {"lemme", {"let", "me"}},         {"dunno", {"do", "not", "know"}},
      {"everybody's", {"everybody", "is"}}, {"everyone's", {"everyone", "is"}},
      {"nobody's", {"nobody", "is"}},   {"somebody's", {"somebody", "is"}},
      {"someone's", {"someone", "is"}}, {"something's", {"something", "is"}},
      {"nothing's", {"nothing", "is"}}, {"this'll", {"this", "will"}},
  };
  return table;
}

}  // namespace detail
}  // namespace hww2v
