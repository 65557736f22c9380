#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unistd.h>

#include "hww2v/text_prep.hpp"

namespace hww2v::test {

/// Removed with its contents on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hww2v-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(std::string_view name) const { return path_ / name; }
  std::filesystem::path write(std::string_view name, std::string_view bytes) const {
    const auto p = file(name);
    std::ofstream(p, std::ios::binary) << bytes;
    return p;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Document from space-separated token keys, sentences split by " | ".
inline PreparedDocument doc_of(std::string_view spec, Polarity label = Polarity::Positive) {
  PreparedDocument d;
  d.label = label;
  Sentence cur;
  std::size_t i = 0;
  while (i <= spec.size()) {
    const std::size_t j = std::min(spec.find(' ', i), spec.size());
    const std::string_view word = spec.substr(i, j - i);
    if (word == "|") {
      d.sentences.push_back(std::move(cur));
      cur.clear();
    } else if (!word.empty()) {
      cur.push_back(Token::from_key(word));
    }
    i = j + 1;
  }
  if (!cur.empty()) d.sentences.push_back(std::move(cur));
  return d;
}

}  // namespace hww2v::test
