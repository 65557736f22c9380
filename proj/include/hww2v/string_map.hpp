#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace hww2v {

/// Lets string-keyed maps be probed with a string_view without a copy.
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

}  // namespace hww2v
