#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace neuroprobe {

// 64-bit FNV-1a. Content key for job cache markers, not a security primitive.
class ContentHash {
 public:
  ContentHash& update(std::string_view bytes);
  ContentHash& update_file(const std::string& path);
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace neuroprobe
