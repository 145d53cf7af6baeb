#include "neuroprobe/hash.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include "neuroprobe/error.hpp"

namespace neuroprobe {

namespace {
constexpr std::uint64_t kPrime = 0x100000001b3ULL;
}

ContentHash& ContentHash::update(std::string_view bytes) {
  for (unsigned char c : bytes) {
    state_ ^= c;
    state_ *= kPrime;
  }
  return *this;
}

ContentHash& ContentHash::update_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path + " for hashing");
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    update(std::string_view(buffer.data(), static_cast<std::size_t>(in.gcount())));
  }
  return *this;
}

std::string ContentHash::hex() const {
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(state_));
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) { return ContentHash().update(bytes).value(); }

}  // namespace neuroprobe
