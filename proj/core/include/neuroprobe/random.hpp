#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace neuroprobe {

// mt19937_64's output sequence is fixed by the standard; the distributions in
// <random> are not, so everything that turns raw bits into numbers lives here.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits.
double uniform01(Rng& rng);

/// Uniform integer in [0, n), Lemire's nearly-divisionless method. n > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

/// Standard normal via the Marsaglia polar method (no cached spare).
double standard_normal(Rng& rng);

/// Fisher-Yates shuffle with uniform_below.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Child seed for a named stream, e.g. derive_seed(seed, "dev-eval").
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

}  // namespace neuroprobe
