#include "neuroprobe/subset.hpp"

#include <numeric>
#include <string>

#include "neuroprobe/error.hpp"

namespace neuroprobe {

void NeuronSubset::validate() const {
  std::vector<std::uint8_t> seen(d, 0);
  for (std::size_t i : dims) {
    if (i >= d) throw Error("dimension index " + std::to_string(i) + " out of range for d = " + std::to_string(d));
    if (seen[i]) throw Error("duplicate dimension index " + std::to_string(i));
    seen[i] = 1;
  }
}

NeuronSubset NeuronSubset::full(std::size_t d) {
  NeuronSubset s;
  s.d = d;
  s.dims.resize(d);
  std::iota(s.dims.begin(), s.dims.end(), std::size_t{0});
  return s;
}

NeuronSubset NeuronSubset::empty(std::size_t d) {
  NeuronSubset s;
  s.d = d;
  return s;
}

NeuronSubset NeuronSubset::of(std::vector<std::size_t> dims, std::size_t d) {
  NeuronSubset s;
  s.dims = std::move(dims);
  s.d = d;
  s.validate();
  return s;
}

Inclusion to_inclusion(const NeuronSubset& subset) {
  subset.validate();
  Inclusion inc(subset.d, 0);
  for (std::size_t i : subset.dims) inc[i] = 1;
  return inc;
}

NeuronSubset from_inclusion(const Inclusion& inclusion) {
  NeuronSubset s;
  s.d = inclusion.size();
  for (std::size_t i = 0; i < inclusion.size(); ++i) {
    if (inclusion[i]) s.dims.push_back(i);
  }
  return s;
}

}  // namespace neuroprobe
