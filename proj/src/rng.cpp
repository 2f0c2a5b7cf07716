#include "spread/rng.hpp"

#include "spread/errors.hpp"

#include <algorithm>

namespace spread {

std::vector<std::uint32_t> random_subset(SplitMix64& g, std::uint32_t universe,
                                         std::uint32_t size) {
  if (size > universe)
    throw Error(ErrKind::precondition, "random_subset: size exceeds universe");
  // Floyd's algorithm: one uniform draw per selected element.
  std::vector<std::uint32_t> out;
  out.reserve(size);
  for (std::uint32_t j = universe - size; j < universe; ++j) {
    std::uint32_t r = static_cast<std::uint32_t>(uniform_below(g, j + 1));
    auto it = std::lower_bound(out.begin(), out.end(), r);
    if (it != out.end() && *it == r) {
      auto jt = std::lower_bound(out.begin(), out.end(), j);
      out.insert(jt, j);
    } else {
      out.insert(it, r);
    }
  }
  return out;
}

} // namespace spread
