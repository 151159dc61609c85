#pragma once

#include <functional>
#include <utility>

namespace ergomean {

enum class Regularity { continuous, l1, stepwise };

// Measurable map from the group into the space, evaluated lazily along
// orbits. Evaluation must be deterministic in its argument.
template <typename Element, typename P>
struct OrbitFunction {
  std::function<P(const Element&)> evaluate;
  Regularity regularity = Regularity::continuous;
};

template <typename Element, typename P>
OrbitFunction<Element, P> constant_orbit_function(P value) {
  return {.evaluate = [v = std::move(value)](const Element&) { return v; },
          .regularity = Regularity::continuous};
}

}  // namespace ergomean
