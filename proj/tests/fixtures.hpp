#pragma once

#include <memory>
#include <vector>

#include "torich/fan.hpp"

namespace fixtures {

using torich::Fan;
using torich::NVector;

inline std::shared_ptr<const Fan> make(std::size_t rank, std::vector<NVector> rays,
                                       std::vector<std::vector<std::size_t>> cones) {
  return std::make_shared<const Fan>(Fan::build(rank, std::move(rays), cones));
}

inline std::shared_ptr<const Fan> p1() { return make(1, {{1}, {-1}}, {{0}, {1}}); }

inline std::shared_ptr<const Fan> p2() {
  return make(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {2, 0}});
}

inline std::shared_ptr<const Fan> p1xp1() {
  return make(2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

inline std::shared_ptr<const Fan> p3() {
  return make(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}},
              {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

// Weighted projective plane P(1,1,2): one singular chart.
inline std::shared_ptr<const Fan> p112() {
  return make(2, {{1, 0}, {0, 1}, {-1, -2}}, {{0, 1}, {1, 2}, {2, 0}});
}

// P^2 blown up at a fixed point: ray (1,1) subdivides cone(e1, e2).
inline std::shared_ptr<const Fan> blowup_p2() {
  return make(2, {{1, 0}, {0, 1}, {-1, -1}, {1, 1}}, {{0, 3}, {3, 1}, {1, 2}, {2, 0}});
}

inline std::shared_ptr<const Fan> affine_a3() {
  return make(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2}});
}

inline std::shared_ptr<const Fan> affine_a2() { return make(2, {{1, 0}, {0, 1}}, {{0, 1}}); }

}  // namespace fixtures
