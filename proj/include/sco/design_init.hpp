#ifndef SCO_DESIGN_INIT_HPP
#define SCO_DESIGN_INIT_HPP

#include <cstdint>

#include "sco/point.hpp"

namespace sco {

// Space-filling initial design on the unit cube: a centered Latin hypercube
// whose per-coordinate assignment is improved by swap descent under the
// closed-form uniform-target discrepancy. Deterministic for a fixed seed.
Design initial_design(std::size_t dim, std::size_t n, std::uint64_t seed);

// Full factorial mesh with the given number of levels per axis, spaced evenly
// from 0 to 1 inclusive. Size is per_axis^dim.
Design mesh_design(std::size_t dim, std::size_t per_axis);

} // namespace sco

#endif
