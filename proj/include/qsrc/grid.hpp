#pragma once

#include <cstddef>
#include <stdexcept>

#include "qsrc/vec3.hpp"

namespace qsrc {

// Axis-aligned box of sample points.  Index order: x fastest, then y, then z.
struct GridGeometry {
    Vec3 origin{};           // position of sample (0,0,0)
    Vec3 spacing{1, 1, 1};   // per-axis step; must be > 0 on axes with n > 1
    int nx = 1;
    int ny = 1;
    int nz = 1;

    std::size_t size() const {
        return static_cast<std::size_t>(nx) * ny * nz;
    }
    std::size_t index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(iz) * ny + iy) * nx + ix;
    }
    Vec3 point(int ix, int iy, int iz) const {
        return {origin.x + ix * spacing.x,
                origin.y + iy * spacing.y,
                origin.z + iz * spacing.z};
    }
    void validate() const {
        if (nx < 1 || ny < 1 || nz < 1)
            throw std::invalid_argument("grid: dimensions must be >= 1");
        if ((nx > 1 && spacing.x <= 0) || (ny > 1 && spacing.y <= 0) ||
            (nz > 1 && spacing.z <= 0))
            throw std::invalid_argument("grid: spacing must be positive");
    }
};

} // namespace qsrc
