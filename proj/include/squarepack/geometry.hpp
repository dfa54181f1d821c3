#pragma once

#include <cstddef>

#include "squarepack/scalar.hpp"

namespace squarepack {

struct Region {
    Scalar x0, y0, x1, y1;

    Region() = default;
    Region(Scalar ax0, Scalar ay0, Scalar ax1, Scalar ay1);

    Scalar width() const { return x1 - x0; }
    Scalar height() const { return y1 - y0; }
    bool operator==(const Region&) const = default;
};

struct PlacedSquare {
    Scalar x, y, side;
    std::size_t id = 0;
    int cls = 0;

    Region bounds() const { return Region(x, y, x + side, y + side); }
    bool operator==(const PlacedSquare&) const = default;
};

Region unit_square();

bool interiors_overlap(const Region& a, const Region& b);
bool interiors_overlap(const PlacedSquare& a, const PlacedSquare& b);
bool interiors_overlap(const PlacedSquare& a, const Region& b);

bool contains(const Region& outer, const Region& inner);
bool contains(const Region& outer, const PlacedSquare& inner);

// Throws std::invalid_argument for non-positive extents.
Scalar area(const Region& r);
Scalar area(const PlacedSquare& s);

} // namespace squarepack
