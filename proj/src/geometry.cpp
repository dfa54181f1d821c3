#include "squarepack/geometry.hpp"

#include <stdexcept>

namespace squarepack {

Region::Region(Scalar ax0, Scalar ay0, Scalar ax1, Scalar ay1)
    : x0(std::move(ax0)), y0(std::move(ay0)), x1(std::move(ax1)), y1(std::move(ay1))
{
}

Region unit_square()
{
    return Region(0, 0, 1, 1);
}

bool interiors_overlap(const Region& a, const Region& b)
{
    return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

bool interiors_overlap(const PlacedSquare& a, const PlacedSquare& b)
{
    return a.x < b.x + b.side && b.x < a.x + a.side && a.y < b.y + b.side && b.y < a.y + a.side;
}

bool interiors_overlap(const PlacedSquare& a, const Region& b)
{
    return interiors_overlap(a.bounds(), b);
}

bool contains(const Region& outer, const Region& inner)
{
    return outer.x0 <= inner.x0 && inner.x1 <= outer.x1 && outer.y0 <= inner.y0 && inner.y1 <= outer.y1;
}

bool contains(const Region& outer, const PlacedSquare& inner)
{
    return contains(outer, inner.bounds());
}

Scalar area(const Region& r)
{
    Scalar w = r.width();
    Scalar h = r.height();
    if (w.sign() <= 0 || h.sign() <= 0)
        throw std::invalid_argument("degenerate region");
    return w * h;
}

Scalar area(const PlacedSquare& s)
{
    if (s.side.sign() <= 0)
        throw std::invalid_argument("square side must be positive");
    return s.side * s.side;
}

} // namespace squarepack
