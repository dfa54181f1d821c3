#include "squarepack/shelf.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace squarepack {

int classify(const Scalar& x)
{
    if (x.sign() <= 0 || x > Scalar(1))
        throw std::invalid_argument("side must lie in (0, 1]: " + x.to_string());
    if (x.is_rational()) {
        // k = floor(log2(q / p)) for x = p / q.
        const mpz_class& p = x.rational_part().get_num();
        const mpz_class& q = x.rational_part().get_den();
        long e = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2));
        mpz_class shifted;
        mpz_mul_2exp(shifted.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(std::max(e, 0L)));
        return static_cast<int>(q >= shifted ? e : e - 1);
    }
    int k = 0;
    Scalar bound = Scalar::frac(1, 2);
    while (!(x > bound)) {
        ++k;
        bound *= Scalar::frac(1, 2);
    }
    return k;
}

Scalar class_width(int k)
{
    return Scalar::pow2(-k);
}

Scalar extra_area(const Scalar& x, const Scalar& h)
{
    return x * (x - h * Scalar::frac(1, 2));
}

Point shelf_next_position(const Shelf& s, const Scalar& x)
{
    const Region& b = s.bounds;
    switch (s.dir) {
    case Direction::PosX:
        return {b.x0 + s.cursor, s.base_at_max ? b.y1 - x : b.y0};
    case Direction::NegX:
        return {b.x1 - s.cursor - x, s.base_at_max ? b.y1 - x : b.y0};
    case Direction::PosY:
        return {s.base_at_max ? b.x1 - x : b.x0, b.y0 + s.cursor};
    case Direction::NegY:
        return {s.base_at_max ? b.x1 - x : b.x0, b.y1 - s.cursor - x};
    }
    throw std::logic_error("bad direction");
}

PackResult shelf_try_pack(Shelf& s, const Scalar& x, std::size_t square_id)
{
    if (classify(x) != s.class_k || x > s.height())
        throw std::logic_error("square of side " + x.to_string() + " does not belong to shelf class "
                               + std::to_string(s.class_k));
    if (!s.is_open() || s.cursor + x > s.length())
        return Overflow{};
    Point p = shelf_next_position(s, x);
    s.cursor += x;
    s.packed.push_back(square_id);
    return p;
}

std::optional<Region> shelf_carve(Shelf& s, const Scalar& w)
{
    if (!s.is_open() || s.cursor + w > s.length())
        return std::nullopt;
    Region r = shelf_section(s, s.cursor, s.cursor + w);
    s.cursor += w;
    return r;
}

Region shelf_section(const Shelf& s, const Scalar& from, const Scalar& to)
{
    const Region& b = s.bounds;
    switch (s.dir) {
    case Direction::PosX:
        return Region(b.x0 + from, b.y0, b.x0 + to, b.y1);
    case Direction::NegX:
        return Region(b.x1 - to, b.y0, b.x1 - from, b.y1);
    case Direction::PosY:
        return Region(b.x0, b.y0 + from, b.x1, b.y0 + to);
    case Direction::NegY:
        return Region(b.x0, b.y1 - to, b.x1, b.y1 - from);
    }
    throw std::logic_error("bad direction");
}

Region head(const Shelf& s)
{
    Scalar len = s.length();
    return shelf_section(s, max(Scalar(0), len - s.height()), len);
}

Region shelf_end(const Shelf& s)
{
    Scalar len = s.length();
    return shelf_section(s, max(Scalar(0), len - s.height() * Scalar::frac(1, 2)), len);
}

Region used_section(const Shelf& s)
{
    return shelf_section(s, Scalar(0), s.cursor);
}

Scalar total_area_of(const Shelf& s, const std::vector<PlacedSquare>& squares,
                     const std::vector<ChargeEntry>& ledger)
{
    Scalar total;
    std::unordered_set<std::size_t> mine(s.packed.begin(), s.packed.end());
    for (std::size_t id : s.packed)
        total += squares.at(id).side * squares.at(id).side;
    for (const ChargeEntry& c : ledger) {
        if (c.to_shelf && *c.to_shelf == s.id)
            total += c.amount;
        if (c.kind == ChargeKind::Extra && c.from_square && mine.count(*c.from_square)
            && !(c.to_shelf && *c.to_shelf == s.id))
            total -= c.amount;
    }
    return total;
}

} // namespace squarepack
