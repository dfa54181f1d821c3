#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "squarepack/shelf.hpp"

namespace squarepack::testing {

// Side in (2^-(k+1), 2^-k] drawn on a grid of 2^bits steps.
inline Scalar random_side_in_class(std::mt19937_64& g, int k, int bits = 20)
{
    std::uint64_t steps = std::uint64_t{1} << bits;
    std::uint64_t r = 1 + g() % steps;
    return Scalar::pow2(-(k + 1)) * (Scalar(1) + Scalar(mpq_class(mpz_class(static_cast<unsigned long>(r)),
                                                                  mpz_class(static_cast<unsigned long>(steps)))));
}

struct ShelfTrial {
    Scalar height, length;
    Scalar packed_area;
    Scalar cursor;
    Scalar overflow_side;
    Scalar total;
    Scalar lemma_lhs, lemma_rhs;
    Scalar corollary_bound;
};

// Fills one horizontal class-k shelf with same-class squares until one
// overflows, then charges that square's extra area to the shelf.
inline ShelfTrial shelf_fill_trial(std::uint64_t seed)
{
    std::mt19937_64 g(seed);
    int k = 2 + static_cast<int>(g() % 6);
    Scalar h = Scalar::pow2(-k);
    // Length between h and 1 on a 1/1024 grid.
    long units = static_cast<long>(g() % 1024) + 1;
    Scalar len = h + (Scalar(1) - h) * Scalar::frac(units, 1024);

    Shelf s;
    s.id = 0;
    s.bounds = Region(0, 0, len, h);
    s.class_k = k;
    std::vector<PlacedSquare> squares;
    Scalar sum;
    while (true) {
        Scalar x = random_side_in_class(g, k);
        PackResult r = shelf_try_pack(s, x, squares.size());
        if (std::holds_alternative<Overflow>(r)) {
            s.state = ShelfState::Closed;
            ChargeEntry c;
            c.kind = ChargeKind::Extra;
            c.from_square = squares.size();
            c.to_shelf = s.id;
            c.amount = x * x - x * h * Scalar::frac(1, 2);
            ShelfTrial t;
            t.height = h;
            t.length = len;
            t.packed_area = sum;
            t.cursor = s.cursor;
            t.overflow_side = x;
            t.total = total_area_of(s, squares, {c});
            t.lemma_lhs = sum + x * x;
            t.lemma_rhs = len * h * Scalar::frac(1, 2) - h * h * Scalar::frac(1, 4) + h * x * Scalar::frac(1, 2);
            t.corollary_bound = (len - h * Scalar::frac(1, 2)) * h * Scalar::frac(1, 2);
            return t;
        }
        PlacedSquare p;
        p.x = std::get<Point>(r).x;
        p.y = std::get<Point>(r).y;
        p.side = x;
        p.id = squares.size();
        squares.push_back(p);
        sum += x * x;
    }
}

} // namespace squarepack::testing
