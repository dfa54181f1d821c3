#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "squarepack/geometry.hpp"

namespace squarepack {

enum class Direction { PosX, NegX, PosY, NegY };
enum class ShelfState { Open, Closed };

struct Point {
    Scalar x, y;
    bool operator==(const Point&) const = default;
};

// Height class of a side x in (0, 1]: the k with 2^-(k+1) < x <= 2^-k.
int classify(const Scalar& x);
// 2^-k, the upper end of class k.
Scalar class_width(int k);
// Part of a square of side x above the half height of a shelf of height h.
Scalar extra_area(const Scalar& x, const Scalar& h);

struct Shelf {
    std::size_t id = 0;
    Region bounds;
    Direction dir = Direction::PosX;
    int class_k = 0;
    ShelfState state = ShelfState::Open;
    std::vector<std::size_t> packed;
    Scalar cursor;
    Scalar assigned_extra;
    // Squares sit against the minimal perpendicular edge unless this is set.
    bool base_at_max = false;

    bool along_x() const { return dir == Direction::PosX || dir == Direction::NegX; }
    Scalar length() const { return along_x() ? bounds.width() : bounds.height(); }
    Scalar height() const { return along_x() ? bounds.height() : bounds.width(); }
    Scalar remaining() const { return length() - cursor; }
    bool is_open() const { return state == ShelfState::Open; }
};

enum class ChargeKind { Extra, Buffer };

// Area moved between shelves by the charging scheme. Empty endpoints stand
// for the anonymous buffer pool.
struct ChargeEntry {
    ChargeKind kind = ChargeKind::Extra;
    std::optional<std::size_t> from_square;
    std::optional<std::size_t> from_shelf;
    std::optional<std::size_t> to_shelf;
    Scalar amount;
    std::size_t step = 0;
};

struct Overflow {
    bool operator==(const Overflow&) const = default;
};
using PackResult = std::variant<Point, Overflow>;

// Position the next square of side x would take at the cursor.
Point shelf_next_position(const Shelf& s, const Scalar& x);
// Packs at the cursor. Overflow leaves the shelf untouched. Throws
// std::logic_error if x does not belong to the shelf's class or height.
PackResult shelf_try_pack(Shelf& s, const Scalar& x, std::size_t square_id);
// Reserves a slab of length w across the full height at the cursor.
std::optional<Region> shelf_carve(Shelf& s, const Scalar& w);

// Slab between offsets [from, to] measured along the packing direction.
Region shelf_section(const Shelf& s, const Scalar& from, const Scalar& to);
Region head(const Shelf& s);
Region shelf_end(const Shelf& s);
Region used_section(const Shelf& s);

// Packed area plus charges received, minus extra area of packed squares
// charged elsewhere. Buffer assignments leaving the shelf are not deducted.
Scalar total_area_of(const Shelf& s, const std::vector<PlacedSquare>& squares,
                     const std::vector<ChargeEntry>& ledger);

} // namespace squarepack
