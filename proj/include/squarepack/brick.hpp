#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "squarepack/geometry.hpp"

namespace squarepack {

enum class BrickState { Free, Occupied, Split };

// Rectangle with sides sqrt2^k and sqrt2^(k+1).
struct Brick {
    int exponent = 0;
    bool long_horizontal = false;
    Scalar x, y;
    BrickState state = BrickState::Free;
    std::optional<std::size_t> square;
    std::optional<std::size_t> parent;
    std::array<std::size_t, 2> children{};

    Scalar short_side() const { return Scalar::sqrt2_pow(exponent); }
    Scalar long_side() const { return Scalar::sqrt2_pow(exponent + 1); }
    Scalar width() const { return long_horizontal ? long_side() : short_side(); }
    Scalar height() const { return long_horizontal ? short_side() : long_side(); }
    Region bounds() const { return Region(x, y, x + width(), y + height()); }
};

// Smallest k with sqrt2^k >= x.
int smallest_brick_for(const Scalar& x);

struct DensityReport {
    Scalar total_area;
    Scalar bmax_area;
    Scalar enclosing_square_side;
    Scalar density;
    Scalar spanning_width, spanning_height;
};

class BrickTree {
public:
    // Never fails; throws std::invalid_argument for x <= 0.
    PlacedSquare pack(const Scalar& x);

    bool empty() const { return nodes_.empty(); }
    std::size_t root() const { return root_; }
    const std::vector<Brick>& nodes() const { return nodes_; }
    const std::vector<PlacedSquare>& placed() const { return placed_; }
    // Brick each square occupies.
    const std::vector<std::size_t>& square_brick() const { return square_brick_; }
    const Scalar& total_area() const { return total_area_; }
    const Scalar& free_area() const { return free_area_; }
    int root_exponent() const { return nodes_.at(root_).exponent; }

    // Test hook for negative controls.
    Brick& mutable_node(std::size_t i) { return nodes_.at(i); }

private:
    using Key = std::pair<Scalar, Scalar>;

    std::size_t add_node(Brick b);
    void mark_free(std::size_t i);
    void unmark_free(std::size_t i);
    void double_root();
    void split(std::size_t i);
    std::optional<std::size_t> smallest_free(int exponent) const;

    std::vector<Brick> nodes_;
    std::size_t root_ = 0;
    std::map<int, std::map<Key, std::size_t>> free_;
    std::vector<PlacedSquare> placed_;
    std::vector<std::size_t> square_brick_;
    Scalar total_area_;
    Scalar free_area_;
    Scalar span_w_, span_h_;

    friend DensityReport density_report(const BrickTree& t);
};

// Throws std::logic_error on an empty tree.
DensityReport density_report(const BrickTree& t);

// Packs the whole stream into a fresh tree.
BrickTree pack_dynamic(const std::vector<Scalar>& sides);

} // namespace squarepack
