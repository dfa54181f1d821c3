#include "squarepack/brick.hpp"

#include <cmath>
#include <stdexcept>

namespace squarepack {

int smallest_brick_for(const Scalar& x)
{
    if (x.sign() <= 0)
        throw std::invalid_argument("side must be positive: " + x.to_string());
    int k = static_cast<int>(std::ceil(2.0 * std::log2(x.to_double())));
    while (Scalar::sqrt2_pow(k - 1) >= x)
        --k;
    while (Scalar::sqrt2_pow(k) < x)
        ++k;
    return k;
}

namespace {

Scalar brick_area(int k)
{
    return Scalar::sqrt2_pow(2 * k + 1);
}

} // namespace

std::size_t BrickTree::add_node(Brick b)
{
    nodes_.push_back(std::move(b));
    return nodes_.size() - 1;
}

void BrickTree::mark_free(std::size_t i)
{
    Brick& b = nodes_[i];
    b.state = BrickState::Free;
    free_[b.exponent].emplace(Key{b.y, b.x}, i);
    free_area_ += brick_area(b.exponent);
}

void BrickTree::unmark_free(std::size_t i)
{
    const Brick& b = nodes_[i];
    auto bucket = free_.find(b.exponent);
    bucket->second.erase(Key{b.y, b.x});
    if (bucket->second.empty())
        free_.erase(bucket);
    free_area_ -= brick_area(b.exponent);
}

void BrickTree::double_root()
{
    const Brick old = nodes_[root_];
    Brick sib;
    sib.exponent = old.exponent;
    sib.long_horizontal = old.long_horizontal;
    // The new half goes beyond the short side so the root stays at the origin.
    if (old.long_horizontal)
        sib.y = old.short_side();
    else
        sib.x = old.short_side();
    Brick top;
    top.exponent = old.exponent + 1;
    top.long_horizontal = !old.long_horizontal;
    top.state = BrickState::Split;
    std::size_t s = add_node(std::move(sib));
    std::size_t t = add_node(std::move(top));
    nodes_[t].children = {root_, s};
    nodes_[root_].parent = t;
    nodes_[s].parent = t;
    root_ = t;
    mark_free(s);
}

void BrickTree::split(std::size_t i)
{
    unmark_free(i);
    Brick a;
    a.exponent = nodes_[i].exponent - 1;
    a.long_horizontal = !nodes_[i].long_horizontal;
    a.x = nodes_[i].x;
    a.y = nodes_[i].y;
    a.parent = i;
    Brick b = a;
    Scalar half = Scalar::sqrt2_pow(nodes_[i].exponent - 1);
    if (nodes_[i].long_horizontal)
        b.x += half;
    else
        b.y += half;
    std::size_t ca = add_node(std::move(a));
    std::size_t cb = add_node(std::move(b));
    nodes_[i].state = BrickState::Split;
    nodes_[i].children = {ca, cb};
    mark_free(ca);
    mark_free(cb);
}

std::optional<std::size_t> BrickTree::smallest_free(int exponent) const
{
    auto it = free_.lower_bound(exponent);
    if (it == free_.end())
        return std::nullopt;
    return it->second.begin()->second;
}

PlacedSquare BrickTree::pack(const Scalar& x)
{
    int k = smallest_brick_for(x);
    std::size_t target;
    if (nodes_.empty()) {
        Brick r;
        r.exponent = k;
        root_ = add_node(std::move(r));
        mark_free(root_);
        target = root_;
    } else {
        std::optional<std::size_t> found;
        while (!(found = smallest_free(k)))
            double_root();
        target = *found;
        while (nodes_[target].exponent > k) {
            split(target);
            target = nodes_[target].children[0];
        }
    }
    unmark_free(target);
    Brick& b = nodes_[target];
    b.state = BrickState::Occupied;
    b.square = placed_.size();

    PlacedSquare sq;
    sq.x = b.x;
    sq.y = b.y;
    sq.side = x;
    sq.id = placed_.size();
    sq.cls = k;
    placed_.push_back(sq);
    square_brick_.push_back(target);
    total_area_ += x * x;
    span_w_ = max(span_w_, sq.x + x);
    span_h_ = max(span_h_, sq.y + x);
    return sq;
}

DensityReport density_report(const BrickTree& t)
{
    if (t.empty())
        throw std::logic_error("density of an empty brick tree");
    const Brick& r = t.nodes_[t.root_];
    DensityReport d;
    d.total_area = t.total_area_;
    d.bmax_area = brick_area(r.exponent);
    d.enclosing_square_side = r.long_side();
    d.density = t.total_area_ / (d.enclosing_square_side * d.enclosing_square_side);
    d.spanning_width = t.span_w_;
    d.spanning_height = t.span_h_;
    return d;
}

BrickTree pack_dynamic(const std::vector<Scalar>& sides)
{
    BrickTree t;
    for (const Scalar& s : sides)
        t.pack(s);
    return t;
}

} // namespace squarepack
