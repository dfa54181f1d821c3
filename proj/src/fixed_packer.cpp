#include "squarepack/fixed_packer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace squarepack {

namespace {

Scalar q(long p, long d)
{
    return Scalar::frac(p, d);
}

} // namespace

const RegionLayout& RegionLayout::standard()
{
    static const RegionLayout layout = [] {
        RegionLayout l;
        l.M = {Region(0, 0, 1, q(1, 4)), Region(q(1, 2), q(1, 4), 1, q(1, 2)),
               Region(0, q(1, 2), q(3, 4), q(3, 4)), Region(0, q(3, 4), q(7, 8), 1)};
        l.m_dir = {Direction::PosX, Direction::NegX, Direction::NegX, Direction::NegX};
        l.E = {Region(q(7, 8), 0, 1, q(1, 4)), Region(q(1, 2), q(1, 4), q(5, 8), q(1, 2)),
               Region(0, q(1, 2), q(1, 8), q(3, 4))};
        l.B = {Region(0, q(1, 4), q(1, 2), q(3, 8)), Region(q(1, 4), q(3, 8), q(1, 2), q(1, 2)),
               Region(q(7, 8), q(1, 2), 1, 1), Region(q(3, 4), q(1, 2), q(7, 8), q(3, 4))};
        l.b_dir = {Direction::PosX, Direction::PosX, Direction::PosY, Direction::PosY};
        l.A = Region(0, q(3, 8), q(1, 4), q(1, 2));
        l.lower = Region(0, 0, 1, q(1, 2));
        l.upper = Region(0, q(1, 2), 1, 1);
        return l;
    }();
    return layout;
}

std::vector<NamedRegion> RegionLayout::tiles() const
{
    std::vector<NamedRegion> out;
    for (int i = 0; i < 4; ++i)
        out.push_back({"M" + std::to_string(i + 1), M[i]});
    for (int j = 0; j < 4; ++j)
        out.push_back({"B" + std::to_string(j + 1), B[j]});
    out.push_back({"A", A});
    return out;
}

const char* to_string(ShelfKind k)
{
    switch (k) {
    case ShelfKind::Main: return "main";
    case ShelfKind::Vertical: return "vertical";
    case ShelfKind::Initial: return "initial";
    case ShelfKind::InitialH3: return "initial-h3";
    case ShelfKind::Buffer: return "buffer";
    case ShelfKind::BufferSub: return "buffer-sub";
    case ShelfKind::EndBuffer: return "end-buffer";
    case ShelfKind::EndSub: return "end-sub";
    }
    return "?";
}

const char* to_string(DecisionKind k)
{
    switch (k) {
    case DecisionKind::PackIntoVertical: return "into-vertical";
    case DecisionKind::BufferSquare: return "buffer-square";
    case DecisionKind::BufferSubshelf: return "buffer-subshelf";
    case DecisionKind::BufferExhausted: return "buffer-exhausted";
    case DecisionKind::EndSquare: return "end-square";
    case DecisionKind::EndOversize: return "end-oversize";
    case DecisionKind::EndSubshelf: return "end-subshelf";
    }
    return "?";
}

Scalar BufferLedger::beta() const
{
    return b + q(3, 32) * Scalar(e) - q(3, 16);
}

Scalar BufferLedger::alpha() const
{
    return v * q(1, 2);
}

BufferCase buffer_case(const Scalar& beta, const Scalar& alpha, const Scalar& x, int k)
{
    if (beta >= alpha || beta + x >= alpha + q(1, 16))
        return BufferCase::IntoVertical;
    return k == 3 ? BufferCase::BufferSquare : BufferCase::BufferSubshelf;
}

FixedPacker::FixedPacker() : cells_(kGrid * kGrid)
{
    const RegionLayout& l = layout();
    for (int i = 0; i < 4; ++i) {
        Shelf s;
        s.bounds = l.M[i];
        s.dir = l.m_dir[i];
        s.class_k = 2;
        ShelfMeta m;
        m.kind = ShelfKind::Main;
        m.region = i;
        main_id_[i] = add_shelf(std::move(s), std::move(m));
    }
    for (int j = 0; j < 4; ++j) {
        Shelf s;
        s.bounds = l.B[j];
        s.dir = l.b_dir[j];
        s.class_k = 3;
        ShelfMeta m;
        m.kind = ShelfKind::Buffer;
        m.region = j;
        buffer_id_[j] = add_shelf(std::move(s), std::move(m));
    }
}

// ---------------------------------------------------------------- journal

void FixedPacker::begin()
{
    ++txn_no_;
    txn_.header = h_;
    txn_.shelves = shelves_.size();
    txn_.charges = charges_.size();
    txn_.decisions = decisions_.size();
    txn_.events = end_events_.size();
    txn_.saved_shelves.clear();
    txn_.saved_classes.clear();
}

void FixedPacker::rollback()
{
    for (auto it = txn_.saved_shelves.rbegin(); it != txn_.saved_shelves.rend(); ++it) {
        shelves_[it->first] = it->second.first;
        meta_[it->first] = it->second.second;
    }
    shelves_.resize(txn_.shelves);
    meta_.resize(txn_.shelves);
    shelf_stamp_.resize(txn_.shelves);
    charges_.resize(txn_.charges);
    decisions_.resize(txn_.decisions);
    end_events_.resize(txn_.events);
    for (auto it = txn_.saved_classes.rbegin(); it != txn_.saved_classes.rend(); ++it) {
        if (it->second)
            classes_[it->first] = *it->second;
        else
            classes_.erase(it->first);
    }
    h_ = txn_.header;
}

Shelf& FixedPacker::sh(std::size_t id)
{
    if (id < txn_.shelves && shelf_stamp_[id] != txn_no_) {
        txn_.saved_shelves.push_back({id, {shelves_[id], meta_[id]}});
        shelf_stamp_[id] = txn_no_;
    }
    return shelves_[id];
}

ShelfMeta& FixedPacker::mt(std::size_t id)
{
    sh(id);
    return meta_[id];
}

ClassState& FixedPacker::cls(int k)
{
    auto st = class_stamp_.find(k);
    if (st == class_stamp_.end() || st->second != txn_no_) {
        auto it = classes_.find(k);
        txn_.saved_classes.push_back({k, it == classes_.end() ? std::nullopt : std::optional(it->second)});
        class_stamp_[k] = txn_no_;
    }
    return classes_[k];
}

std::size_t FixedPacker::add_shelf(Shelf s, ShelfMeta m)
{
    s.id = shelves_.size();
    m.opened_step = step_;
    shelves_.push_back(std::move(s));
    meta_.push_back(std::move(m));
    shelf_stamp_.push_back(txn_no_);
    return shelves_.size() - 1;
}

void FixedPacker::close_shelf(std::size_t id)
{
    if (shelves_[id].is_open()) {
        sh(id).state = ShelfState::Closed;
        mt(id).closed_step = step_;
    }
}

void FixedPacker::charge(ChargeKind kind, std::optional<std::size_t> from_shelf, std::optional<std::size_t> to_shelf,
                         const Scalar& amount, bool from_current_square)
{
    ChargeEntry c;
    c.kind = kind;
    c.from_shelf = from_shelf;
    c.to_shelf = to_shelf;
    c.amount = amount;
    c.step = step_;
    if (from_current_square)
        c.from_square = step_;
    if (to_shelf)
        sh(*to_shelf).assigned_extra += amount;
    charges_.push_back(std::move(c));
}

void FixedPacker::decide(int k, const Scalar& x, DecisionKind kind, std::size_t vertical)
{
    BufferDecision d;
    d.step = step_;
    d.k = k;
    d.x = x;
    d.kind = kind;
    d.beta = h_.ledger.beta();
    d.alpha = h_.ledger.alpha();
    d.vertical = vertical;
    decisions_.push_back(std::move(d));
}

std::optional<Point> FixedPacker::fail(std::string reason)
{
    fail_reason_ = std::move(reason);
    return std::nullopt;
}

// ---------------------------------------------------------------- grid

namespace {

constexpr double kSlack = 1e-12;

int grid_cell(double v, int n)
{
    return std::clamp(static_cast<int>(std::floor(v * n)), 0, n - 1);
}

} // namespace

void FixedPacker::grid_insert(const PlacedSquare& s)
{
    double x0 = s.x.to_double(), y0 = s.y.to_double(), d = s.side.to_double();
    boxes_.push_back({x0, y0, x0 + d, y0 + d});
    const Box& b = boxes_.back();
    for (int cx = grid_cell(b.x0 - kSlack, kGrid); cx <= grid_cell(b.x1 + kSlack, kGrid); ++cx)
        for (int cy = grid_cell(b.y0 - kSlack, kGrid); cy <= grid_cell(b.y1 + kSlack, kGrid); ++cy)
            cells_[cx * kGrid + cy].push_back(s.id);
}

std::optional<std::size_t> FixedPacker::first_conflict(const PlacedSquare& s) const
{
    double x0 = s.x.to_double(), y0 = s.y.to_double(), d = s.side.to_double();
    Box b{x0, y0, x0 + d, y0 + d};
    std::optional<std::size_t> best;
    for (int cx = grid_cell(b.x0 - kSlack, kGrid); cx <= grid_cell(b.x1 + kSlack, kGrid); ++cx)
        for (int cy = grid_cell(b.y0 - kSlack, kGrid); cy <= grid_cell(b.y1 + kSlack, kGrid); ++cy)
            for (std::size_t id : cells_[cx * kGrid + cy]) {
                if (best && id >= *best)
                    continue;
                const Box& o = boxes_[id];
                // Clearly separated boxes need no exact test.
                if (o.x1 < b.x0 - kSlack || b.x1 < o.x0 - kSlack || o.y1 < b.y0 - kSlack || b.y1 < o.y0 - kSlack)
                    continue;
                if (interiors_overlap(s, placed_[id]))
                    best = id;
            }
    return best;
}

// ---------------------------------------------------------------- dispatch

PackOutcome FixedPacker::pack_next(const Scalar& x)
{
    if (x.sign() <= 0 || x > Scalar(1))
        throw std::invalid_argument("side must lie in (0, 1]: " + x.to_string());
    if (!x.is_rational())
        throw std::invalid_argument("fixed mode expects rational sides: " + x.to_string());
    int k = classify(x);
    step_ = placed_.size();
    begin();
    cur_owner_.reset();
    fail_reason_.clear();

    std::optional<Point> pos;
    if (k == 0)
        pos = place_large(x);
    else if (k == 1)
        pos = ceiling_pack(x);
    else
        pos = pack_small(x, k);

    if (!pos) {
        rollback();
        Witness w;
        w.reason = fail_reason_.empty() ? "no position available" : fail_reason_;
        return Rejected{w};
    }

    PlacedSquare sq;
    sq.x = pos->x;
    sq.y = pos->y;
    sq.side = x;
    sq.id = step_;
    sq.cls = k;

    Witness w;
    w.candidate = sq;
    if (!contains(unit_square(), sq)) {
        rollback();
        w.reason = "leaves the unit square";
        return Rejected{w};
    }
    if (auto c = first_conflict(sq)) {
        rollback();
        w.conflict = c;
        const PlacedSquare& other = placed_[*c];
        std::string who = other.cls == 0 ? "large square" : other.cls == 1 ? "medium square" : "small square";
        w.reason = "overlaps " + who + " " + std::to_string(*c);
        return Rejected{w};
    }

    Scalar a = x * x;
    h_.input_area += a;
    if (k == 0) {
        h_.large = step_;
    } else if (k == 1) {
        medium_.push_back(step_);
        if (!h_.ceil_second)
            h_.ceil_cursor += x;
    } else {
        h_.small_area += a;
    }
    placed_.push_back(sq);
    owner_.push_back(cur_owner_);
    grid_insert(sq);
    return Placed{sq};
}

std::optional<Point> FixedPacker::place_large(const Scalar& x)
{
    return Point{Scalar(1) - x, Scalar(1) - x};
}

std::optional<Point> FixedPacker::ceiling_pack(const Scalar& x)
{
    if (!h_.ceil_second && h_.ceil_cursor + x <= Scalar(1))
        return Point{h_.ceil_cursor, Scalar(1) - x};
    h_.ceil_second = true;
    Scalar left = Scalar(1) - x;
    Scalar top = 1;
    for (std::size_t id : medium_) {
        const PlacedSquare& m = placed_[id];
        if (m.x + m.side > left && m.y < top)
            top = m.y;
    }
    if (top - x < Scalar(0))
        return fail("medium stack reaches the bottom edge");
    return Point{left, top - x};
}

// ---------------------------------------------------------------- small squares

std::optional<Point> FixedPacker::pack_small(const Scalar& x, int k)
{
    if (k == 2)
        return fill_main_h2(x);
    bool fresh = classes_.find(k) == classes_.end();
    cls(k);
    if (fresh)
        initialize_buffer(k);
    const ClassState& cs = classes_.at(k);
    if (!cs.vertical)
        return fill_initial(x, k);
    if (k >= 4 && cs.subshelf)
        return fill_buffer(x, k);
    return vertical_step(x, k);
}

std::optional<Point> FixedPacker::vertical_step(const Scalar& x, int k)
{
    std::size_t v = *classes_.at(k).vertical;
    if (crowded(v, x) && !meta_[v].buffer_assigned) {
        if (h_.active_end)
            return assign_end_buffer(x, k);
        return assign_buffer(x, k);
    }
    return fill_main_shelf(x, k);
}

std::optional<Point> FixedPacker::pack_into(std::size_t shelf, const Scalar& x)
{
    PackResult r = shelf_try_pack(sh(shelf), x, step_);
    if (auto* p = std::get_if<Point>(&r)) {
        cur_owner_ = shelf;
        return *p;
    }
    return fail("shelf " + std::to_string(shelf) + " overflowed unexpectedly");
}

std::optional<Point> FixedPacker::force_pack(std::size_t shelf, const Scalar& x)
{
    Shelf& s = sh(shelf);
    Point p = shelf_next_position(s, x);
    s.cursor += x;
    s.packed.push_back(step_);
    cur_owner_ = shelf;
    return p;
}

Region FixedPacker::force_carve(std::size_t shelf, const Scalar& w)
{
    Shelf& s = sh(shelf);
    Region r = shelf_section(s, s.cursor, s.cursor + w);
    s.cursor += w;
    return r;
}

int FixedPacker::select_main_region() const
{
    auto closed = [&](int i) { return !shelves_[main_id_[i]].is_open(); };
    if (!closed(0))
        return 0;
    if (!closed(1))
        return 1;
    if (closed(2) && closed(3))
        return -1;
    if (closed(2))
        return 3;
    if (closed(3))
        return 2;
    const Scalar& u3 = shelves_[main_id_[2]].cursor;
    const Scalar& u4 = shelves_[main_id_[3]].cursor;
    if (u3 <= u4 || u4 >= q(3, 8))
        return 2;
    return 3;
}

std::optional<Point> FixedPacker::fill_main_h2(const Scalar& x)
{
    int i = select_main_region();
    if (i < 0)
        return fail("all main packing regions are closed");
    std::size_t m = main_id_[i];
    if (shelves_[m].cursor + x <= shelves_[m].length()) {
        h_.last_main = i;
        return pack_into(m, x);
    }
    charge(ChargeKind::Extra, std::nullopt, m, extra_area(x, shelves_[m].height()), true);
    close_main(i);
    int j = select_main_region();
    if (j < 0)
        return fail("main packing crossed the top-left corner in M4");
    std::size_t n = main_id_[j];
    if (shelves_[n].cursor + x > shelves_[n].length())
        return fail("main packing crossed the top-left corner in M4");
    h_.last_main = j;
    return pack_into(n, x);
}

void FixedPacker::close_main(int i)
{
    close_shelf(main_id_[i]);
    if (i <= 2)
        handle_main_region_close(i);
}

void FixedPacker::handle_main_region_close(int i)
{
    const Shelf& m = shelves_[main_id_[i]];
    Scalar len = m.length();
    Scalar e_start = len - q(1, 8);
    Scalar ell = max(Scalar(0), m.cursor - e_start);
    if (ell >= q(1, 16)) {
        h_.ledger.e += 1;
        end_events_.push_back({i, step_, true, ell, Scalar(0)});
        return;
    }
    Shelf e;
    e.bounds = shelf_section(m, e_start + ell, len);
    e.dir = Direction::PosY;
    e.class_k = 3;
    // Squares start at the lower corner next to the used section.
    e.base_at_max = m.dir == Direction::NegX;
    ShelfMeta em;
    em.kind = ShelfKind::EndBuffer;
    em.region = i;
    em.host = main_id_[i];
    em.ell = ell;
    std::size_t id = add_shelf(std::move(e), std::move(em));
    if (h_.active_end)
        h_.pending_end.push_back(id);
    else
        activate_end(id);
}

void FixedPacker::activate_end(std::size_t e)
{
    h_.active_end = e;
    h_.ledger.endbufferlength = 0;
    h_.ledger.potential_extra = 0;
    h_.ledger.oversize_events = 0;
}

void FixedPacker::close_end()
{
    std::size_t e = *h_.active_end;
    close_shelf(e);
    h_.ledger.e += 1;
    end_events_.push_back(
        {meta_[e].region, step_, false, meta_[e].ell, h_.ledger.endbufferlength + h_.ledger.potential_extra});
    h_.active_end.reset();
    if (!h_.pending_end.empty()) {
        std::size_t next = h_.pending_end.front();
        h_.pending_end.pop_front();
        activate_end(next);
    }
}

void FixedPacker::initialize_buffer(int k)
{
    const RegionLayout& l = layout();
    Shelf s;
    s.class_k = k;
    s.dir = Direction::PosX;
    ShelfMeta m;
    if (k == 3) {
        s.bounds = Region(l.B[0].x0, l.B[0].y0, l.B[0].x0 + q(1, 4), l.B[0].y1);
        m.kind = ShelfKind::InitialH3;
    } else {
        Scalar w = class_width(k);
        Scalar y = l.A.y0 + h_.a_height;
        s.bounds = Region(l.A.x0, y, l.A.x1, y + w);
        h_.a_height += w;
        m.kind = ShelfKind::Initial;
    }
    std::size_t id = add_shelf(std::move(s), std::move(m));
    cls(k).initial = id;
}

std::optional<Point> FixedPacker::fill_initial(const Scalar& x, int k)
{
    std::size_t init = *classes_.at(k).initial;
    Scalar w = class_width(k);
    if (k == 3) {
        if (classes_.at(k).initial_length + x <= q(1, 4)) {
            auto p = pack_h3_into_b(x);
            if (!p)
                return p;
            Shelf& i3 = sh(init);
            i3.packed.push_back(step_);
            i3.cursor += x;
            cls(k).initial_length += x;
            cur_owner_ = init;
            return p;
        }
    } else if (shelves_[init].cursor + x <= shelves_[init].length()) {
        cls(k).initial_length += x;
        return pack_into(init, x);
    }
    close_shelf(init);
    charge(ChargeKind::Extra, std::nullopt, init, extra_area(x, w), true);
    cls(k).initial_closed = true;
    if (!open_vertical_shelf(k))
        return std::nullopt;
    return pack_into(*classes_.at(k).vertical, x);
}

std::optional<Point> FixedPacker::fill_buffer(const Scalar& x, int k)
{
    std::size_t b = *classes_.at(k).subshelf;
    if (shelves_[b].cursor + x <= shelves_[b].length())
        return pack_into(b, x);
    close_shelf(b);
    charge(ChargeKind::Extra, std::nullopt, b, extra_area(x, shelves_[b].height()), true);
    cls(k).subshelf.reset();
    return vertical_step(x, k);
}

std::optional<Point> FixedPacker::fill_main_shelf(const Scalar& x, int k)
{
    std::size_t v = *classes_.at(k).vertical;
    if (shelves_[v].cursor + x <= shelves_[v].length())
        return pack_into(v, x);
    close_shelf(v);
    charge(ChargeKind::Extra, std::nullopt, v, extra_area(x, shelves_[v].height()), true);
    if (!open_vertical_shelf(k))
        return std::nullopt;
    return pack_into(*classes_.at(k).vertical, x);
}

bool FixedPacker::open_vertical_shelf(int k)
{
    Scalar w = class_width(k);
    while (true) {
        int i = select_main_region();
        if (i < 0) {
            fail("no main packing region can host a vertical shelf");
            return false;
        }
        std::size_t m = main_id_[i];
        if (shelves_[m].cursor + w <= shelves_[m].length()) {
            Region slab = force_carve(m, w);
            Shelf v;
            v.bounds = slab;
            v.dir = Direction::PosY;
            v.class_k = k;
            ShelfMeta vm;
            vm.kind = ShelfKind::Vertical;
            vm.host = m;
            std::size_t id = add_shelf(std::move(v), std::move(vm));
            h_.last_main = i;
            h_.ledger.v += w;
            cls(k).vertical = id;
            return true;
        }
        if (i == 3) {
            fail("main packing crossed the top-left corner in M4");
            return false;
        }
        close_main(i);
    }
}

bool FixedPacker::crowded(std::size_t v, const Scalar& x) const
{
    const Shelf& s = shelves_[v];
    return s.cursor + x > s.length() - s.height();
}

std::optional<Point> FixedPacker::into_vertical_with_buffer(const Scalar& x, int k, std::optional<std::size_t> extra_to,
                                                            std::optional<std::size_t> slice_from)
{
    std::size_t v = *classes_.at(k).vertical;
    Scalar w = class_width(k);
    charge(ChargeKind::Buffer, slice_from, v, w * w * q(1, 4), false);
    if (shelves_[v].cursor + x <= shelves_[v].length()) {
        charge(ChargeKind::Extra, std::nullopt, extra_to, extra_area(x, w), true);
        return pack_into(v, x);
    }
    return fill_main_shelf(x, k);
}

std::optional<Point> FixedPacker::assign_buffer(const Scalar& x, int k)
{
    std::size_t v = *classes_.at(k).vertical;
    mt(v).buffer_assigned = true;
    Scalar w = class_width(k);
    BufferCase c = buffer_case(h_.ledger.beta(), h_.ledger.alpha(), x, k);
    if (c == BufferCase::IntoVertical) {
        decide(k, x, DecisionKind::PackIntoVertical, v);
        return into_vertical_with_buffer(x, k, std::nullopt, std::nullopt);
    }
    if (c == BufferCase::BufferSquare) {
        std::size_t mark = decisions_.size();
        decide(k, x, DecisionKind::BufferSquare, v);
        auto p = pack_h3_into_b(x);
        if (!p) {
            decisions_[mark].kind = DecisionKind::BufferExhausted;
            fail_reason_.clear();
            return into_vertical_with_buffer(x, k, std::nullopt, std::nullopt);
        }
        charge(ChargeKind::Buffer, cur_owner_, v, w * w * q(1, 4), false);
        return p;
    }
    decide(k, x, DecisionKind::BufferSubshelf, v);
    auto sub = open_buffer_subshelf(k);
    if (!sub)
        return fail("buffer regions exhausted for a class " + std::to_string(k) + " subshelf");
    cls(k).subshelf = *sub;
    charge(ChargeKind::Buffer, *sub, v, w * w * q(1, 4), false);
    return pack_into(*sub, x);
}

std::optional<Point> FixedPacker::assign_end_buffer(const Scalar& x, int k)
{
    std::size_t v = *classes_.at(k).vertical;
    mt(v).buffer_assigned = true;
    std::size_t e = *h_.active_end;
    Scalar w = class_width(k);
    std::optional<Point> p;
    if (k == 3) {
        if (x <= shelves_[e].height() && shelves_[e].cursor + x <= shelves_[e].length()) {
            decide(k, x, DecisionKind::EndSquare, v);
            p = pack_into(e, x);
            charge(ChargeKind::Buffer, e, v, w * w * q(1, 4), false);
            h_.ledger.endbufferlength += x;
        } else {
            decide(k, x, DecisionKind::EndOversize, v);
            charge(ChargeKind::Buffer, std::nullopt, e, meta_[e].ell * q(1, 16), false);
            p = into_vertical_with_buffer(x, k, e, e);
            h_.ledger.endbufferlength += q(1, 16);
            h_.ledger.oversize_events += 1;
        }
    } else {
        if (shelves_[e].cursor + w > shelves_[e].length()) {
            // No room left on top of the end buffer; fall back to B.
            close_end();
            return vertical_step(x, k);
        }
        decide(k, x, DecisionKind::EndSubshelf, v);
        Region slab = force_carve(e, w);
        std::size_t sub = make_subshelf(e, slab, k);
        cls(k).subshelf = sub;
        charge(ChargeKind::Buffer, sub, v, w * w * q(1, 4), false);
        h_.ledger.endbufferlength += w * q(1, 2);
        h_.ledger.potential_extra += w * q(1, 2);
        p = pack_into(sub, x);
    }
    if (h_.active_end && h_.ledger.endbufferlength + h_.ledger.potential_extra >= q(2, 16))
        close_end();
    return p;
}

std::optional<Point> FixedPacker::pack_h3_into_b(const Scalar& x)
{
    int j = h_.active_b;
    while (true) {
        std::size_t b = buffer_id_[j];
        if (shelves_[b].is_open() && shelves_[b].cursor + x <= shelves_[b].length()) {
            h_.ledger.b += x;
            return pack_into(b, x);
        }
        if (j == 3) {
            close_shelf(b);
            break;
        }
        if (shelves_[b].is_open())
            charge(ChargeKind::Extra, std::nullopt, b, extra_area(x, shelves_[b].height()), true);
        close_shelf(b);
        ++j;
        h_.active_b = j;
    }
    for (int i = 0; i < 4; ++i) {
        std::size_t b = buffer_id_[i];
        if (shelves_[b].cursor + x <= shelves_[b].length()) {
            h_.ledger.b += x;
            return force_pack(b, x);
        }
    }
    return fail("buffer regions exhausted for a class 3 square");
}

std::size_t FixedPacker::make_subshelf(std::size_t host, const Region& slab, int k)
{
    Shelf s;
    s.bounds = slab;
    s.class_k = k;
    ShelfMeta m;
    m.host = host;
    const Shelf& h = shelves_[host];
    if (meta_[host].kind == ShelfKind::EndBuffer) {
        s.dir = h.base_at_max ? Direction::NegX : Direction::PosX;
        m.kind = ShelfKind::EndSub;
    } else {
        s.dir = h.along_x() ? Direction::PosY : Direction::PosX;
        m.kind = ShelfKind::BufferSub;
    }
    return add_shelf(std::move(s), std::move(m));
}

std::optional<std::size_t> FixedPacker::open_buffer_subshelf(int k)
{
    Scalar w = class_width(k);
    int j = h_.active_b;
    while (true) {
        std::size_t b = buffer_id_[j];
        if (shelves_[b].is_open() && shelves_[b].cursor + w <= shelves_[b].length()) {
            Region slab = force_carve(b, w);
            h_.ledger.b += w;
            return make_subshelf(b, slab, k);
        }
        close_shelf(b);
        if (j == 3)
            break;
        ++j;
        h_.active_b = j;
    }
    for (int i = 0; i < 4; ++i) {
        std::size_t b = buffer_id_[i];
        if (shelves_[b].cursor + w <= shelves_[b].length()) {
            Region slab = force_carve(b, w);
            h_.ledger.b += w;
            return make_subshelf(b, slab, k);
        }
    }
    std::vector<std::size_t> ends;
    if (h_.active_end)
        ends.push_back(*h_.active_end);
    ends.insert(ends.end(), h_.pending_end.begin(), h_.pending_end.end());
    for (std::size_t e : ends) {
        if (shelves_[e].cursor + w <= shelves_[e].length()) {
            Region slab = force_carve(e, w);
            return make_subshelf(e, slab, k);
        }
    }
    return std::nullopt;
}

} // namespace squarepack
