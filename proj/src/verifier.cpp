#include "squarepack/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace squarepack {

namespace {

Scalar q(long p, long d)
{
    return Scalar::frac(p, d);
}

struct Approx {
    double x0, y0, x1, y1;
};

double slack(double v)
{
    return 1e-9 * (1.0 + std::abs(v));
}

Region intersection(const Region& a, const Region& b)
{
    return Region(max(a.x0, b.x0), max(a.y0, b.y0), min(a.x1, b.x1), min(a.y1, b.y1));
}

bool holds(Relation rel, const Scalar& measured, const Scalar& bound)
{
    switch (rel) {
    case Relation::AtLeast: return measured >= bound;
    case Relation::Greater: return measured > bound;
    case Relation::AtMost: return measured <= bound;
    case Relation::Equal: return measured == bound;
    }
    return false;
}

// Margin by which a comparison holds; larger is safer.
Scalar margin(Relation rel, const Scalar& measured, const Scalar& bound)
{
    switch (rel) {
    case Relation::AtLeast:
    case Relation::Greater: return measured - bound;
    case Relation::AtMost: return bound - measured;
    case Relation::Equal: return -(measured - bound).abs();
    }
    return Scalar(0);
}

// Aggregates many instances of one check into a single entry holding the
// tightest (or first failing) instance.
class Family {
public:
    Family(std::string name, Relation rel) : name_(std::move(name)), rel_(rel) {}

    void test(const Scalar& measured, const Scalar& bound, std::string detail = {})
    {
        ++count_;
        bool ok = holds(rel_, measured, bound);
        if (!ok)
            ++failures_;
        if (!worst_ || (!ok && worst_->pass)
            || (ok == worst_->pass && margin(rel_, measured, bound) < margin(rel_, worst_->measured, worst_->bound))) {
            AuditCheck c;
            c.name = name_;
            c.relation = rel_;
            c.measured = measured;
            c.bound = bound;
            c.pass = ok;
            c.detail = std::move(detail);
            worst_ = std::move(c);
        }
    }

    void flush(AuditReport& r)
    {
        if (!worst_) {
            r.add(name_, Relation::Equal, Scalar(0), Scalar(0), "no instances");
            return;
        }
        AuditCheck c = *worst_;
        c.detail = std::to_string(count_) + " instances, " + std::to_string(failures_) + " failing; tightest: "
                   + c.detail;
        r.checks.push_back(std::move(c));
    }

private:
    std::string name_;
    Relation rel_;
    std::optional<AuditCheck> worst_;
    std::size_t count_ = 0;
    std::size_t failures_ = 0;
};

Scalar extent_along(const Shelf& host, const Region& r)
{
    return host.along_x() ? r.width() : r.height();
}

} // namespace

const char* to_string(Relation r)
{
    switch (r) {
    case Relation::AtLeast: return ">=";
    case Relation::Greater: return ">";
    case Relation::AtMost: return "<=";
    case Relation::Equal: return "==";
    }
    return "?";
}

bool AuditReport::add(std::string name, Relation rel, const Scalar& measured, const Scalar& bound, std::string detail)
{
    AuditCheck c;
    c.name = std::move(name);
    c.relation = rel;
    c.measured = measured;
    c.bound = bound;
    c.pass = holds(rel, measured, bound);
    c.detail = std::move(detail);
    checks.push_back(std::move(c));
    return checks.back().pass;
}

bool AuditReport::passed() const
{
    return failures() == 0;
}

std::size_t AuditReport::failures() const
{
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const AuditCheck& c) { return !c.pass; }));
}

std::vector<AuditCheck> AuditReport::failing() const
{
    std::vector<AuditCheck> out;
    for (const AuditCheck& c : checks)
        if (!c.pass)
            out.push_back(c);
    return out;
}

// ------------------------------------------------------------------ validity

ValidityReport validate(const std::vector<PlacedSquare>& placed, const std::optional<Region>& container)
{
    ValidityReport rep;
    std::size_t n = placed.size();
    std::vector<Approx> box(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = placed[i].x.to_double(), y = placed[i].y.to_double(), d = placed[i].side.to_double();
        box[i] = {x, y, x + d, y + d};
        if (placed[i].side.sign() <= 0) {
            rep.contained = false;
            rep.violations.push_back({i, std::nullopt, std::nullopt});
            continue;
        }
        if (container && !contains(*container, placed[i])) {
            rep.contained = false;
            Region b = placed[i].bounds();
            std::optional<Region> outside;
            if (!interiors_overlap(b, *container))
                outside = b;
            rep.violations.push_back({i, std::nullopt, outside});
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return box[a].x0 < box[b].x0; });
    std::vector<std::size_t> active;
    for (std::size_t i : order) {
        const Approx& bi = box[i];
        // Squares ending clearly left of this one can never meet later ones.
        std::erase_if(active, [&](std::size_t j) { return box[j].x1 < bi.x0 - slack(bi.x0); });
        for (std::size_t j : active) {
            const Approx& bj = box[j];
            if (bj.y1 < bi.y0 - slack(bi.y0) || bi.y1 < bj.y0 - slack(bj.y0) || bi.x1 < bj.x0 - slack(bj.x0))
                continue;
            if (placed[i].side.sign() <= 0 || placed[j].side.sign() <= 0)
                continue;
            if (interiors_overlap(placed[i], placed[j])) {
                rep.disjoint = false;
                std::size_t a = std::min(i, j), b = std::max(i, j);
                rep.violations.push_back({a, b, intersection(placed[a].bounds(), placed[b].bounds())});
            }
        }
        active.push_back(i);
    }
    return rep;
}

// ------------------------------------------------------------------ fixed audit

AuditCheck check_main_density(const FixedPacker& p)
{
    const RegionLayout& l = p.layout();
    Scalar small;
    for (const PlacedSquare& s : p.placed())
        if (s.cls >= 2)
            small += s.side * s.side;
    Scalar used;
    for (int i = 0; i < 4; ++i) {
        const Shelf& m = p.shelves()[p.main_shelf(i)];
        Scalar len = m.length();
        Scalar limit = i < 3 ? len - l.E[i].width() : len;
        used += min(m.cursor, limit);
    }
    Scalar bound = used * q(1, 4) * q(1, 2);
    AuditCheck c;
    c.name = "main-density";
    c.relation = Relation::AtLeast;
    c.measured = small;
    c.bound = bound;
    c.pass = small >= bound;
    c.detail = "small-square area vs half of used M minus E";
    return c;
}

AuditReport audit_fixed(const FixedPacker& p)
{
    AuditReport rep;
    const RegionLayout& l = p.layout();
    const auto& placed = p.placed();
    const auto& shelves = p.shelves();
    const auto& meta = p.meta();
    const auto& charges = p.charges();
    const std::size_t n = placed.size();
    const std::size_t ns = shelves.size();

    // Geometry.
    ValidityReport v = validate(placed, unit_square());
    rep.add("geometry", Relation::Equal, Scalar(static_cast<long>(v.violations.size())), Scalar(0),
            "overlap and containment violations");
    {
        auto tiles = l.tiles();
        Scalar total;
        long overlaps = 0;
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            total += area(tiles[i].region);
            for (std::size_t j = i + 1; j < tiles.size(); ++j)
                if (interiors_overlap(tiles[i].region, tiles[j].region))
                    ++overlaps;
        }
        rep.add("layout-area", Relation::Equal, total, Scalar(1), "tiles cover the unit square");
        rep.add("layout-overlap", Relation::Equal, Scalar(overlaps), Scalar(0), "tiles are interior-disjoint");
    }

    // Per-shelf accounting recomputed from the packed lists and the charges.
    std::vector<std::vector<std::size_t>> holders(n);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t id : shelves[s].packed)
            holders.at(id).push_back(s);
    std::vector<Scalar> total(ns);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t id : shelves[s].packed)
            total[s] += placed[id].side * placed[id].side;
    for (const ChargeEntry& c : charges) {
        if (c.to_shelf)
            total.at(*c.to_shelf) += c.amount;
        if (c.kind == ChargeKind::Extra && c.from_square && *c.from_square < n)
            for (std::size_t s : holders[*c.from_square])
                if (!(c.to_shelf && *c.to_shelf == s))
                    total[s] -= c.amount;
    }
    std::vector<std::vector<std::size_t>> children(ns);
    for (std::size_t s = 0; s < ns; ++s)
        if (meta[s].host)
            children.at(*meta[s].host).push_back(s);

    Family membership("shelf-membership", Relation::Equal);
    Family cursor("shelf-cursor", Relation::Equal);
    Family within("shelf-within-host", Relation::Equal);
    for (std::size_t s = 0; s < ns; ++s) {
        const Shelf& sh = shelves[s];
        Scalar h = sh.height();
        Scalar sum;
        for (std::size_t id : sh.packed)
            sum += placed[id].side;
        if (meta[s].kind == ShelfKind::InitialH3) {
            long bad = 0;
            for (std::size_t id : sh.packed)
                if (!contains(l.B[0], placed[id]) || classify(placed[id].side) != 3)
                    ++bad;
            membership.test(Scalar(bad), Scalar(0), "initial H3 buffer " + std::to_string(s));
            cursor.test(sh.cursor, sum, "initial H3 buffer " + std::to_string(s));
            continue;
        }
        long bad = 0;
        for (std::size_t id : sh.packed) {
            const PlacedSquare& sq = placed[id];
            bool ok = sq.cls == sh.class_k && sq.side * Scalar(2) > h && sq.side <= h && contains(sh.bounds, sq);
            if (sh.along_x())
                ok = ok && (sh.base_at_max ? sq.y + sq.side == sh.bounds.y1 : sq.y == sh.bounds.y0);
            else
                ok = ok && (sh.base_at_max ? sq.x + sq.side == sh.bounds.x1 : sq.x == sh.bounds.x0);
            if (!ok)
                ++bad;
        }
        membership.test(Scalar(bad), Scalar(0), std::string(to_string(meta[s].kind)) + " shelf " + std::to_string(s));
        for (std::size_t c : children[s])
            if (meta[c].kind != ShelfKind::EndBuffer)
                sum += extent_along(sh, shelves[c].bounds);
        cursor.test(sh.cursor, sum, std::string(to_string(meta[s].kind)) + " shelf " + std::to_string(s));
        if (meta[s].host) {
            bool inside = contains(shelves[*meta[s].host].bounds, sh.bounds);
            within.test(Scalar(inside ? 0 : 1), Scalar(0), "shelf " + std::to_string(s));
        }
    }
    membership.flush(rep);
    cursor.flush(rep);
    within.flush(rep);

    rep.checks.push_back(check_main_density(p));

    Family closed_v("closed-vertical", Relation::AtLeast);
    Family closed_sub("closed-buffer-subshelf", Relation::AtLeast);
    Family closed_init("closed-initial", Relation::AtLeast);
    for (std::size_t s = 0; s < ns; ++s) {
        const Shelf& sh = shelves[s];
        if (sh.is_open())
            continue;
        std::string tag = "shelf " + std::to_string(s);
        switch (meta[s].kind) {
        case ShelfKind::Vertical:
            closed_v.test(total[s], area(sh.bounds) * q(1, 2), tag);
            break;
        case ShelfKind::BufferSub:
        case ShelfKind::EndSub: {
            Scalar hw = sh.height() * q(1, 2);
            // The lemma needs length >= 2 * width; thinner end-buffer slabs only
            // get the closed-shelf bound.
            if (sh.length() >= sh.height() * Scalar(2))
                closed_sub.test(total[s], hw * hw + hw * sh.length() * q(1, 2), tag);
            else
                closed_sub.test(total[s], (sh.length() - hw) * hw, tag + " (thin)");
            break;
        }
        case ShelfKind::Initial: {
            Scalar len = sh.length() - sh.height() * q(1, 2);
            closed_init.test(total[s], len * sh.height() * q(1, 2), tag);
            break;
        }
        default: break;
        }
    }
    closed_v.flush(rep);
    closed_sub.flush(rep);
    closed_init.flush(rep);

    Family open_v("open-vertical", Relation::AtLeast);
    Family one_open("one-open-per-class", Relation::AtMost);
    for (const auto& [k, cs] : p.classes()) {
        long open_vert = 0, open_sub = 0;
        for (std::size_t s = 0; s < ns; ++s) {
            if (!shelves[s].is_open() || shelves[s].class_k != k)
                continue;
            if (meta[s].kind == ShelfKind::Vertical)
                ++open_vert;
            if (meta[s].kind == ShelfKind::BufferSub || meta[s].kind == ShelfKind::EndSub)
                ++open_sub;
        }
        one_open.test(Scalar(std::max(open_vert, open_sub)), Scalar(1), "class " + std::to_string(k));
        if (!cs.vertical || !shelves[*cs.vertical].is_open())
            continue;
        std::vector<std::size_t> group{*cs.vertical};
        if (cs.initial)
            group.push_back(*cs.initial);
        Scalar bound = area(shelves[*cs.vertical].bounds) * q(1, 2);
        if (cs.subshelf && shelves[*cs.subshelf].is_open()) {
            group.push_back(*cs.subshelf);
            bound += area(shelves[*cs.subshelf].bounds) * q(1, 2);
        }
        auto in_group = [&](std::optional<std::size_t> s) {
            return s && std::find(group.begin(), group.end(), *s) != group.end();
        };
        Scalar measured;
        for (std::size_t s : group)
            measured += total[s];
        for (const ChargeEntry& c : charges)
            if (c.kind == ChargeKind::Buffer && in_group(c.from_shelf) && in_group(c.to_shelf))
                measured -= c.amount;
        open_v.test(measured, bound, "class " + std::to_string(k));
    }
    open_v.flush(rep);
    one_open.flush(rep);

    // Buffer ledger recomputed from the transcript.
    auto is_b = [&](std::size_t s) { return meta[s].kind == ShelfKind::Buffer; };
    auto b_before = [&](std::size_t t) {
        Scalar b;
        for (int j = 0; j < 4; ++j)
            for (std::size_t id : shelves[p.buffer_shelf(j)].packed)
                if (id < t)
                    b += placed[id].side;
        for (std::size_t s = 0; s < ns; ++s)
            if (meta[s].kind == ShelfKind::BufferSub && meta[s].host && is_b(*meta[s].host) && meta[s].opened_step < t)
                b += shelves[s].height();
        return b;
    };
    auto e_before = [&](std::size_t t) {
        long e = 0;
        for (const EndBufferEvent& ev : p.end_events())
            if (ev.step < t)
                ++e;
        return e;
    };
    auto v_before = [&](std::size_t t) {
        Scalar v;
        for (std::size_t s = 0; s < ns; ++s)
            if (meta[s].kind == ShelfKind::Vertical && meta[s].opened_step < t)
                v += shelves[s].height();
        return v;
    };
    std::vector<Scalar> prefix(n + 1);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + (placed[i].cls >= 2 ? placed[i].side * placed[i].side : Scalar(0));

    Family dec_beta("decision-beta", Relation::Equal);
    Family dec_alpha("decision-alpha", Relation::Equal);
    Family dec_case("decision-case", Relation::Equal);
    Family growth("buffer-growth", Relation::Greater);
    for (const BufferDecision& d : p.decisions()) {
        std::string tag = "step " + std::to_string(d.step);
        Scalar beta = b_before(d.step) + q(3, 32) * Scalar(e_before(d.step)) - q(3, 16);
        Scalar alpha = v_before(d.step) * q(1, 2);
        dec_beta.test(d.beta, beta, tag);
        dec_alpha.test(d.alpha, alpha, tag);
        bool end = d.kind == DecisionKind::EndSquare || d.kind == DecisionKind::EndOversize
                   || d.kind == DecisionKind::EndSubshelf;
        if (!end) {
            BufferCase c = buffer_case(beta, alpha, d.x, d.k);
            bool ok = (c == BufferCase::IntoVertical && d.kind == DecisionKind::PackIntoVertical)
                      || (c == BufferCase::BufferSquare
                          && (d.kind == DecisionKind::BufferSquare || d.kind == DecisionKind::BufferExhausted))
                      || (c == BufferCase::BufferSubshelf && d.kind == DecisionKind::BufferSubshelf);
            dec_case.test(Scalar(ok ? 0 : 1), Scalar(0), tag + " " + to_string(d.kind));
        }
        if (d.kind == DecisionKind::BufferSquare || d.kind == DecisionKind::BufferSubshelf)
            growth.test(prefix.at(d.step + 1), (beta + d.x - q(1, 16)) * q(1, 4), tag);
    }
    dec_beta.flush(rep);
    dec_alpha.flush(rep);
    dec_case.flush(rep);
    growth.flush(rep);

    // Trajectory properties of the buffer and main packing.
    Family p_b2("prop-b2", Relation::Greater);
    Family p_b3_first("prop-b3-first", Relation::Greater);
    Family p_b3("prop-b3", Relation::Greater);
    Family p_b4_first("prop-b4-first", Relation::Greater);
    Family p_b4("prop-b4", Relation::Greater);
    Family p_m2_first("prop-m2-first", Relation::AtLeast);
    Family p_m3_first("prop-m3-first", Relation::AtLeast);
    bool seen_b3 = false, seen_b4 = false, seen_m2 = false, seen_m3 = false;
    for (std::size_t i = 0; i < n; ++i) {
        const PlacedSquare& sq = placed[i];
        if (sq.cls < 2)
            continue;
        const Scalar& sum = prefix[i + 1];
        std::string tag = "square " + std::to_string(i);
        if (contains(l.B[1], sq) && sq.x > q(1, 4))
            p_b2.test(sum, (sq.x + sq.side - q(1, 16)) * q(1, 4), tag);
        if (contains(l.B[2], sq)) {
            if (!seen_b3)
                p_b3_first.test(sum, q(7, 64), tag);
            seen_b3 = true;
            Scalar d = sq.y - l.B[2].y0;
            if (d.sign() > 0)
                p_b3.test(sum, (q(15, 32) + d + sq.side) * q(1, 4), tag);
        }
        if (contains(l.B[3], sq)) {
            if (!seen_b4)
                p_b4_first.test(sum, q(17, 64), tag);
            seen_b4 = true;
            Scalar d = sq.y - l.B[3].y0;
            if (d.sign() > 0)
                p_b4.test(sum, (Scalar(1) + d + sq.side) * q(1, 4), tag);
        }
        if (!seen_m2 && contains(l.M[1], sq)) {
            seen_m2 = true;
            p_m2_first.test(sum, q(7, 64), tag);
        }
        if (!seen_m3 && contains(l.M[2], sq)) {
            seen_m3 = true;
            // Small area in the lower half plus area charged into it from outside.
            Scalar lower;
            for (std::size_t j = 0; j <= i; ++j)
                if (placed[j].cls >= 2 && contains(l.lower, placed[j]))
                    lower += placed[j].side * placed[j].side;
            for (const ChargeEntry& c : charges) {
                if (c.step > i || !c.to_shelf || !contains(l.lower, shelves[*c.to_shelf].bounds))
                    continue;
                bool outside = c.from_square ? !contains(l.lower, placed.at(*c.from_square))
                                             : c.from_shelf && !contains(l.lower, shelves[*c.from_shelf].bounds);
                if (outside)
                    lower += c.amount;
            }
            p_m3_first.test(lower, q(10, 64), tag);
        }
    }
    p_b2.flush(rep);
    p_b3_first.flush(rep);
    p_b3.flush(rep);
    p_b4_first.flush(rep);
    p_b4.flush(rep);
    p_m2_first.flush(rep);
    p_m3_first.flush(rep);

    // Buffer length bookkeeping.
    const BufferLedger& led = p.ledger();
    Scalar used_main;
    for (int i = 0; i < 4; ++i) {
        const Shelf& m = shelves[p.main_shelf(i)];
        Scalar len = m.length();
        used_main += min(m.cursor, i < 3 ? len - l.E[i].width() : len);
    }
    rep.add("ledger-required", Relation::AtMost, used_main * q(1, 2), q(22, 16), "buffer length required for M minus E");
    Scalar b_now = b_before(n);
    rep.add("ledger-b", Relation::Equal, led.b, b_now, "b recomputed from the buffer shelves");
    rep.add("ledger-v", Relation::Equal, led.v, v_before(n), "v recomputed from the vertical shelves");
    rep.add("ledger-e", Relation::Equal, Scalar(led.e), Scalar(static_cast<long>(p.end_events().size())),
            "e recomputed from the end buffer events");
    rep.add("ledger-e-credit", Relation::Equal, led.beta() - led.b + q(3, 16),
            q(3, 32) * Scalar(static_cast<long>(p.end_events().size())), "each closed end buffer adds 1.5/16");

    Family closed_b("closed-buffer-region", Relation::AtLeast);
    Scalar provided = -q(3, 16);
    bool all_closed = true;
    long closed_count = 0;
    for (int j = 0; j < 4; ++j) {
        std::size_t s = p.buffer_shelf(j);
        const Shelf& b = shelves[s];
        if (b.is_open()) {
            all_closed = false;
            provided += b.cursor;
            continue;
        }
        ++closed_count;
        Scalar usable = b.length() - b.height() * q(1, 2);
        provided += usable;
        Scalar a = total[s];
        // Subshelves are audited on their own; here they count as half full.
        for (std::size_t c : children[s])
            a += area(shelves[c].bounds) * q(1, 2);
        closed_b.test(a, usable * b.height() * q(1, 2), "B" + std::to_string(j + 1));
    }
    closed_b.flush(rep);
    Scalar provided_bound = all_closed ? q(17, 16) : b_now - q(3, 16) - Scalar(closed_count) * q(1, 16);
    rep.add("ledger-b-provided", Relation::AtLeast, provided, provided_bound,
            all_closed ? "all buffer regions closed" : "bound derived from the used buffer length");

    Family e_gain("end-buffer-gain", Relation::AtLeast);
    for (const EndBufferEvent& ev : p.end_events()) {
        std::string tag = "E" + std::to_string(ev.index + 1);
        if (ev.immediate) {
            e_gain.test(ev.ell, q(1, 16), tag + " closed at once");
        } else {
            e_gain.test(ev.gained, q(2, 16), tag + " gained length");
            e_gain.test(q(2, 16) - ev.ell * q(1, 2), q(3, 32), tag + " net credit");
        }
    }
    e_gain.flush(rep);

    if (auto large = p.large_square()) {
        const PlacedSquare& sq = placed[*large];
        bool ok = sq.x + sq.side == Scalar(1) && sq.y + sq.side == Scalar(1);
        rep.add("large-corner", Relation::Equal, Scalar(ok ? 0 : 1), Scalar(0), "large square in the top right corner");
    }
    return rep;
}

// ------------------------------------------------------------------ dynamic audit

AuditReport audit_dynamic(const BrickTree& t)
{
    if (t.empty())
        throw std::logic_error("audit of an empty brick tree");
    AuditReport rep;
    const auto& nodes = t.nodes();
    const Brick& root = nodes[t.root()];

    ValidityReport v = validate(t.placed(), root.bounds());
    rep.add("geometry", Relation::Equal, Scalar(static_cast<long>(v.violations.size())), Scalar(0),
            "overlaps and squares outside the root brick");
    rep.add("root-origin", Relation::Equal, Scalar(root.x.sign() == 0 && root.y.sign() == 0 ? 0 : 1), Scalar(0),
            "root anchored at the origin");

    Family tiling("tiling", Relation::Equal);
    Family occupied("occupied-density", Relation::AtLeast);
    Family fits("occupied-fit", Relation::Equal);
    Scalar free_area;
    long reached = 0;
    std::vector<std::size_t> stack{t.root()};
    const Scalar two_sqrt2 = Scalar(0, 2);
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        ++reached;
        const Brick& b = nodes[i];
        Region r = b.bounds();
        switch (b.state) {
        case BrickState::Free:
            free_area += area(r);
            break;
        case BrickState::Occupied: {
            const PlacedSquare& sq = t.placed().at(*b.square);
            bool ok = sq.x == b.x && sq.y == b.y && sq.side <= b.short_side() && contains(r, sq);
            fits.test(Scalar(ok ? 0 : 1), Scalar(0), "brick " + std::to_string(i));
            occupied.test(sq.side * sq.side * two_sqrt2, area(r), "brick " + std::to_string(i));
            break;
        }
        case BrickState::Split: {
            const Brick& c0 = nodes[b.children[0]];
            const Brick& c1 = nodes[b.children[1]];
            Region r0 = c0.bounds(), r1 = c1.bounds();
            bool ok = contains(r, r0) && contains(r, r1) && !interiors_overlap(r0, r1)
                      && area(r0) + area(r1) == area(r) && c0.exponent == b.exponent - 1
                      && c1.exponent == b.exponent - 1;
            tiling.test(Scalar(ok ? 0 : 1), Scalar(0), "brick " + std::to_string(i));
            stack.push_back(b.children[0]);
            stack.push_back(b.children[1]);
            break;
        }
        }
    }
    tiling.flush(rep);
    fits.flush(rep);
    occupied.flush(rep);
    rep.add("tree-reachable", Relation::Equal, Scalar(reached), Scalar(static_cast<long>(nodes.size())),
            "every node hangs below the root");

    Scalar bmax = area(root.bounds());
    rep.add("free-fraction", Relation::AtMost, free_area, bmax * q(1, 2), "free bricks cover at most half of the root");
    rep.add("free-area-cache", Relation::Equal, t.free_area(), free_area, "cached free area");

    Scalar sum;
    for (const PlacedSquare& s : t.placed())
        sum += s.side * s.side;
    rep.add("total-area", Relation::Equal, t.total_area(), sum, "cached total area");
    Scalar l = root.long_side();
    rep.add("density", Relation::AtLeast, sum / (l * l), q(1, 8), "area over the enclosing square");
    rep.add("edge-length", Relation::AtMost, l * l, Scalar(8) * sum, "squared enclosing side vs (2 sqrt2)^2 area");
    return rep;
}

} // namespace squarepack
