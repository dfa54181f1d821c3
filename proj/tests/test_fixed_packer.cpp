#include <catch_amalgamated.hpp>

#include "squarepack/adversary.hpp"
#include "squarepack/fixed_packer.hpp"
#include "squarepack/verifier.hpp"

using namespace squarepack;

namespace {

Scalar q(long p, long d) { return Scalar::frac(p, d); }

PlacedSquare must_place(FixedPacker& p, const Scalar& x)
{
    PackOutcome o = p.pack_next(x);
    REQUIRE(std::holds_alternative<Placed>(o));
    return std::get<Placed>(o).square;
}

Point at(const PlacedSquare& s) { return Point{s.x, s.y}; }

} // namespace

TEST_CASE("fresh packer", "[fixed]")
{
    FixedPacker p;
    CHECK(p.placed().empty());
    CHECK(p.ledger().beta() == -q(3, 16));
    CHECK(p.ledger().alpha() == Scalar(0));
    CHECK(p.shelves()[p.main_shelf(0)].cursor == Scalar(0));
    CHECK(p.classes().empty());
    CHECK(p.select_main_region() == 0);
}

TEST_CASE("layout tiles the unit square", "[fixed]")
{
    const RegionLayout& l = RegionLayout::standard();
    std::vector<NamedRegion> t = l.tiles();
    Scalar sum;
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(contains(unit_square(), t[i].region));
        sum += area(t[i].region);
        for (std::size_t j = i + 1; j < t.size(); ++j)
            CHECK_FALSE(interiors_overlap(t[i].region, t[j].region));
    }
    CHECK(sum == Scalar(1));
    for (int i = 0; i < 3; ++i)
        CHECK(contains(l.M[i], l.E[i]));
}

TEST_CASE("large square placement", "[fixed]")
{
    FixedPacker p;
    CHECK(at(must_place(p, q(3, 5))) == Point{q(2, 5), q(2, 5)});

    FixedPacker eps;
    CHECK(at(must_place(eps, q(51, 100))) == Point{q(49, 100), q(49, 100)});
    std::size_t before = eps.shelves().size();
    PackOutcome o = eps.pack_next(q(51, 100));
    REQUIRE(std::holds_alternative<Rejected>(o));
    const Witness& w = std::get<Rejected>(o).witness;
    CHECK(w.conflict == std::optional<std::size_t>(0));
    CHECK(w.reason.find("large") != std::string::npos);
    CHECK(eps.placed().size() == 1);
    CHECK(eps.shelves().size() == before);
    CHECK(eps.total_input_area() == q(51, 100) * q(51, 100));

    FixedPacker after_medium;
    CHECK(at(must_place(after_medium, q(26, 100))) == Point{0, q(74, 100)});
    CHECK(at(must_place(after_medium, q(3, 5))) == Point{q(2, 5), q(2, 5)});
    CHECK(validate(after_medium.placed(), unit_square()).valid());
}

TEST_CASE("ceiling packing of medium squares", "[fixed]")
{
    FixedPacker p;
    CHECK(at(must_place(p, q(3, 10))) == Point{0, q(7, 10)});
    CHECK(at(must_place(p, q(3, 10))) == Point{q(3, 10), q(7, 10)});
    CHECK(at(must_place(p, q(3, 10))) == Point{q(6, 10), q(7, 10)});
    CHECK(at(must_place(p, q(3, 10))) == Point{q(7, 10), q(2, 5)});
    CHECK(validate(p.placed(), unit_square()).valid());
}

TEST_CASE("medium-only streams up to 3/8 always fit", "[fixed][property]")
{
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        std::vector<Scalar> s = random_budgeted_stream(seed, q(3, 8), ClassMix::MediumOnly, {1, 50});
        FixedPacker p;
        for (const Scalar& x : s)
            REQUIRE(std::holds_alternative<Placed>(p.pack_next(x)));
        CHECK(validate(p.placed(), unit_square()).valid());
    }
}

TEST_CASE("small squares go to the main and initial shelves", "[fixed]")
{
    FixedPacker p;
    CHECK(at(must_place(p, q(1, 5))) == Point{0, 0});
    CHECK(at(must_place(p, q(1, 5))) == Point{q(1, 5), 0});

    FixedPacker h4;
    CHECK(at(must_place(h4, q(1, 16))) == Point{0, q(3, 8)});
    REQUIRE(h4.classes().count(4));
    CHECK(h4.classes().at(4).initial.has_value());
    CHECK(at(must_place(h4, q(1, 32))) == Point{0, q(3, 8) + q(1, 16)});
}

TEST_CASE("main region selection", "[fixed]")
{
    FixedPacker p;
    for (int i = 0; i < 4; ++i)
        must_place(p, q(1, 4));
    CHECK(p.select_main_region() == 0);
    must_place(p, q(1, 4));
    CHECK(p.select_main_region() == 1);
    must_place(p, q(1, 4));
    CHECK(p.select_main_region() == 1);
    // M2 overflows; M3 and M4 are tied at zero.
    PlacedSquare s = must_place(p, q(1, 4));
    CHECK(contains(p.layout().M[2], s));
    CHECK(p.select_main_region() == 3);
    s = must_place(p, q(1, 4));
    CHECK(contains(p.layout().M[3], s));
    CHECK(p.select_main_region() == 2);
    must_place(p, q(1, 4));
    CHECK(p.select_main_region() == 3);
    must_place(p, q(1, 4));
    // used(M4) = 1/2 >= 3/8 keeps M3 even once it is longer.
    CHECK(p.shelves()[p.main_shelf(3)].cursor == q(1, 2));
    CHECK(p.select_main_region() == 2);
    must_place(p, q(1, 4));
    CHECK(p.shelves()[p.main_shelf(2)].cursor == q(3, 4));
    CHECK(p.select_main_region() == 2);
}

TEST_CASE("buffer case selection", "[fixed]")
{
    CHECK(buffer_case(q(1, 16), q(1, 32), q(1, 40), 5) == BufferCase::IntoVertical);
    CHECK(buffer_case(Scalar(0), q(1, 16), q(1, 8), 3) == BufferCase::IntoVertical);
    CHECK(buffer_case(Scalar(0), q(1, 16), q(1, 10), 3) == BufferCase::BufferSquare);
    CHECK(buffer_case(Scalar(0), q(1, 16), q(1, 40), 5) == BufferCase::BufferSubshelf);
}

TEST_CASE("end buffer on main region close", "[fixed]")
{
    SECTION("long used part inside E closes it at once")
    {
        FixedPacker p;
        for (int i = 0; i < 3; ++i)
            must_place(p, q(1, 4));
        must_place(p, q(7, 32));
        must_place(p, q(1, 4));
        REQUIRE(p.end_events().size() == 1);
        CHECK(p.end_events()[0].immediate);
        CHECK(p.end_events()[0].ell == q(3, 32));
        CHECK(p.ledger().e == 1);
        CHECK(p.ledger().beta() == -q(3, 16) + q(3, 32));
        CHECK_FALSE(p.active_end_buffer());
    }
    SECTION("short used part opens the rest of E as a buffer")
    {
        FixedPacker p;
        for (int i = 0; i < 3; ++i)
            must_place(p, q(1, 4));
        must_place(p, q(5, 32));
        must_place(p, q(1, 4));
        CHECK(p.end_events().empty());
        REQUIRE(p.active_end_buffer());
        const Shelf& e = p.shelves()[*p.active_end_buffer()];
        CHECK(e.bounds == Region(q(29, 32), 0, 1, q(1, 4)));
        CHECK(p.ledger().e == 0);
    }
}

TEST_CASE("invalid sides", "[fixed]")
{
    FixedPacker p;
    CHECK_THROWS_AS(p.pack_next(Scalar(0)), std::invalid_argument);
    CHECK_THROWS_AS(p.pack_next(q(11, 10)), std::invalid_argument);
    CHECK_THROWS_AS(p.pack_next(Scalar::sqrt2() / Scalar(2)), std::invalid_argument);
    CHECK(p.placed().empty());
}

TEST_CASE("budgeted streams pack validly and pass the audit", "[fixed][property]")
{
    for (ClassMix mix : all_class_mixes()) {
        Scalar budget = mix == ClassMix::MediumOnly ? q(3, 8) : q(11, 32);
        for (std::uint64_t seed = 1; seed <= 12; ++seed) {
            std::vector<Scalar> s = random_budgeted_stream(seed, budget, mix, {10, 500});
            FixedPacker p;
            for (std::size_t i = 0; i < s.size(); ++i) {
                PackOutcome o = p.pack_next(s[i]);
                INFO(to_string(mix) << " seed " << seed << " square " << i);
                REQUIRE(std::holds_alternative<Placed>(o));
            }
            CHECK(validate(p.placed(), unit_square()).valid());
            AuditReport r = audit_fixed(p);
            for (const AuditCheck& c : r.failing())
                UNSCOPED_INFO(c.name << ": " << c.detail);
            CHECK(r.passed());
        }
    }
}

TEST_CASE("per-step main density on small-only streams", "[fixed][property]")
{
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        std::vector<Scalar> s = random_budgeted_stream(seed, q(11, 32), ClassMix::SmallOnly, {10, 300});
        FixedPacker p;
        for (const Scalar& x : s) {
            REQUIRE(std::holds_alternative<Placed>(p.pack_next(x)));
            CHECK(check_main_density(p).pass);
        }
    }
}
