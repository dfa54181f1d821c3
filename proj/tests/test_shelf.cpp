#include <catch_amalgamated.hpp>

#include <random>

#include "squarepack/shelf.hpp"
#include "support.hpp"

using namespace squarepack;

namespace {

Scalar q(long p, long d) { return Scalar::frac(p, d); }

Shelf make_shelf(Region r, Direction d, int k, Scalar cursor = 0)
{
    Shelf s;
    s.bounds = r;
    s.dir = d;
    s.class_k = k;
    s.cursor = cursor;
    return s;
}

} // namespace

TEST_CASE("height classes", "[shelf]")
{
    CHECK(classify(q(3, 5)) == 0);
    CHECK(classify(Scalar(1)) == 0);
    CHECK(classify(q(1, 2)) == 1);
    CHECK(classify(q(1, 4)) == 2);
    CHECK(classify(q(1, 32)) == 5);
    CHECK(classify(q(33, 1024)) == 4);
    CHECK(classify(Scalar::sqrt2() / Scalar(4)) == 1);
    CHECK_THROWS_AS(classify(Scalar(0)), std::invalid_argument);
    CHECK_THROWS_AS(classify(q(11, 10)), std::invalid_argument);
    CHECK_THROWS_AS(classify(q(-1, 2)), std::invalid_argument);
}

TEST_CASE("classify agrees with its defining inequality", "[shelf][property]")
{
    std::mt19937_64 g(17);
    for (int i = 0; i < 3000; ++i) {
        Scalar x = q(1 + static_cast<long>(g() % 1000000), 1000000) * Scalar::pow2(-static_cast<int>(g() % 30));
        int k = classify(x);
        CHECK(Scalar::pow2(-(k + 1)) < x);
        CHECK(x <= Scalar::pow2(-k));
    }
}

TEST_CASE("shelf packing examples", "[shelf]")
{
    Shelf s = make_shelf(Region(0, 0, 1, q(1, 4)), Direction::PosX, 2);
    PackResult r = shelf_try_pack(s, q(1, 5), 0);
    REQUIRE(std::holds_alternative<Point>(r));
    CHECK(std::get<Point>(r) == Point{0, 0});
    CHECK(s.cursor == q(1, 5));

    Shelf full = make_shelf(Region(0, 0, 1, q(1, 4)), Direction::PosX, 2, q(9, 10));
    CHECK(std::holds_alternative<Overflow>(shelf_try_pack(full, q(1, 5), 0)));
    CHECK(full.cursor == q(9, 10));
    CHECK(full.packed.empty());

    Shelf v = make_shelf(Region(0, q(1, 2), q(1, 8), 1), Direction::PosY, 3, q(1, 4));
    PackResult rv = shelf_try_pack(v, q(1, 10), 0);
    REQUIRE(std::holds_alternative<Point>(rv));
    CHECK(std::get<Point>(rv) == Point{0, q(3, 4)});

    CHECK_THROWS_AS(shelf_try_pack(s, q(1, 10), 1), std::logic_error);
}

TEST_CASE("reverse directions pack from the far end", "[shelf]")
{
    Shelf s = make_shelf(Region(q(1, 2), q(1, 4), 1, q(1, 2)), Direction::NegX, 2);
    CHECK(std::get<Point>(shelf_try_pack(s, q(1, 5), 0)) == Point{q(4, 5), q(1, 4)});
    CHECK(head(s) == Region(q(1, 2), q(1, 4), q(3, 4), q(1, 2)));
    CHECK(used_section(s) == Region(q(4, 5), q(1, 4), 1, q(1, 2)));
}

TEST_CASE("total area bookkeeping", "[shelf]")
{
    Shelf empty = make_shelf(Region(0, 0, 1, q(1, 4)), Direction::PosX, 2);
    CHECK(total_area_of(empty, {}, {}) == Scalar(0));

    Shelf one = make_shelf(Region(0, 0, 1, q(1, 4)), Direction::PosX, 2);
    std::vector<PlacedSquare> sq(4);
    sq[0].side = q(1, 4);
    shelf_try_pack(one, q(1, 4), 0);
    CHECK(total_area_of(one, sq, {}) == q(1, 16));

    Shelf s = make_shelf(Region(0, 0, 1, q(1, 4)), Direction::PosX, 2);
    for (std::size_t i = 0; i < 3; ++i) {
        sq[i].side = q(1, 4);
        shelf_try_pack(s, q(1, 4), i);
    }
    s.cursor = Scalar(1) - q(1, 8);
    sq[3].side = q(1, 4);
    CHECK(std::holds_alternative<Overflow>(shelf_try_pack(s, q(1, 4), 3)));
    s.state = ShelfState::Closed;
    CHECK(extra_area(q(1, 4), q(1, 4)) == q(1, 32));
    ChargeEntry c;
    c.from_square = 3;
    c.to_shelf = s.id;
    c.amount = extra_area(q(1, 4), q(1, 4));
    Scalar total = total_area_of(s, sq, {c});
    CHECK(total == q(7, 32));
    CHECK(total >= area(Region(0, 0, Scalar(1) - q(1, 8), q(1, 4))) * q(1, 2));
}

TEST_CASE("shelf sections", "[shelf]")
{
    Shelf s = make_shelf(Region(0, 0, 1, q(1, 4)), Direction::PosX, 2, q(2, 5));
    CHECK(head(s) == Region(q(3, 4), 0, 1, q(1, 4)));
    CHECK(shelf_end(s) == Region(q(7, 8), 0, 1, q(1, 4)));
    CHECK(used_section(s) == Region(0, 0, q(2, 5), q(1, 4)));

    Shelf v = make_shelf(Region(0, q(1, 2), q(1, 8), 1), Direction::NegY, 3);
    CHECK(head(v) == Region(0, q(1, 2), q(1, 8), q(5, 8)));
    CHECK(shelf_end(v) == Region(0, q(1, 2), q(1, 8), q(9, 16)));
}

TEST_CASE("carving reserves a slab at the cursor", "[shelf]")
{
    Shelf s = make_shelf(Region(0, 0, 1, q(1, 4)), Direction::PosX, 2, q(1, 2));
    auto slab = shelf_carve(s, q(1, 8));
    REQUIRE(slab);
    CHECK(*slab == Region(q(1, 2), 0, q(5, 8), q(1, 4)));
    CHECK(s.cursor == q(5, 8));
    CHECK_FALSE(shelf_carve(s, Scalar(1)));
}

TEST_CASE("overflow lemma and corollary on random fills", "[shelf][property]")
{
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        testing::ShelfTrial t = testing::shelf_fill_trial(seed);
        CHECK(t.lemma_lhs > t.lemma_rhs);
        CHECK(t.total >= t.corollary_bound);
        // Used section density before the overflow.
        CHECK(t.packed_area * Scalar(2) > t.cursor * t.height);
    }
}
