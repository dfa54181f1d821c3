#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "squarepack/geometry.hpp"
#include "squarepack/shelf.hpp"

namespace squarepack {

struct NamedRegion {
    std::string name;
    Region region;
};

// Fixed partition of the unit square used by the small-square packing.
struct RegionLayout {
    std::array<Region, 4> M;
    std::array<Direction, 4> m_dir;
    std::array<Region, 3> E;
    std::array<Region, 4> B;
    std::array<Direction, 4> b_dir;
    Region A;
    Region lower, upper;

    static const RegionLayout& standard();
    // M1..M4, B1..B4 and A; these tile the unit square.
    std::vector<NamedRegion> tiles() const;
};

enum class ShelfKind { Main, Vertical, Initial, InitialH3, Buffer, BufferSub, EndBuffer, EndSub };

const char* to_string(ShelfKind k);

struct ShelfMeta {
    ShelfKind kind = ShelfKind::Main;
    // Index of the named region (M_i, B_j or E_i) for region shelves.
    int region = -1;
    // Shelf the slab was carved from, if any.
    std::optional<std::size_t> host;
    bool buffer_assigned = false;
    std::size_t opened_step = 0;
    std::optional<std::size_t> closed_step;
    // End buffers: length of the used main section inside E_i.
    Scalar ell;
};

struct BufferLedger {
    Scalar b;
    int e = 0;
    Scalar v;
    Scalar endbufferlength;
    Scalar potential_extra;
    int oversize_events = 0;

    Scalar beta() const;
    Scalar alpha() const;
};

enum class DecisionKind {
    PackIntoVertical,
    BufferSquare,
    BufferSubshelf,
    BufferExhausted,
    EndSquare,
    EndOversize,
    EndSubshelf
};

const char* to_string(DecisionKind k);

struct BufferDecision {
    std::size_t step = 0;
    int k = 0;
    Scalar x;
    DecisionKind kind = DecisionKind::PackIntoVertical;
    Scalar beta, alpha;
    std::size_t vertical = 0;
};

enum class BufferCase { IntoVertical, BufferSquare, BufferSubshelf };

// Case selection of the buffer packing for a square of side x in class k.
BufferCase buffer_case(const Scalar& beta, const Scalar& alpha, const Scalar& x, int k);

struct EndBufferEvent {
    int index = 0;
    std::size_t step = 0;
    bool immediate = false;
    Scalar ell;
    // endbufferlength + potential extra length when the buffer closed.
    Scalar gained;
};

struct ClassState {
    std::optional<std::size_t> initial;
    Scalar initial_length;
    bool initial_closed = false;
    std::optional<std::size_t> vertical;
    std::optional<std::size_t> subshelf;
};

struct Witness {
    std::optional<PlacedSquare> candidate;
    std::optional<std::size_t> conflict;
    std::string reason;
};

struct Placed {
    PlacedSquare square;
};

struct Rejected {
    Witness witness;
};

using PackOutcome = std::variant<Placed, Rejected>;

class FixedPacker {
public:
    FixedPacker();

    // Throws std::invalid_argument unless 0 < x <= 1.
    PackOutcome pack_next(const Scalar& x);

    int select_main_region() const;

    const RegionLayout& layout() const { return RegionLayout::standard(); }
    const std::vector<PlacedSquare>& placed() const { return placed_; }
    // Logical shelf of every placed square; empty for large and medium squares.
    const std::vector<std::optional<std::size_t>>& owners() const { return owner_; }
    const std::vector<Shelf>& shelves() const { return shelves_; }
    const std::vector<ShelfMeta>& meta() const { return meta_; }
    const std::vector<ChargeEntry>& charges() const { return charges_; }
    const std::vector<BufferDecision>& decisions() const { return decisions_; }
    const std::vector<EndBufferEvent>& end_events() const { return end_events_; }
    const std::map<int, ClassState>& classes() const { return classes_; }
    const BufferLedger& ledger() const { return h_.ledger; }

    std::size_t main_shelf(int i) const { return main_id_[i]; }
    std::size_t buffer_shelf(int j) const { return buffer_id_[j]; }
    int active_buffer_region() const { return h_.active_b; }
    std::optional<std::size_t> active_end_buffer() const { return h_.active_end; }
    std::optional<std::size_t> large_square() const { return h_.large; }
    const Scalar& total_input_area() const { return h_.input_area; }
    const Scalar& small_area() const { return h_.small_area; }

private:
    struct Header {
        BufferLedger ledger;
        int last_main = 0;
        int active_b = 0;
        std::optional<std::size_t> active_end;
        std::deque<std::size_t> pending_end;
        Scalar a_height;
        Scalar ceil_cursor;
        bool ceil_second = false;
        std::optional<std::size_t> large;
        Scalar small_area;
        Scalar input_area;
    };

    struct Txn {
        Header header;
        std::size_t shelves = 0;
        std::size_t charges = 0;
        std::size_t decisions = 0;
        std::size_t events = 0;
        std::vector<std::pair<std::size_t, std::pair<Shelf, ShelfMeta>>> saved_shelves;
        std::vector<std::pair<int, std::optional<ClassState>>> saved_classes;
    };

    void begin();
    void rollback();
    Shelf& sh(std::size_t id);
    ShelfMeta& mt(std::size_t id);
    ClassState& cls(int k);

    std::size_t add_shelf(Shelf s, ShelfMeta m);
    void close_shelf(std::size_t id);
    void charge(ChargeKind kind, std::optional<std::size_t> from_shelf, std::optional<std::size_t> to_shelf,
                const Scalar& amount, bool from_current_square);
    void decide(int k, const Scalar& x, DecisionKind kind, std::size_t vertical);
    std::optional<Point> fail(std::string reason);

    std::optional<Point> place_large(const Scalar& x);
    std::optional<Point> ceiling_pack(const Scalar& x);
    std::optional<Point> pack_small(const Scalar& x, int k);

    std::optional<Point> pack_into(std::size_t shelf, const Scalar& x);
    std::optional<Point> force_pack(std::size_t shelf, const Scalar& x);
    Region force_carve(std::size_t shelf, const Scalar& w);
    std::optional<Point> fill_main_h2(const Scalar& x);
    void close_main(int i);
    void handle_main_region_close(int i);
    void activate_end(std::size_t e);
    void close_end();
    void initialize_buffer(int k);
    std::optional<Point> fill_initial(const Scalar& x, int k);
    std::optional<Point> fill_buffer(const Scalar& x, int k);
    std::optional<Point> vertical_step(const Scalar& x, int k);
    std::optional<Point> fill_main_shelf(const Scalar& x, int k);
    bool open_vertical_shelf(int k);
    bool crowded(std::size_t v, const Scalar& x) const;
    std::optional<Point> assign_buffer(const Scalar& x, int k);
    std::optional<Point> assign_end_buffer(const Scalar& x, int k);
    std::optional<Point> into_vertical_with_buffer(const Scalar& x, int k, std::optional<std::size_t> extra_to,
                                                   std::optional<std::size_t> slice_from);
    std::optional<Point> pack_h3_into_b(const Scalar& x);
    std::optional<std::size_t> open_buffer_subshelf(int k);
    std::size_t make_subshelf(std::size_t host, const Region& slab, int k);

    std::vector<PlacedSquare> placed_;
    std::vector<std::optional<std::size_t>> owner_;
    std::vector<std::size_t> medium_;
    std::vector<Shelf> shelves_;
    std::vector<ShelfMeta> meta_;
    std::vector<ChargeEntry> charges_;
    std::vector<BufferDecision> decisions_;
    std::vector<EndBufferEvent> end_events_;
    std::map<int, ClassState> classes_;
    std::array<std::size_t, 4> main_id_{};
    std::array<std::size_t, 4> buffer_id_{};
    Header h_;

    Txn txn_;
    std::uint64_t txn_no_ = 0;
    std::vector<std::uint64_t> shelf_stamp_;
    std::map<int, std::uint64_t> class_stamp_;

    std::size_t step_ = 0;
    std::optional<std::size_t> cur_owner_;
    std::string fail_reason_;
    // Coarse bucket grid over the unit square for overlap queries.
    static constexpr int kGrid = 128;
    struct Box {
        double x0, y0, x1, y1;
    };
    std::vector<std::vector<std::size_t>> cells_;
    std::vector<Box> boxes_;
    void grid_insert(const PlacedSquare& s);
    std::optional<std::size_t> first_conflict(const PlacedSquare& s) const;
};

} // namespace squarepack
