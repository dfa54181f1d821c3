#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "squarepack/geometry.hpp"
#include "squarepack/shelf.hpp"

namespace squarepack {

// ------------------------------------------------------------------ streams

enum class ClassMix { Uniform, SmallOnly, H2Heavy, H3Heavy, MediumThenTiny, Boundary, OversizeH3, MediumOnly };

const char* to_string(ClassMix m);
// Throws std::invalid_argument for unknown names.
ClassMix parse_class_mix(std::string_view name);
const std::vector<ClassMix>& all_class_mixes();

struct StreamOptions {
    std::size_t min_count = 10;
    std::size_t max_count = 2000;
};

// Deterministic per seed; every prefix has total area <= budget.
std::vector<Scalar> random_budgeted_stream(std::uint64_t seed, const Scalar& budget, ClassMix mix,
                                           const StreamOptions& opt = {});

// Rational sides 2^e * r with e in [min_exp, max_exp] and r in (1/2, 1].
std::vector<Scalar> random_dynamic_stream(std::uint64_t seed, std::size_t count, int min_exp, int max_exp);

// ------------------------------------------------------------------ game

enum class Move { Side, Center };
enum class DemandKind { Initial, Probe, Completion, Closing };
enum class Phase { Iterating, Closing, Done };

const char* to_string(Move m);
const char* to_string(DemandKind k);

struct SquareDemand {
    Scalar side;
    DemandKind kind = DemandKind::Probe;
};

struct Done {};

using Demand = std::variant<SquareDemand, Done>;

struct GameConfig {
    std::size_t max_rounds = 20;
    double epsilon = 1e-3;
};

struct RoundRecord {
    std::size_t round = 0;
    std::optional<Move> move;
    // Probe did not match either canonical pattern exactly.
    bool irregular = false;
    std::vector<PlacedSquare> squares;
    std::vector<DemandKind> kinds;
    Scalar box_side;
    Scalar density;
    bool closing = false;
};

// Opponent that forces the density of the spanning square towards 3/7.
// The pattern box is the bounding square of all squares before a probe.
// Side answer: one more square of the probe size, box doubles.
// Center answer: one square of the probe size and one of half of it
// fill the two open cells, box doubles.
class Game {
public:
    explicit Game(GameConfig cfg);

    Demand next_demand();
    // Throws std::invalid_argument if the placement does not match the
    // pending demand or overlaps an earlier square.
    void observe(const PlacedSquare& placed);

    Phase phase() const { return phase_; }
    const std::vector<RoundRecord>& rounds() const { return rounds_; }
    const std::vector<PlacedSquare>& placed() const { return placed_; }
    Scalar box_side() const;
    Scalar density() const;
    // Smallest density observed after any placement.
    const Scalar& min_density() const { return min_density_; }

private:
    void finish_round();

    GameConfig cfg_;
    Phase phase_ = Phase::Iterating;
    std::vector<PlacedSquare> placed_;
    Scalar total_;
    Scalar min_x_, min_y_, max_x_, max_y_;
    std::vector<SquareDemand> queue_;
    std::optional<SquareDemand> pending_;
    Region pattern_;
    std::size_t round_ = 0;
    RoundRecord current_;
    std::vector<RoundRecord> rounds_;
    bool started_ = false;
    Scalar min_density_;
};

// Classifies a probe against the pattern box: Side iff the probe shares a
// boundary segment of positive length with it (or overlaps it).
Move classify_probe(const Region& pattern, const PlacedSquare& probe, bool* irregular = nullptr);

using Player = std::function<Point(const SquareDemand&)>;

struct Transcript {
    std::vector<RoundRecord> rounds;
    std::optional<std::string> violation;
    Scalar limit_density;
    std::optional<Scalar> final_density;
    Scalar min_density;
};

// Throws std::invalid_argument when cfg.max_rounds == 0.
Transcript run_match(const GameConfig& cfg, const Player& player);

// Scripted canonical player; the script repeats its last move.
Player scripted_player(std::vector<Move> script);
// Parses "side,center,..." or a compact "sscc"; throws on bad input.
std::vector<Move> parse_script(std::string_view text);
Player brick_player();

std::string transcript_jsonl(const Transcript& t);

} // namespace squarepack
