#include "squarepack/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "squarepack/brick.hpp"

namespace squarepack {

// ------------------------------------------------------------------ streams

namespace {

struct MixName {
    ClassMix mix;
    const char* name;
};

constexpr MixName kMixNames[] = {
    {ClassMix::Uniform, "uniform"},
    {ClassMix::SmallOnly, "small-only"},
    {ClassMix::H2Heavy, "h2-heavy"},
    {ClassMix::H3Heavy, "h3-heavy"},
    {ClassMix::MediumThenTiny, "medium-then-tiny"},
    {ClassMix::Boundary, "boundary"},
    {ClassMix::OversizeH3, "oversize-h3"},
    {ClassMix::MediumOnly, "medium-only"},
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    std::uint64_t below(std::uint64_t n) { return g_() % n; }
    bool chance(unsigned percent) { return below(100) < percent; }

private:
    std::mt19937_64 g_;
};

// r in (1/2, 1] with denominator 2^(m+1) * d, d odd and small.
mpq_class random_ratio(Rng& rng, bool near_low = false)
{
    static constexpr long kOdd[] = {1, 3, 5, 7};
    long d = kOdd[rng.below(4)] << rng.below(7);
    long j = near_low ? 1 : 1 + static_cast<long>(rng.below(d));
    mpq_class r(d + j, 2 * d);
    r.canonicalize();
    return r;
}

mpq_class pow2q(int e)
{
    mpq_class r(1);
    if (e >= 0)
        mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), e);
    else
        mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), -e);
    r.canonicalize();
    return r;
}

mpq_class side_in_class(Rng& rng, int k, ClassMix mix)
{
    mpq_class unit = pow2q(-k);
    if (mix == ClassMix::Boundary) {
        switch (rng.below(3)) {
        case 0: return unit;
        case 1: {
            mpq_class r = random_ratio(rng, true);
            return unit * r;
        }
        default: break;
        }
    }
    if (mix == ClassMix::OversizeH3 && k == 3 && rng.chance(70)) {
        // Sides in (3/32, 1/8], too thick for narrow end buffers.
        mpq_class r = random_ratio(rng);
        return mpq_class(3, 32) + (r - mpq_class(1, 2)) * mpq_class(1, 16);
    }
    mpq_class r = random_ratio(rng);
    return unit * r;
}

int small_class(Rng& rng)
{
    // Favors the lower classes while still reaching k = 12.
    int k = 2;
    while (k < 12 && rng.chance(55))
        ++k;
    return k;
}

int sample_class(Rng& rng, ClassMix mix, std::size_t i, std::size_t n, const mpq_class& used, const mpq_class& budget)
{
    switch (mix) {
    case ClassMix::Uniform:
        if (i < 3 && rng.chance(25))
            return 0;
        if (rng.chance(12))
            return 1;
        return small_class(rng);
    case ClassMix::SmallOnly:
        return small_class(rng);
    case ClassMix::H2Heavy:
        return rng.chance(60) ? 2 : small_class(rng);
    case ClassMix::H3Heavy:
        return rng.chance(60) ? 3 : small_class(rng);
    case ClassMix::MediumThenTiny:
        if (used * 2 < budget && i < n / 2)
            return 1;
        return 6 + static_cast<int>(rng.below(6));
    case ClassMix::Boundary:
        return static_cast<int>(rng.below(11));
    case ClassMix::OversizeH3:
        return rng.chance(50) ? 3 : small_class(rng);
    case ClassMix::MediumOnly:
        return 1;
    }
    return 2;
}

} // namespace

const char* to_string(ClassMix m)
{
    for (const MixName& n : kMixNames)
        if (n.mix == m)
            return n.name;
    return "?";
}

ClassMix parse_class_mix(std::string_view name)
{
    for (const MixName& n : kMixNames)
        if (name == n.name)
            return n.mix;
    throw std::invalid_argument("unknown class mix: " + std::string(name));
}

const std::vector<ClassMix>& all_class_mixes()
{
    static const std::vector<ClassMix> all = [] {
        std::vector<ClassMix> v;
        for (const MixName& n : kMixNames)
            v.push_back(n.mix);
        return v;
    }();
    return all;
}

std::vector<Scalar> random_budgeted_stream(std::uint64_t seed, const Scalar& budget, ClassMix mix,
                                           const StreamOptions& opt)
{
    if (budget.sign() <= 0 || !budget.is_rational())
        throw std::invalid_argument("budget must be a positive rational");
    if (opt.min_count == 0 || opt.min_count > opt.max_count)
        throw std::invalid_argument("bad stream length range");
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(mix));
    const mpq_class& cap = budget.rational_part();
    std::size_t n = opt.min_count + rng.below(opt.max_count - opt.min_count + 1);
    bool saturate = rng.chance(60);
    bool scaled = mix != ClassMix::MediumOnly && rng.chance(50);
    if (saturate && n == opt.max_count && n > opt.min_count)
        --n;

    std::vector<Scalar> out;
    mpq_class used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class rest = cap - used;
        if (sgn(rest) <= 0)
            break;
        int k = sample_class(rng, mix, i, n, used, cap);
        if (scaled) {
            // Keep the expected area near rest / (squares left).
            double t = std::sqrt(rest.get_d() / static_cast<double>(n - i));
            int k0 = static_cast<int>(std::floor(-std::log2(t)));
            k = std::max(k, k0 - static_cast<int>(rng.below(3)));
        }
        if (mix == ClassMix::MediumOnly)
            k = 1;
        // Smallest class every member of which still fits; medium squares
        // are shrunk to fit instead.
        while (mix != ClassMix::MediumOnly && pow2q(-2 * k) > rest && k < 60)
            ++k;
        if (k >= 60 || (mix == ClassMix::MediumOnly && rest <= pow2q(-4)))
            break;
        mpq_class x = side_in_class(rng, k, mix);
        if (x > 1)
            x = 1;
        if (x * x > rest)
            x = rational_sqrt_floor(rest, static_cast<unsigned>(k + 24));
        if (sgn(x) <= 0 || (mix == ClassMix::MediumOnly && x <= pow2q(-2)))
            break;
        used += x * x;
        out.emplace_back(x);
    }
    if (saturate && out.size() < opt.max_count) {
        mpq_class rest = cap - used;
        if (sgn(rest) > 0) {
            mpq_class x = rational_sqrt_floor(rest, 40);
            // The closing square stays inside the classes of the mix.
            mpq_class top = mix == ClassMix::SmallOnly ? pow2q(-2) : mix == ClassMix::MediumOnly ? pow2q(-1) : 1;
            if (x > top)
                x = top;
            bool allowed = mix != ClassMix::MediumOnly || x > pow2q(-2);
            if (sgn(x) > 0 && allowed)
                out.emplace_back(x);
        }
    }
    return out;
}

std::vector<Scalar> random_dynamic_stream(std::uint64_t seed, std::size_t count, int min_exp, int max_exp)
{
    if (min_exp > max_exp)
        throw std::invalid_argument("empty exponent range");
    Rng rng(seed ^ 0xD1B54A32D192ED03ULL);
    std::vector<Scalar> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        int e = min_exp + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_exp - min_exp + 1)));
        out.emplace_back(pow2q(e) * random_ratio(rng));
    }
    return out;
}

// ------------------------------------------------------------------ game

const char* to_string(Move m)
{
    return m == Move::Side ? "side" : "center";
}

const char* to_string(DemandKind k)
{
    switch (k) {
    case DemandKind::Initial: return "initial";
    case DemandKind::Probe: return "probe";
    case DemandKind::Completion: return "completion";
    case DemandKind::Closing: return "closing";
    }
    return "?";
}

Move classify_probe(const Region& pattern, const PlacedSquare& probe, bool* irregular)
{
    Region p = probe.bounds();
    Scalar ix = min(p.x1, pattern.x1) - max(p.x0, pattern.x0);
    Scalar iy = min(p.y1, pattern.y1) - max(p.y0, pattern.y0);
    bool side_canon = (p.x0 == pattern.x1 && p.y0 == pattern.y0) || (p.x0 == pattern.x0 && p.y0 == pattern.y1);
    bool center_canon = p.x0 == pattern.x1 && p.y0 == pattern.y1;
    Move m;
    if (ix.sign() < 0 || iy.sign() < 0)
        m = Move::Center;
    else if (ix.sign() > 0 && iy.sign() > 0)
        m = Move::Side;
    else if (ix.sign() == 0 && iy.sign() == 0)
        m = Move::Center;
    else
        m = Move::Side;
    if (irregular)
        *irregular = m == Move::Side ? !side_canon : !center_canon;
    return m;
}

Game::Game(GameConfig cfg) : cfg_(cfg)
{
    if (cfg_.max_rounds == 0)
        throw std::invalid_argument("max_rounds must be at least 1");
}

Scalar Game::box_side() const
{
    if (placed_.empty())
        return Scalar(0);
    return max(max_x_ - min_x_, max_y_ - min_y_);
}

Scalar Game::density() const
{
    Scalar s = box_side();
    if (s.sign() == 0)
        return Scalar(0);
    return total_ / (s * s);
}

Demand Game::next_demand()
{
    if (phase_ == Phase::Done)
        return Done{};
    if (!pending_) {
        if (!started_) {
            pending_ = SquareDemand{Scalar(1), DemandKind::Initial};
            started_ = true;
        } else if (!queue_.empty()) {
            pending_ = queue_.front();
            queue_.erase(queue_.begin());
        } else {
            return Done{};
        }
    }
    return *pending_;
}

void Game::observe(const PlacedSquare& sq)
{
    if (!pending_)
        throw std::invalid_argument("no pending demand");
    if (sq.side != pending_->side)
        throw std::invalid_argument("placed side " + sq.side.to_string() + " differs from demanded "
                                    + pending_->side.to_string());
    for (const PlacedSquare& o : placed_)
        if (interiors_overlap(o, sq))
            throw std::invalid_argument("square " + std::to_string(placed_.size()) + " overlaps square "
                                        + std::to_string(o.id));
    SquareDemand d = *pending_;
    pending_.reset();

    PlacedSquare s = sq;
    s.id = placed_.size();
    if (placed_.empty()) {
        min_x_ = s.x;
        min_y_ = s.y;
        max_x_ = s.x + s.side;
        max_y_ = s.y + s.side;
    } else {
        min_x_ = min(min_x_, s.x);
        min_y_ = min(min_y_, s.y);
        max_x_ = max(max_x_, s.x + s.side);
        max_y_ = max(max_y_, s.y + s.side);
    }
    placed_.push_back(s);
    total_ += s.side * s.side;
    Scalar dens = density();
    if (placed_.size() == 1 || dens < min_density_)
        min_density_ = dens;

    current_.squares.push_back(s);
    current_.kinds.push_back(d.kind);
    if (d.kind == DemandKind::Probe) {
        bool irregular = false;
        Move m = classify_probe(pattern_, s, &irregular);
        current_.move = m;
        current_.irregular = irregular;
        queue_.push_back({d.side, DemandKind::Completion});
        if (m == Move::Center)
            queue_.push_back({d.side * Scalar::frac(1, 2), DemandKind::Completion});
    } else if (d.kind == DemandKind::Closing) {
        current_.closing = true;
    }
    if (queue_.empty())
        finish_round();
}

void Game::finish_round()
{
    current_.round = round_;
    current_.box_side = box_side();
    current_.density = density();
    bool closing = current_.closing;
    std::optional<Move> move = current_.move;
    rounds_.push_back(std::move(current_));
    current_ = RoundRecord{};
    if (closing) {
        phase_ = Phase::Done;
        return;
    }
    Scalar s = box_side();
    double gap = std::abs(density().to_double() - 0.75);
    if (move == Move::Center && gap < cfg_.epsilon) {
        phase_ = Phase::Closing;
        queue_.push_back({s * Scalar::frac(3, 4), DemandKind::Closing});
        ++round_;
        return;
    }
    if (round_ >= cfg_.max_rounds) {
        phase_ = Phase::Done;
        return;
    }
    ++round_;
    pattern_ = Region(min_x_, min_y_, max_x_, max_y_);
    queue_.push_back({s, DemandKind::Probe});
}

Transcript run_match(const GameConfig& cfg, const Player& player)
{
    Game g(cfg);
    Transcript t;
    while (true) {
        Demand d = g.next_demand();
        if (std::holds_alternative<Done>(d))
            break;
        const SquareDemand& sd = std::get<SquareDemand>(d);
        Point p = player(sd);
        PlacedSquare sq;
        sq.x = p.x;
        sq.y = p.y;
        sq.side = sd.side;
        try {
            g.observe(sq);
        } catch (const std::invalid_argument& e) {
            t.violation = e.what();
            break;
        }
    }
    t.rounds = g.rounds();
    t.min_density = g.min_density();
    for (const RoundRecord& r : t.rounds) {
        if (r.closing)
            t.final_density = r.density;
        else
            t.limit_density = r.density;
    }
    return t;
}

Player scripted_player(std::vector<Move> script)
{
    if (script.empty())
        throw std::invalid_argument("empty script");
    struct State {
        std::vector<Move> script;
        std::size_t next = 0;
        Move current = Move::Side;
        int completions = 0;
        Scalar s;
    };
    auto st = std::make_shared<State>();
    st->script = std::move(script);
    return [st](const SquareDemand& d) -> Point {
        const Scalar& s = st->s;
        switch (d.kind) {
        case DemandKind::Initial:
            st->s = d.side;
            return {Scalar(0), Scalar(0)};
        case DemandKind::Probe:
            st->current = st->script[std::min(st->next, st->script.size() - 1)];
            ++st->next;
            st->completions = 0;
            if (st->current == Move::Side)
                return {s, Scalar(0)};
            return {s, s};
        case DemandKind::Completion: {
            ++st->completions;
            Point p;
            if (st->current == Move::Side) {
                p = {Scalar(0), s};
            } else if (st->completions == 1) {
                p = {s, Scalar(0)};
            } else {
                // Half-size square centered in the open cell.
                p = {s * Scalar::frac(1, 4), s + s * Scalar::frac(1, 4)};
            }
            int last = st->current == Move::Side ? 1 : 2;
            if (st->completions == last)
                st->s = s * Scalar(2);
            return p;
        }
        case DemandKind::Closing:
            return {s, s};
        }
        throw std::logic_error("unknown demand");
    };
}

std::vector<Move> parse_script(std::string_view text)
{
    std::vector<Move> out;
    std::string tok;
    auto flush = [&] {
        if (tok.empty())
            return;
        if (tok == "side" || tok == "s")
            out.push_back(Move::Side);
        else if (tok == "center" || tok == "c")
            out.push_back(Move::Center);
        else if (tok.find_first_not_of("sc") == std::string::npos)
            for (char c : tok)
                out.push_back(c == 's' ? Move::Side : Move::Center);
        else
            throw std::invalid_argument("bad script token: " + tok);
        tok.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ' ')
            flush();
        else
            tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    flush();
    if (out.empty())
        throw std::invalid_argument("empty script");
    return out;
}

Player brick_player()
{
    auto tree = std::make_shared<BrickTree>();
    return [tree](const SquareDemand& d) -> Point {
        PlacedSquare sq = tree->pack(d.side);
        return {sq.x, sq.y};
    };
}

std::string transcript_jsonl(const Transcript& t)
{
    std::string out;
    for (const RoundRecord& r : t.rounds) {
        nlohmann::json j;
        j["round"] = r.round;
        j["move"] = r.move ? nlohmann::json(to_string(*r.move)) : nlohmann::json(nullptr);
        j["irregular"] = r.irregular;
        j["closing"] = r.closing;
        nlohmann::json sq = nlohmann::json::array();
        for (std::size_t i = 0; i < r.squares.size(); ++i) {
            const PlacedSquare& s = r.squares[i];
            sq.push_back({{"kind", to_string(r.kinds[i])},
                          {"x", s.x.to_string()},
                          {"y", s.y.to_string()},
                          {"side", s.side.to_string()}});
        }
        j["squares"] = sq;
        j["box_side"] = r.box_side.to_string();
        j["density"] = r.density.to_string();
        j["density_approx"] = r.density.to_double();
        out += j.dump();
        out += '\n';
    }
    if (t.violation) {
        nlohmann::json j;
        j["violation"] = *t.violation;
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace squarepack
