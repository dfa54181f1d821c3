#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "squarepack/adversary.hpp"
#include "squarepack/brick.hpp"
#include "squarepack/fixed_packer.hpp"
#include "squarepack/io.hpp"
#include "squarepack/verifier.hpp"

using namespace squarepack;

namespace {

constexpr int kOk = 0;
constexpr int kAuditFailed = 1;
constexpr int kRejected = 2;
constexpr int kUsage = 64;

enum class AuditMode { PerStep, Final, Off };

AuditMode parse_audit(std::string text)
{
    if (const char* env = std::getenv("SQUAREPACK_AUDIT"); env && *env)
        text = env;
    if (text == "per-step")
        return AuditMode::PerStep;
    if (text == "final")
        return AuditMode::Final;
    if (text == "off")
        return AuditMode::Off;
    throw std::invalid_argument("audit mode must be per-step, final or off: " + text);
}

void write_file(const std::string& path, const std::string& body)
{
    if (path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << body;
}

void print_failures(const AuditReport& r, std::size_t step)
{
    for (const AuditCheck& c : r.failing())
        std::cerr << "audit failure after square " << step << ": " << c.name << " " << c.measured.to_string() << ' '
                  << to_string(c.relation) << ' ' << c.bound.to_string() << " (" << c.detail << ")\n";
}

struct PackArgs {
    std::string mode = "fixed";
    std::string input = "-";
    std::string output = "-";
    std::string svg;
    std::string audit = "final";
};

int cmd_pack(const PackArgs& a)
{
    AuditMode audit;
    std::vector<Scalar> sides;
    try {
        audit = parse_audit(a.audit);
        if (a.input == "-") {
            sides = parse_sequence(std::cin);
        } else {
            std::ifstream in(a.input);
            if (!in) {
                std::cerr << "cannot read " << a.input << "\n";
                return kUsage;
            }
            sides = parse_sequence(in);
        }
        if (a.mode == "fixed")
            for (std::size_t i = 0; i < sides.size(); ++i)
                if (sides[i] > Scalar(1))
                    throw ParseError(i + 1, "side exceeds 1 in fixed mode: " + sides[i].to_string());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    bool audit_ok = true;
    if (a.mode == "fixed") {
        FixedPacker p;
        std::optional<Rejected> rejected;
        std::optional<std::size_t> rejected_at;
        for (std::size_t i = 0; i < sides.size(); ++i) {
            PackOutcome o = p.pack_next(sides[i]);
            if (auto* r = std::get_if<Rejected>(&o)) {
                rejected = *r;
                rejected_at = i;
                break;
            }
            if (audit == AuditMode::PerStep) {
                AuditReport rep = audit_fixed(p);
                if (!rep.passed()) {
                    print_failures(rep, i);
                    audit_ok = false;
                }
            }
        }
        if (audit != AuditMode::Off) {
            AuditReport rep = audit_fixed(p);
            if (!rep.passed()) {
                print_failures(rep, p.placed().size());
                audit_ok = false;
            }
        }
        write_file(a.output, render_packing(packing_from_fixed(p, rejected, rejected_at)));
        if (!a.svg.empty())
            write_file(a.svg, render_svg(p));
        std::cerr << "placed " << p.placed().size() << " of " << sides.size() << " squares, area "
                  << p.total_input_area().to_string() << "\n";
        if (rejected)
            std::cerr << "rejected input " << *rejected_at << ": " << rejected->witness.reason << "\n";
        if (!audit_ok)
            return kAuditFailed;
        return rejected ? kRejected : kOk;
    }
    if (a.mode == "dynamic") {
        BrickTree t;
        for (std::size_t i = 0; i < sides.size(); ++i) {
            t.pack(sides[i]);
            if (audit == AuditMode::PerStep) {
                AuditReport rep = audit_dynamic(t);
                if (!rep.passed()) {
                    print_failures(rep, i);
                    audit_ok = false;
                }
            }
        }
        if (audit != AuditMode::Off && !t.empty()) {
            AuditReport rep = audit_dynamic(t);
            if (!rep.passed()) {
                print_failures(rep, t.placed().size());
                audit_ok = false;
            }
        }
        write_file(a.output, render_packing(packing_from_brick(t)));
        if (!a.svg.empty())
            write_file(a.svg, render_svg(t));
        if (!t.empty())
            std::cerr << "placed " << sides.size() << " squares, density " << density_report(t).density.to_double()
                      << "\n";
        return audit_ok ? kOk : kAuditFailed;
    }
    std::cerr << "unknown mode " << a.mode << "\n";
    return kUsage;
}

struct FuzzArgs {
    std::string mode = "fixed";
    std::size_t runs = 100;
    std::string budget = "11/32";
    std::uint64_t seed = 1;
    std::string mix = "all";
    std::size_t min_count = 10;
    std::size_t max_count = 2000;
    int min_exp = -20;
    int max_exp = 5;
    std::string audit = "final";
};

int cmd_fuzz(const FuzzArgs& a)
{
    AuditMode audit;
    Scalar budget;
    std::vector<ClassMix> mixes;
    try {
        audit = parse_audit(a.audit);
        budget = Scalar::parse(a.budget);
        if (a.mix == "all")
            mixes = all_class_mixes();
        else
            mixes = {parse_class_mix(a.mix)};
        if (a.runs == 0)
            throw std::invalid_argument("--runs must be at least 1");
        if (a.mode != "fixed" && a.mode != "dynamic")
            throw std::invalid_argument("unknown mode " + a.mode);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    std::size_t rejections = 0, violations = 0, audit_failures = 0;
    std::optional<Scalar> min_density;
    StreamOptions opt{a.min_count, a.max_count};
    for (std::size_t r = 0; r < a.runs; ++r) {
        std::uint64_t seed = a.seed + r;
        if (a.mode == "fixed") {
            ClassMix mix = mixes[r % mixes.size()];
            std::vector<Scalar> sides = random_budgeted_stream(seed, budget, mix, opt);
            FixedPacker p;
            for (std::size_t i = 0; i < sides.size(); ++i) {
                PackOutcome o = p.pack_next(sides[i]);
                if (auto* rej = std::get_if<Rejected>(&o)) {
                    ++rejections;
                    std::cerr << "seed " << seed << " (" << to_string(mix) << ") rejected input " << i << ": "
                              << rej->witness.reason << "\n";
                    break;
                }
                if (audit == AuditMode::PerStep && !audit_fixed(p).passed()) {
                    ++audit_failures;
                    std::cerr << "seed " << seed << " audit failed after square " << i << "\n";
                    break;
                }
            }
            if (!validate(p.placed(), unit_square()).valid())
                ++violations;
            if (audit == AuditMode::Final) {
                AuditReport rep = audit_fixed(p);
                if (!rep.passed()) {
                    ++audit_failures;
                    print_failures(rep, p.placed().size());
                }
            }
            Scalar d = p.total_input_area();
            if (!min_density || d < *min_density)
                min_density = d;
        } else {
            std::size_t count = opt.min_count + static_cast<std::size_t>(seed % (opt.max_count - opt.min_count + 1));
            std::vector<Scalar> sides = random_dynamic_stream(seed, count, a.min_exp, a.max_exp);
            BrickTree t;
            for (const Scalar& s : sides) {
                t.pack(s);
                Scalar d = density_report(t).density;
                if (!min_density || d < *min_density)
                    min_density = d;
                if (audit == AuditMode::PerStep && !audit_dynamic(t).passed()) {
                    ++audit_failures;
                    break;
                }
            }
            if (!validate(t.placed(), std::nullopt).valid())
                ++violations;
            if (audit == AuditMode::Final && !audit_dynamic(t).passed())
                ++audit_failures;
        }
    }
    std::cout << "runs " << a.runs << "\nrejections " << rejections << "\nverifier violations " << violations
              << "\naudit failures " << audit_failures << "\nmin density "
              << (min_density ? min_density->to_string() : "n/a") << " ("
              << (min_density ? min_density->to_double() : 0.0) << ")\n";
    if (violations || audit_failures)
        return kAuditFailed;
    return rejections ? kRejected : kOk;
}

struct DuelArgs {
    std::string player = "brick";
    double epsilon = 1e-3;
    std::size_t rounds = 20;
    std::string out;
};

int cmd_duel(const DuelArgs& a)
{
    Player player;
    try {
        if (a.player == "brick")
            player = brick_player();
        else if (a.player.rfind("script:", 0) == 0)
            player = scripted_player(parse_script(a.player.substr(7)));
        else
            throw std::invalid_argument("player must be brick or script:<moves>");
        if (a.rounds == 0)
            throw std::invalid_argument("--rounds must be at least 1");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    GameConfig cfg;
    cfg.epsilon = a.epsilon;
    cfg.max_rounds = a.rounds;
    Transcript t = run_match(cfg, player);
    if (!a.out.empty())
        write_file(a.out, transcript_jsonl(t));
    std::cout << "rounds " << t.rounds.size() << "\nlimit density " << t.limit_density.to_string() << " ("
              << t.limit_density.to_double() << ")\n";
    if (t.final_density)
        std::cout << "final density " << t.final_density->to_string() << " (" << t.final_density->to_double() << ")\n";
    std::cout << "min density " << t.min_density.to_double() << "\n";
    if (t.violation) {
        std::cerr << "player violation: " << *t.violation << "\n";
        return kAuditFailed;
    }
    return kOk;
}

int cmd_verify(const std::string& input)
{
    PackingFile f;
    try {
        std::ifstream in(input);
        if (!in)
            throw std::runtime_error("cannot read " + input);
        std::stringstream ss;
        ss << in.rdbuf();
        f = parse_packing(ss.str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    std::optional<Region> container;
    if (f.mode == "fixed")
        container = f.container;
    ValidityReport r = validate(f.placements, container);
    std::cout << report_json(r);
    return r.valid() ? kOk : kAuditFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Online square packing into fixed and growing containers"};
    app.require_subcommand(1);

    PackArgs pack;
    auto* p = app.add_subcommand("pack", "Pack a JSON Lines stream of sides");
    p->add_option("--mode", pack.mode, "fixed or dynamic")->check(CLI::IsMember({"fixed", "dynamic"}));
    p->add_option("--input", pack.input, "Sequence file, - for stdin");
    p->add_option("--output", pack.output, "Packing file, - for stdout");
    p->add_option("--svg", pack.svg, "Optional SVG rendering");
    p->add_option("--audit", pack.audit, "per-step, final or off");

    FuzzArgs fuzz;
    auto* f = app.add_subcommand("fuzz", "Pack random budgeted streams and verify them");
    f->add_option("--mode", fuzz.mode, "fixed or dynamic");
    f->add_option("--runs", fuzz.runs, "Number of streams");
    f->add_option("--budget", fuzz.budget, "Area budget per stream (fixed mode)");
    f->add_option("--seed", fuzz.seed, "First seed");
    f->add_option("--class-mix", fuzz.mix, "Class mix name or all");
    f->add_option("--min-count", fuzz.min_count, "Fewest squares per stream");
    f->add_option("--max-count", fuzz.max_count, "Most squares per stream");
    f->add_option("--min-exp", fuzz.min_exp, "Smallest side exponent (dynamic mode)");
    f->add_option("--max-exp", fuzz.max_exp, "Largest side exponent (dynamic mode)");
    f->add_option("--audit", fuzz.audit, "per-step, final or off");

    DuelArgs duel;
    auto* d = app.add_subcommand("duel", "Play the density adversary against a player");
    d->add_option("--player", duel.player, "brick or script:<side|center,...>");
    d->add_option("--epsilon", duel.epsilon, "Closing window around the center limit");
    d->add_option("--rounds", duel.rounds, "Most probe rounds");
    d->add_option("--out", duel.out, "Transcript JSON Lines file");

    std::string verify_input;
    auto* v = app.add_subcommand("verify", "Check a packing file for overlaps and containment");
    v->add_option("input", verify_input, "Packing file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    try {
        if (*p)
            return cmd_pack(pack);
        if (*f)
            return cmd_fuzz(fuzz);
        if (*d)
            return cmd_duel(duel);
        if (*v)
            return cmd_verify(verify_input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAuditFailed;
    }
    return kUsage;
}
