#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "squarepack/brick.hpp"
#include "squarepack/fixed_packer.hpp"
#include "squarepack/verifier.hpp"

namespace squarepack {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// JSON Lines, one {"side": "<scalar>"} per line; blank lines are skipped.
// Sides must be positive. Throws ParseError.
std::vector<Scalar> parse_sequence(std::istream& in);
std::vector<Scalar> parse_sequence(std::string_view text);
std::string render_sequence(const std::vector<Scalar>& sides);

struct PackingSummary {
    Scalar total_area;
    Scalar density;
    std::optional<Witness> rejected;
    // Index of the rejected input, if any.
    std::optional<std::size_t> rejected_index;

    bool operator==(const PackingSummary&) const;
};

struct PackingFile {
    std::string mode;
    Region container;
    std::vector<PlacedSquare> placements;
    PackingSummary summary;

    bool operator==(const PackingFile&) const = default;
};

PackingFile packing_from_fixed(const FixedPacker& p, const std::optional<Rejected>& rejected = std::nullopt,
                               std::optional<std::size_t> rejected_index = std::nullopt);
PackingFile packing_from_brick(const BrickTree& t);

std::string render_packing(const PackingFile& f);
// Throws ParseError (line 0) on malformed documents.
PackingFile parse_packing(std::string_view text);

std::string report_json(const AuditReport& r);
std::string report_json(const ValidityReport& r);

struct SvgOptions {
    double size = 800;
    bool overlay = true;
};

// Regions of the fixed layout are drawn under the squares.
std::string render_svg(const FixedPacker& p, const SvgOptions& opt = {});
// Brick leaves are drawn under the squares.
std::string render_svg(const BrickTree& t, const SvgOptions& opt = {});

} // namespace squarepack
