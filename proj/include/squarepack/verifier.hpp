#pragma once

#include <optional>
#include <string>
#include <vector>

#include "squarepack/brick.hpp"
#include "squarepack/fixed_packer.hpp"
#include "squarepack/geometry.hpp"

namespace squarepack {

struct Violation {
    std::size_t a = 0;
    // Second square, or empty for a containment violation.
    std::optional<std::size_t> b;
    // Intersection of the two squares, or the part outside the container.
    std::optional<Region> overlap;
};

struct ValidityReport {
    bool disjoint = true;
    bool contained = true;
    std::vector<Violation> violations;

    bool valid() const { return disjoint && contained; }
};

// Exact interior-disjointness of all pairs; containment only if a
// container is given.
ValidityReport validate(const std::vector<PlacedSquare>& placed, const std::optional<Region>& container);

enum class Relation { AtLeast, Greater, AtMost, Equal };

const char* to_string(Relation r);

struct AuditCheck {
    std::string name;
    Relation relation = Relation::AtLeast;
    Scalar bound;
    Scalar measured;
    bool pass = true;
    std::string detail;
};

struct AuditReport {
    std::vector<AuditCheck> checks;

    // Records one comparison; returns its pass flag.
    bool add(std::string name, Relation rel, const Scalar& measured, const Scalar& bound, std::string detail = {});
    bool passed() const;
    std::size_t failures() const;
    // Failing checks only.
    std::vector<AuditCheck> failing() const;
};

// Small-square area against half of the used main sections outside E.
AuditCheck check_main_density(const FixedPacker& p);

AuditReport audit_fixed(const FixedPacker& p);
// Throws std::logic_error on an empty tree.
AuditReport audit_dynamic(const BrickTree& t);

} // namespace squarepack
