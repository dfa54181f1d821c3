#include "squarepack/io.hpp"

#include <sstream>

#include <json.hpp>

namespace squarepack {

using nlohmann::json;

namespace {

json square_json(const PlacedSquare& s)
{
    return {{"id", s.id}, {"x", s.x.to_string()}, {"y", s.y.to_string()}, {"side", s.side.to_string()}, {"class", s.cls}};
}

Scalar scalar_field(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_string())
        throw ParseError(0, std::string("missing string field '") + key + "'");
    try {
        return Scalar::parse(j.at(key).get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(0, std::string("bad scalar in '") + key + "': " + e.what());
    }
}

PlacedSquare square_from(const json& j)
{
    PlacedSquare s;
    s.x = scalar_field(j, "x");
    s.y = scalar_field(j, "y");
    s.side = scalar_field(j, "side");
    s.id = j.value("id", std::size_t{0});
    s.cls = j.value("class", 0);
    return s;
}

json region_json(const Region& r)
{
    return {{"x0", r.x0.to_string()}, {"y0", r.y0.to_string()}, {"x1", r.x1.to_string()}, {"y1", r.y1.to_string()}};
}

Region region_from(const json& j)
{
    return Region(scalar_field(j, "x0"), scalar_field(j, "y0"), scalar_field(j, "x1"), scalar_field(j, "y1"));
}

} // namespace

bool PackingSummary::operator==(const PackingSummary& o) const
{
    if (total_area != o.total_area || density != o.density || rejected_index != o.rejected_index)
        return false;
    if (rejected.has_value() != o.rejected.has_value())
        return false;
    if (!rejected)
        return true;
    return rejected->candidate == o.rejected->candidate && rejected->conflict == o.rejected->conflict
           && rejected->reason == o.rejected->reason;
}

std::vector<Scalar> parse_sequence(std::istream& in)
{
    std::vector<Scalar> out;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(no, e.what());
        }
        if (!j.is_object() || !j.contains("side"))
            throw ParseError(no, "expected an object with a \"side\" field");
        const json& v = j.at("side");
        Scalar s;
        try {
            if (v.is_string())
                s = Scalar::parse(v.get<std::string>());
            else if (v.is_number_integer())
                s = Scalar(v.get<long>());
            else
                throw ParseError(no, "side must be a string or an integer");
        } catch (const std::invalid_argument& e) {
            throw ParseError(no, e.what());
        }
        if (s.sign() <= 0)
            throw ParseError(no, "side must be positive");
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Scalar> parse_sequence(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_sequence(in);
}

std::string render_sequence(const std::vector<Scalar>& sides)
{
    std::string out;
    for (const Scalar& s : sides) {
        out += json{{"side", s.to_string()}}.dump();
        out += '\n';
    }
    return out;
}

PackingFile packing_from_fixed(const FixedPacker& p, const std::optional<Rejected>& rejected,
                               std::optional<std::size_t> rejected_index)
{
    PackingFile f;
    f.mode = "fixed";
    f.container = unit_square();
    f.placements = p.placed();
    f.summary.total_area = p.total_input_area();
    f.summary.density = p.total_input_area();
    if (rejected)
        f.summary.rejected = rejected->witness;
    f.summary.rejected_index = rejected_index;
    return f;
}

PackingFile packing_from_brick(const BrickTree& t)
{
    PackingFile f;
    f.mode = "dynamic";
    f.placements = t.placed();
    if (!t.empty()) {
        const Brick& root = t.nodes()[t.root()];
        f.container = root.bounds();
        DensityReport d = density_report(t);
        f.summary.total_area = d.total_area;
        f.summary.density = d.density;
    }
    return f;
}

std::string render_packing(const PackingFile& f)
{
    json j;
    j["mode"] = f.mode;
    j["container"] = region_json(f.container);
    json arr = json::array();
    for (const PlacedSquare& s : f.placements)
        arr.push_back(square_json(s));
    j["placements"] = arr;
    json sum;
    sum["total_area"] = f.summary.total_area.to_string();
    sum["density"] = f.summary.density.to_string();
    sum["density_approx"] = f.summary.density.to_double();
    if (f.summary.rejected) {
        const Witness& w = *f.summary.rejected;
        json wj;
        wj["reason"] = w.reason;
        wj["candidate"] = w.candidate ? square_json(*w.candidate) : json(nullptr);
        wj["conflict"] = w.conflict ? json(*w.conflict) : json(nullptr);
        if (f.summary.rejected_index)
            wj["input_index"] = *f.summary.rejected_index;
        sum["rejected"] = wj;
    } else {
        sum["rejected"] = nullptr;
    }
    j["summary"] = sum;
    return j.dump(2) + "\n";
}

PackingFile parse_packing(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, e.what());
    }
    try {
        PackingFile f;
        f.mode = j.at("mode").get<std::string>();
        f.container = region_from(j.at("container"));
        for (const json& s : j.at("placements"))
            f.placements.push_back(square_from(s));
        const json& sum = j.at("summary");
        f.summary.total_area = scalar_field(sum, "total_area");
        f.summary.density = scalar_field(sum, "density");
        if (sum.contains("rejected") && !sum.at("rejected").is_null()) {
            const json& wj = sum.at("rejected");
            Witness w;
            w.reason = wj.value("reason", std::string());
            if (wj.contains("candidate") && !wj.at("candidate").is_null())
                w.candidate = square_from(wj.at("candidate"));
            if (wj.contains("conflict") && !wj.at("conflict").is_null())
                w.conflict = wj.at("conflict").get<std::size_t>();
            if (wj.contains("input_index"))
                f.summary.rejected_index = wj.at("input_index").get<std::size_t>();
            f.summary.rejected = std::move(w);
        }
        return f;
    } catch (const json::exception& e) {
        throw ParseError(0, e.what());
    }
}

std::string report_json(const AuditReport& r)
{
    json j;
    j["passed"] = r.passed();
    j["failures"] = r.failures();
    json arr = json::array();
    for (const AuditCheck& c : r.checks)
        arr.push_back({{"name", c.name},
                       {"relation", to_string(c.relation)},
                       {"measured", c.measured.to_string()},
                       {"bound", c.bound.to_string()},
                       {"pass", c.pass},
                       {"detail", c.detail}});
    j["checks"] = arr;
    return j.dump(2) + "\n";
}

std::string report_json(const ValidityReport& r)
{
    json j;
    j["disjoint"] = r.disjoint;
    j["contained"] = r.contained;
    json arr = json::array();
    for (const Violation& v : r.violations) {
        json e;
        e["a"] = v.a;
        e["b"] = v.b ? json(*v.b) : json("boundary");
        e["overlap"] = v.overlap ? region_json(*v.overlap) : json(nullptr);
        arr.push_back(e);
    }
    j["violations"] = arr;
    return j.dump(2) + "\n";
}

} // namespace squarepack
