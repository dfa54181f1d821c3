#include <cstdio>
#include <string>

#include "squarepack/io.hpp"

namespace squarepack {

namespace {

class Canvas {
public:
    Canvas(double width, double height, double scale) : h_(height), scale_(scale)
    {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.2f\" height=\"%.2f\" viewBox=\"0 0 %.2f %.2f\">\n",
                      width * scale, height * scale, width * scale, height * scale);
        out_ = buf;
    }

    // Flips y so the origin sits at the bottom left.
    void rect(const Region& r, const char* fill, const char* stroke, double opacity, const std::string& title = {})
    {
        double x0 = r.x0.to_double(), y0 = r.y0.to_double(), x1 = r.x1.to_double(), y1 = r.y1.to_double();
        char buf[320];
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.4f\" y=\"%.4f\" width=\"%.4f\" height=\"%.4f\" fill=\"%s\" fill-opacity=\"%.2f\" "
                      "stroke=\"%s\" stroke-width=\"0.5\">",
                      x0 * scale_, (h_ - y1) * scale_, (x1 - x0) * scale_, (y1 - y0) * scale_, fill, opacity, stroke);
        out_ += buf;
        if (!title.empty())
            out_ += "<title>" + title + "</title>";
        out_ += "</rect>\n";
    }

    void label(const Region& r, const std::string& text)
    {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" fill=\"#555\" font-family=\"sans-serif\">%s</text>\n",
                      r.x0.to_double() * scale_ + 3, (h_ - r.y1.to_double()) * scale_ + 13, text.c_str());
        out_ += buf;
    }

    std::string finish()
    {
        out_ += "</svg>\n";
        return std::move(out_);
    }

private:
    double h_;
    double scale_;
    std::string out_;
};

const char* class_color(int k)
{
    static const char* palette[] = {"#d62728", "#ff7f0e", "#2ca02c", "#1f77b4", "#9467bd",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
    if (k < 0)
        k = -k;
    return palette[k % 10];
}

} // namespace

std::string render_svg(const FixedPacker& p, const SvgOptions& opt)
{
    Canvas c(1.0, 1.0, opt.size);
    c.rect(unit_square(), "#ffffff", "#000000", 1.0);
    if (opt.overlay) {
        const RegionLayout& l = p.layout();
        for (const NamedRegion& t : l.tiles()) {
            const char* fill = t.name[0] == 'M' ? "#e8f0fe" : t.name[0] == 'B' ? "#fef3e0" : "#e6f4ea";
            c.rect(t.region, fill, "#999999", 0.8, t.name);
            c.label(t.region, t.name);
        }
        for (std::size_t i = 0; i < l.E.size(); ++i)
            c.rect(l.E[i], "#f3e8fd", "#b39ddb", 0.6, "E" + std::to_string(i + 1));
    }
    for (const PlacedSquare& s : p.placed())
        c.rect(s.bounds(), class_color(s.cls), "#222222", 0.75,
               "#" + std::to_string(s.id) + " side " + s.side.to_string());
    return c.finish();
}

std::string render_svg(const BrickTree& t, const SvgOptions& opt)
{
    if (t.empty())
        return Canvas(1.0, 1.0, opt.size).finish();
    const Brick& root = t.nodes()[t.root()];
    double w = root.width().to_double(), h = root.height().to_double();
    double m = w > h ? w : h;
    Canvas c(w, h, opt.size / m);
    c.rect(root.bounds(), "#ffffff", "#000000", 1.0);
    if (opt.overlay) {
        for (const Brick& b : t.nodes())
            if (b.state != BrickState::Split)
                c.rect(b.bounds(), b.state == BrickState::Free ? "#f5f5f5" : "#e8f0fe", "#bbbbbb", 0.8);
    }
    for (const PlacedSquare& s : t.placed())
        c.rect(s.bounds(), class_color(s.cls), "#222222", 0.75,
               "#" + std::to_string(s.id) + " side " + s.side.to_string());
    return c.finish();
}

} // namespace squarepack
