#include "kaclab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kaclab {

namespace {

struct View {
    double lo_x, lo_y, hi_x, hi_y, scale;
    double px(double x) const { return (x - lo_x) * scale; }
    double py(double y) const { return (hi_y - y) * scale; } // flip: lattice y grows upward
};

void circle(std::ostringstream& out, const View& v, double x, double y, double r,
            const std::string& fill) {
    out << "  <circle cx=\"" << v.px(x) << "\" cy=\"" << v.py(y) << "\" r=\"" << r
        << "\" fill=\"" << fill << "\"/>\n";
}

} // namespace

std::string render_cell_svg(const HittingSet& w, const VoronoiCells& cells,
                            const std::vector<IVec>& cell_b) {
    if (w.dim != 2) return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n";

    double lo = -2, hi = 2;
    auto stretch = [&](const std::vector<IVec>& pts) {
        for (const IVec& p : pts) {
            lo = std::min({lo, double(p[0]) - 1.5, double(p[1]) - 1.5});
            hi = std::max({hi, double(p[0]) + 1.5, double(p[1]) + 1.5});
        }
    };
    stretch(w.vectors);
    stretch(cells.closed_cell);
    stretch(cell_b);

    View v{lo, lo, hi, hi, 640.0 / (hi - lo)};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 640 640\">\n";
    out << "  <rect width=\"640\" height=\"640\" fill=\"white\"/>\n";

    // perpendicular bisectors between 0 and each site -w: 2<x,w> + |w|^2 = 0
    for (const IVec& hit : w.vectors) {
        if (hit[0] == 0 && hit[1] == 0) continue;
        double wx = double(hit[0]), wy = double(hit[1]);
        double n2 = wx * wx + wy * wy;
        double mx = -wx / 2, my = -wy / 2;     // midpoint of [0, -w]
        double dx = -wy / std::sqrt(n2), dy = wx / std::sqrt(n2);
        double span = (hi - lo) * 1.5;
        out << "  <line x1=\"" << v.px(mx - dx * span) << "\" y1=\"" << v.py(my - dy * span)
            << "\" x2=\"" << v.px(mx + dx * span) << "\" y2=\"" << v.py(my + dy * span)
            << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
    }

    for (const IVec& p : cells.closed_cell) circle(out, v, double(p[0]), double(p[1]), 6, "#7fb3ff");
    for (const IVec& p : cells.strict_cell) circle(out, v, double(p[0]), double(p[1]), 3.5, "#1f5fd0");
    for (const IVec& p : w.vectors) circle(out, v, double(p[0]), double(p[1]), 4, "#d04040");

    if (!cell_b.empty()) {
        out << "  <polygon points=\"";
        // hull outline via angular sort around the centroid (display only)
        std::vector<IVec> pts = cell_b;
        double cx = 0, cy = 0;
        for (const IVec& p : pts) { cx += double(p[0]); cy += double(p[1]); }
        cx /= double(pts.size());
        cy /= double(pts.size());
        std::sort(pts.begin(), pts.end(), [&](const IVec& a, const IVec& b) {
            return std::atan2(double(a[1]) - cy, double(a[0]) - cx) <
                   std::atan2(double(b[1]) - cy, double(b[0]) - cx);
        });
        for (const IVec& p : pts) out << v.px(double(p[0])) << "," << v.py(double(p[1])) << " ";
        out << "\" fill=\"none\" stroke=\"#208020\" stroke-width=\"2\"/>\n";
        for (const IVec& p : cell_b) circle(out, v, double(p[0]), double(p[1]), 2.2, "#208020");
    }

    circle(out, v, 0, 0, 3, "black");
    out << "</svg>\n";
    return out.str();
}

} // namespace kaclab
