#include "motpaver/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace motpaver {

namespace {

struct Pt {
    double x, y;
};

const char* kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                          "#66ccee", "#aa3377", "#bbbbbb"};

std::string color(int k) { return kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))]; }

// convex polygon outline: vertices sorted by angle around their mean
std::vector<Pt> outline(std::vector<Pt> pts) {
    Pt c{0, 0};
    for (const auto& p : pts) {
        c.x += p.x / pts.size();
        c.y += p.y / pts.size();
    }
    std::sort(pts.begin(), pts.end(), [&](const Pt& a, const Pt& b) {
        return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x);
    });
    return pts;
}

}  // namespace

template <class T>
void write_paving_svg(const std::string& path, const DiscreteMeasure<T>& mu,
                      const DiscreteMeasure<T>& nu, const PavingRun<T>& run,
                      const Numerics<T>& num) {
    if (mu.dim != 2) throw std::invalid_argument("paving plots are drawn for d == 2 only");

    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    auto widen = [&](double x, double y) {
        lo_x = std::min(lo_x, x);
        lo_y = std::min(lo_y, y);
        hi_x = std::max(hi_x, x);
        hi_y = std::max(hi_y, y);
    };
    for (const auto& a : mu.atoms) widen(to_double(a[0]), to_double(a[1]));
    for (const auto& a : nu.atoms) widen(to_double(a[0]), to_double(a[1]));
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    const double margin = 0.1 * span;
    lo_x -= margin;
    lo_y -= margin;
    hi_x += margin;
    hi_y += margin;

    const double W = 640.0;
    const double scale = W / (hi_x - lo_x);
    const double H = (hi_y - lo_y) * scale;
    auto X = [&](double x) { return (x - lo_x) * scale; };
    auto Y = [&](double y) { return H - (y - lo_y) * scale; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (const auto& comp : run.paving.components) {
        auto verts = vertices(comp.hull, num);
        std::vector<Pt> pts;
        for (const auto& v : verts) pts.push_back({X(to_double(v[0])), Y(to_double(v[1]))});
        const std::string col = color(comp.id);
        if (pts.size() == 1) {
            svg << "<circle cx=\"" << pts[0].x << "\" cy=\"" << pts[0].y
                << "\" r=\"3\" fill=\"" << col << "\" fill-opacity=\"0.25\"/>\n";
        } else if (pts.size() == 2) {
            svg << "<line x1=\"" << pts[0].x << "\" y1=\"" << pts[0].y << "\" x2=\"" << pts[1].x
                << "\" y2=\"" << pts[1].y << "\" stroke=\"" << col
                << "\" stroke-opacity=\"0.45\" stroke-width=\"3\"/>\n";
        } else {
            svg << "<polygon points=\"";
            for (const auto& p : outline(pts)) svg << p.x << "," << p.y << " ";
            svg << "\" fill=\"" << col << "\" fill-opacity=\"0.25\" stroke=\"" << col
                << "\" stroke-width=\"1\"/>\n";
        }
        // rings on the attached nu-atoms
        for (const auto& atom : comp.j_atoms) {
            const auto& y = nu.atoms[atom.j];
            svg << "<circle cx=\"" << X(to_double(y[0])) << "\" cy=\"" << Y(to_double(y[1]))
                << "\" r=\"" << (atom.boundary ? 7.5 : 5.5) << "\" fill=\"none\" stroke=\"" << col
                << "\" stroke-width=\"1.2\"/>\n";
        }
    }

    double wmax = 0;
    for (const auto& w : nu.weights) wmax = std::max(wmax, to_double(w));
    for (int j = 0; j < nu.size(); ++j) {
        const auto& y = nu.atoms[j];
        const double r = 1.5 + 3.0 * std::sqrt(to_double(nu.weights[j]) / wmax);
        svg << "<circle cx=\"" << X(to_double(y[0])) << "\" cy=\"" << Y(to_double(y[1]))
            << "\" r=\"" << r << "\" fill=\"#222222\"/>\n";
    }
    for (int i = 0; i < mu.size(); ++i) {
        const double cx = X(to_double(mu.atoms[i][0]));
        const double cy = Y(to_double(mu.atoms[i][1]));
        const double s = 5.0;
        const std::string col = color(run.paving.atom_component[i]);
        svg << "<path d=\"M " << cx - s << " " << cy << " H " << cx + s << " M " << cx << " "
            << cy - s << " V " << cy + s << "\" stroke=\"" << col
            << "\" stroke-width=\"2.2\"/>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write SVG to '" + path + "'");
    out << svg.str();
}

template void write_paving_svg<Rational>(const std::string&, const DiscreteMeasure<Rational>&,
                                         const DiscreteMeasure<Rational>&,
                                         const PavingRun<Rational>&, const Numerics<Rational>&);
template void write_paving_svg<double>(const std::string&, const DiscreteMeasure<double>&,
                                       const DiscreteMeasure<double>&, const PavingRun<double>&,
                                       const Numerics<double>&);

}  // namespace motpaver
