#include "export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "lgcrit/errors.hpp"

namespace lgcrit::io {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string short_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

struct Plane {
    double x = 0.0;
    double y = 0.0;
};

Plane to_plane(cplx z) { return {std::log(std::abs(z)), std::arg(z) / (2 * std::numbers::pi)}; }

class SvgCanvas {
public:
    SvgCanvas(double xmin, double xmax, double ymin, double ymax) {
        double padX = std::max(0.05 * (xmax - xmin), 0.5);
        double padY = std::max(0.05 * (ymax - ymin), 0.05);
        x0_ = xmin - padX;
        x1_ = xmax + padX;
        y0_ = ymin - padY;
        y1_ = ymax + padY;
    }
    double sx(double x) const { return 40 + (x - x0_) / (x1_ - x0_) * (kW - 60); }
    double sy(double y) const { return kH - 30 - (y - y0_) / (y1_ - y0_) * (kH - 50); }

    std::string header(const std::string& title) const {
        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
        os << "<title>" << title << "</title>\n";
        os << "<line x1=\"40\" y1=\"" << kH - 30 << "\" x2=\"" << kW - 20 << "\" y2=\"" << kH - 30
           << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"40\" y1=\"20\" x2=\"40\" y2=\"" << kH - 30 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 8 << "\" font-size=\"12\">log|z| [" << short_num(x0_) << ", "
           << short_num(x1_) << "]</text>\n";
        os << "<text x=\"4\" y=\"14\" font-size=\"12\">arg/2pi [" << short_num(y0_) << ", " << short_num(y1_)
           << "]</text>\n";
        return os.str();
    }

    static constexpr int kW = 640;
    static constexpr int kH = 480;

private:
    double x0_, x1_, y0_, y1_;
};

template <class Pts>
SvgCanvas fit(const Pts& pts) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& p : pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    if (!std::isfinite(xmin)) xmin = xmax = ymin = ymax = 0.0;
    return {xmin, xmax, ymin, ymax};
}

}  // namespace

std::string quiver_dot(const ToricModel& model, const ReferenceCollection& ref, const Quiver& q) {
    std::ostringstream os;
    os << "digraph quiver {\n";
    std::vector<std::string> names;
    for (std::size_t i = 0; i < q.vertices.size(); ++i) {
        const auto* e = ref.find(q.vertices[i]);
        names.push_back(e ? e->label : "v" + std::to_string(i));
        os << "  \"" << names.back() << "\";\n";
    }
    for (const auto& e : q.edges)
        os << "  \"" << names[e.from] << "\" -> \"" << names[e.to] << "\" [label=\"" << model.format_divisor(e.label)
           << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string trajectories_csv(const std::vector<Trajectory>& trajs) {
    std::ostringstream os;
    os << "label,t,coord_index,re,im\n";
    for (const auto& tr : trajs)
        for (std::size_t s = 0; s < tr.ts.size(); ++s)
            for (std::size_t i = 0; i < tr.samples[s].size(); ++i)
                os << tr.label << ',' << num(tr.ts[s]) << ',' << i << ',' << num(tr.samples[s][i].real()) << ','
                   << num(tr.samples[s][i].imag()) << '\n';
    return os.str();
}

std::string trajectories_svg(const std::vector<Trajectory>& trajs, int coord) {
    std::vector<Plane> all;
    for (const auto& tr : trajs)
        for (const auto& s : tr.samples) {
            if (coord < 0 || coord >= int(s.size())) throw Error(ErrorCode::LengthMismatch, "coordinate out of range");
            all.push_back(to_plane(s[coord]));
        }
    auto canvas = fit(all);
    std::ostringstream os;
    os << canvas.header("coordinate " + std::to_string(coord));
    for (const auto& tr : trajs) {
        os << "<polyline fill=\"none\" stroke=\"gray\" points=\"";
        for (const auto& s : tr.samples) {
            auto p = to_plane(s[coord]);
            os << short_num(canvas.sx(p.x)) << ',' << short_num(canvas.sy(p.y)) << ' ';
        }
        os << "\"/>\n";
        auto end = to_plane(tr.samples.back()[coord]);
        os << "<circle cx=\"" << short_num(canvas.sx(end.x)) << "\" cy=\"" << short_num(canvas.sy(end.y))
           << "\" r=\"3\"/>\n";
        os << "<text x=\"" << short_num(canvas.sx(end.x) + 4) << "\" y=\"" << short_num(canvas.sy(end.y) - 4)
           << "\" font-size=\"10\">" << tr.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string solutions_svg(const SolutionSet& set, int coord) {
    std::vector<Plane> all;
    for (const auto& p : set.points) {
        if (coord < 0 || coord >= int(p.coords.size())) throw Error(ErrorCode::LengthMismatch, "coordinate out of range");
        all.push_back(to_plane(p.coords[coord]));
    }
    auto canvas = fit(all);
    std::ostringstream os;
    os << canvas.header("coordinate " + std::to_string(coord) + " at t = " + num(set.t));
    for (std::size_t i = 0; i < all.size(); ++i) {
        os << "<circle cx=\"" << short_num(canvas.sx(all[i].x)) << "\" cy=\"" << short_num(canvas.sy(all[i].y))
           << "\" r=\"3\"/>\n";
        os << "<text x=\"" << short_num(canvas.sx(all[i].x) + 4) << "\" y=\"" << short_num(canvas.sy(all[i].y) - 4)
           << "\" font-size=\"10\">" << set.points[i].label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
    f << text;
    if (!f) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace lgcrit::io
