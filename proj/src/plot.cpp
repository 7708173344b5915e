#include "genfric/plot.hpp"

#include "genfric/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace genfric {

namespace {

constexpr double kWidth = 960.0;
constexpr double kRowHeight = 320.0;
constexpr double kMargin = 48.0;
constexpr std::size_t kMaxPoints = 4000;

std::string fmt(const char* spec, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

struct Range {
    double lo;
    double hi;
};

Range range_of(const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    Range r{*lo, *hi};
    if (r.hi - r.lo < 1e-12 * std::max(1.0, std::abs(r.hi))) {
        const double pad = std::max(1e-12, 0.5 * std::abs(r.hi));
        r.lo -= pad;
        r.hi += pad;
    }
    return r;
}

struct Panel {
    double x, y, w, h;
};

class Canvas {
  public:
    explicit Canvas(double height) {
        svg_ = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) + "\" height=\"" +
               fmt("%.0f", height) + "\" viewBox=\"0 0 " + fmt("%.0f", kWidth) + " " + fmt("%.0f", height) +
               "\" font-family=\"monospace\" font-size=\"11\">\n";
        svg_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    void series(const Panel& p, const std::string& title, const std::string& xlabel, const std::string& ylabel,
                const std::vector<double>& xs, const std::vector<double>& ys, const char* colour) {
        const Range rx = range_of(xs);
        const Range ry = range_of(ys);
        svg_ += "<g>\n";
        svg_ += "<rect x=\"" + fmt("%.2f", p.x) + "\" y=\"" + fmt("%.2f", p.y) + "\" width=\"" + fmt("%.2f", p.w) +
                "\" height=\"" + fmt("%.2f", p.h) + "\" fill=\"none\" stroke=\"#444\"/>\n";
        text(p.x + p.w / 2, p.y - 8, title, "middle");
        text(p.x + p.w / 2, p.y + p.h + 28, xlabel, "middle");
        text(p.x - 6, p.y + p.h / 2 - 14, ylabel, "end");
        text(p.x, p.y + p.h + 14, fmt("%.4g", rx.lo), "start");
        text(p.x + p.w, p.y + p.h + 14, fmt("%.4g", rx.hi), "end");
        text(p.x - 4, p.y + p.h, fmt("%.4g", ry.lo), "end");
        text(p.x - 4, p.y + 10, fmt("%.4g", ry.hi), "end");

        auto px = [&](double v) { return p.x + (v - rx.lo) / (rx.hi - rx.lo) * p.w; };
        auto py = [&](double v) { return p.y + p.h - (v - ry.lo) / (ry.hi - ry.lo) * p.h; };

        if (xs.size() == 1) {
            svg_ += "<circle cx=\"" + fmt("%.2f", px(xs[0])) + "\" cy=\"" + fmt("%.2f", py(ys[0])) +
                    "\" r=\"3\" fill=\"" + colour + "\"/>\n";
        } else {
            const std::size_t stride = (xs.size() + kMaxPoints - 1) / kMaxPoints;
            svg_ += "<polyline fill=\"none\" stroke=\"";
            svg_ += colour;
            svg_ += "\" stroke-width=\"1\" points=\"";
            for (std::size_t k = 0; k < xs.size(); k += stride) {
                svg_ += fmt("%.2f", px(xs[k])) + "," + fmt("%.2f", py(ys[k])) + " ";
            }
            if ((xs.size() - 1) % stride != 0) {
                svg_ += fmt("%.2f", px(xs.back())) + "," + fmt("%.2f", py(ys.back()));
            }
            svg_ += "\"/>\n";
        }
        svg_ += "</g>\n";
    }

    std::string finish() && { return std::move(svg_) + "</svg>\n"; }

  private:
    void text(double x, double y, const std::string& s, const char* anchor) {
        svg_ += "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y) + "\" text-anchor=\"" + anchor + "\">" +
                s + "</text>\n";
    }

    std::string svg_;
};

std::vector<Panel> row(std::size_t count, double top) {
    std::vector<Panel> panels;
    const double cell = kWidth / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        panels.push_back({cell * static_cast<double>(i) + kMargin + 24, top + kMargin - 16,
                          cell - 2 * kMargin - 8, kRowHeight - 2 * kMargin});
    }
    return panels;
}

}  // namespace

std::string render_plot(const TrajectoryTable& table) {
    if (table.rows() == 0) {
        throw ValidationError("cannot plot an empty trajectory");
    }
    const std::size_t n = table.oscillators;
    const std::size_t per_row = std::min<std::size_t>(n, 4);
    const std::size_t phase_rows = (n + per_row - 1) / per_row;
    Canvas canvas(kRowHeight * static_cast<double>(phase_rows + 1));

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = i / per_row;
        const auto panels = row(per_row, kRowHeight * static_cast<double>(r));
        const std::string idx = std::to_string(i + 1);
        canvas.series(panels[i % per_row], "oscillator " + idx, "x" + idx, "y" + idx, table.x[i], table.y[i],
                      "#1f5fa8");
    }
    const auto bottom = row(2, kRowHeight * static_cast<double>(phase_rows));
    canvas.series(bottom[0], "rho(t)", "t", "rho", table.t, table.rho, "#b8420f");
    canvas.series(bottom[1], "E(t)", "t", "E", table.t, table.energy, "#2b7a2b");
    return std::move(canvas).finish();
}

}  // namespace genfric
