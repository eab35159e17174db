#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "falpha/errors.hpp"

namespace falpha::cli {

// Minimal line-plot SVG emission: axes, tick labels, one polyline per series.
// Direct markup, deterministic output, no metadata.
class SvgPlot {
public:
    struct Series {
        std::vector<double> x;
        std::vector<double> y;
        std::string color;
        std::string label;
    };

    SvgPlot(std::string x_label, std::string y_label)
        : x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(Series s) { series_.push_back(std::move(s)); }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ArgumentError("cannot open output file: " + path);

        double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
        bool first = true;
        for (const auto& s : series_) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (first) {
                    x_min = x_max = s.x[i];
                    y_min = y_max = s.y[i];
                    first = false;
                }
                x_min = std::min(x_min, s.x[i]);
                x_max = std::max(x_max, s.x[i]);
                y_min = std::min(y_min, s.y[i]);
                y_max = std::max(y_max, s.y[i]);
            }
        }
        if (x_max <= x_min) x_max = x_min + 1.0;
        if (y_max <= y_min) y_max = y_min + 1.0;

        const double w = 720, h = 440, ml = 64, mr = 16, mt = 16, mb = 44;
        auto px = [&](double x) {
            return ml + (x - x_min) / (x_max - x_min) * (w - ml - mr);
        };
        auto py = [&](double y) {
            return h - mb - (y - y_min) / (y_max - y_min) * (h - mt - mb);
        };

        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
            << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
        out << "  <rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
        // Axes.
        out << "  <line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
            << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
        out << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
            << h - mb << "\" stroke=\"black\"/>\n";
        // Ticks.
        for (int k = 0; k <= 4; ++k) {
            double xv = x_min + k * (x_max - x_min) / 4.0;
            double yv = y_min + k * (y_max - y_min) / 4.0;
            out << "  <text x=\"" << px(xv) << "\" y=\"" << h - mb + 18
                << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
            out << "  <text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
                << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
        }
        out << "  <text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 8
            << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label_ << "</text>\n";
        out << "  <text x=\"14\" y=\"" << (mt + h - mb) / 2
            << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
            << (mt + h - mb) / 2 << ")\">" << y_label_ << "</text>\n";
        // Series.
        double legend_y = mt + 14;
        for (const auto& s : series_) {
            out << "  <polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) out << ' ';
                out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
            }
            out << "\"/>\n";
            if (!s.label.empty()) {
                out << "  <text x=\"" << w - mr - 6 << "\" y=\"" << legend_y
                    << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << s.color
                    << "\">" << s.label << "</text>\n";
                legend_y += 14;
            }
        }
        out << "</svg>\n";
    }

    static const char* palette(std::size_t i) {
        // First constants set red, second blue, then fallbacks.
        static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                       "#9467bd", "#8c564b"};
        return colors[i % 6];
    }

private:
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return buf;
    }

    std::string x_label_;
    std::string y_label_;
    std::vector<Series> series_;
};

}  // namespace falpha::cli
