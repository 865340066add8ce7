#include "rectenna/plot.hpp"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

namespace rectenna::plot {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;
constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!std::isfinite(lo)) lo = 0, hi = 1;
        if (hi == lo) lo -= 0.5, hi += 0.5;
    }
};

}  // namespace

void write_svg(std::ostream& out, const Figure& fig) {
    const auto tx = [&](double x) { return fig.log_x ? std::log10(x) : x; };
    const auto usable = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!fig.log_x || x > 0); };

    Range xr, yr;
    for (const auto& s : fig.series) {
        if (s.x.size() != s.y.size()) throw ArgumentError("plot series '" + s.label + "' has mismatched lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (usable(s.x[i], s.y[i])) xr.add(tx(s.x[i])), yr.add(s.y[i]);
    }
    xr.pad();
    yr.pad();
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (tx(x) - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto py = [&](double y) { return kTop + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n<!-- data\n";
    for (const auto& s : fig.series) {
        out << "series " << s.label << '\n';
        for (std::size_t i = 0; i < s.x.size(); ++i) out << format_number(s.x[i]) << ',' << format_number(s.y[i]) << '\n';
    }
    out << "-->\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(fig.title)
        << "</text>\n";
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
        << escape(fig.x_label) << "</text>\n";
    out << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(fig.y_label) << "</text>\n";

    for (int i = 0; i <= 4; ++i) {
        const double t = i / 4.0;
        const double xv = xr.lo + t * (xr.hi - xr.lo), yv = yr.lo + t * (yr.hi - yr.lo);
        const double gx = kLeft + t * pw, gy = kTop + (1.0 - t) * ph;
        out << "<line x1=\"" << gx << "\" y1=\"" << kTop << "\" x2=\"" << gx << "\" y2=\"" << kTop + ph
            << "\" stroke=\"#ddd\"/>\n";
        out << "<line x1=\"" << kLeft << "\" y1=\"" << gy << "\" x2=\"" << kLeft + pw << "\" y2=\"" << gy
            << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << gx << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
            << format_number(fig.log_x ? std::pow(10.0, xv) : xv) << "</text>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">" << format_number(yv)
            << "</text>\n";
    }

    for (std::size_t k = 0; k < fig.series.size(); ++k) {
        const auto& s = fig.series[k];
        const char* color = kColors[k % kColors.size()];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (usable(s.x[i], s.y[i])) out << format_number(px(s.x[i])) << ',' << format_number(py(s.y[i])) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << kLeft + pw - 8 << "\" y=\"" << kTop + 16 + 14 * k << "\" text-anchor=\"end\" fill=\""
            << color << "\">" << escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace rectenna::plot
