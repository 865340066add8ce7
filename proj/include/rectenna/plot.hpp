// plot.hpp - minimal standalone SVG line plots for sweep and S-parameter data
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rectenna::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Figure {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<Series> series;
};

/// Writes an SVG document. The plotted data is repeated in an XML comment
/// so the file stays self-describing. Non-finite points are skipped.
void write_svg(std::ostream& out, const Figure& figure);

}  // namespace rectenna::plot
