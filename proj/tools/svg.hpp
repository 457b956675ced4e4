#pragma once

#include <string>
#include <vector>

namespace risklab::cli {

struct Series {
    std::string label;
    std::string color;
    std::vector<double> mean;   // one value per episode
    std::vector<double> lower;  // mean - stdev band; may be empty
    std::vector<double> upper;
};

/// Minimal deterministic SVG line chart: fixed canvas, fixed number
/// formatting, series drawn in the order given. No plotting dependency; the
/// CSVs are the artifact of record and the plot is a convenience.
std::string render_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<Series>& series);

}  // namespace risklab::cli
