#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace risklab::cli {

namespace {

constexpr double kWidth = 860.0, kHeight = 520.0;
constexpr double kLeft = 70.0, kRight = 830.0, kTop = 50.0, kBottom = 470.0;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<Series>& series) {
    std::size_t n = 0;
    double y_min = 0.0, y_max = 1e-9;
    for (const Series& s : series) {
        n = std::max(n, s.mean.size());
        for (double v : s.mean) y_max = std::max(y_max, v);
        for (double v : s.upper) y_max = std::max(y_max, v);
        for (double v : s.mean) y_min = std::min(y_min, v);
        for (double v : s.lower) y_min = std::min(y_min, v);
    }
    if (n < 2) n = 2;
    double x_span = static_cast<double>(n - 1);
    double y_span = y_max - y_min;
    if (y_span <= 0.0) y_span = 1.0;

    auto px = [&](std::size_t i) { return kLeft + (kRight - kLeft) * static_cast<double>(i) / x_span; };
    auto py = [&](double v) { return kBottom - (kBottom - kTop) * (v - y_min) / y_span; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">"
        << title << "</text>\n";

    // axes and ticks
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kBottom) << "\" x2=\"" << num(kRight) << "\" y2=\""
        << num(kBottom) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
        << num(kBottom) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double fx = static_cast<double>(i) / 5.0;
        double vx = fx * x_span;
        out << "<line x1=\"" << num(kLeft + (kRight - kLeft) * fx) << "\" y1=\"" << num(kBottom) << "\" x2=\""
            << num(kLeft + (kRight - kLeft) * fx) << "\" y2=\"" << num(kBottom + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(kLeft + (kRight - kLeft) * fx) << "\" y=\"" << num(kBottom + 20)
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << tick(vx) << "</text>\n";
        double vy = y_min + fx * y_span;
        out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(vy)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
            << num(py(vy)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(kLeft - 9) << "\" y=\"" << num(py(vy) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << tick(vy) << "</text>\n";
    }
    out << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"" << num(kHeight - 10)
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << num((kTop + kBottom) / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 18 "
        << num((kTop + kBottom) / 2) << ")\">" << y_label << "</text>\n";

    for (const Series& s : series) {
        if (!s.lower.empty() && s.lower.size() == s.upper.size()) {
            out << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
            for (std::size_t i = 0; i < s.lower.size(); ++i)
                out << num(px(i)) << "," << num(py(s.upper[i])) << " ";
            for (std::size_t i = s.lower.size(); i-- > 0;) out << num(px(i)) << "," << num(py(s.lower[i])) << " ";
            out << "\"/>\n";
        }
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t i = 0; i < s.mean.size(); ++i) out << num(px(i)) << "," << num(py(s.mean[i])) << " ";
        out << "\"/>\n";
    }

    // legend
    double ly = kTop + 8.0;
    for (const Series& s : series) {
        out << "<line x1=\"" << num(kLeft + 14) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kLeft + 44)
            << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(kLeft + 50) << "\" y=\"" << num(ly + 4)
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
        ly += 18.0;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace risklab::cli
