#include "odmrsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace odmrsim {

namespace {

constexpr double kWidth = 860, kHeight = 520;
constexpr double kLeft = 72, kRight = 24, kTop = 42, kBottom = 54;

struct Frame {
    double x_min, x_max, y_min, y_max;

    double px(double x) const {
        return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
    }
    double py(double y) const {
        return kHeight - kBottom - (y - y_min) / (y_max - y_min) * (kHeight - kTop - kBottom);
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

void span(const std::vector<double>& v, double& lo, double& hi) {
    lo = *std::min_element(v.begin(), v.end());
    hi = *std::max_element(v.begin(), v.end());
    if (hi - lo < 1e-300) {
        lo -= 1.0;
        hi += 1.0;
    }
}

void open_svg(std::ostringstream& s, const std::string& title) {
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

void axes(std::ostringstream& s, const Frame& f, const std::string& x_label,
          const std::string& y_label) {
    s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = f.x_min + (f.x_max - f.x_min) * k / 5;
        const double yv = f.y_min + (f.y_max - f.y_min) * k / 5;
        s << "<text x=\"" << f.px(xv) << "\" y=\"" << kHeight - kBottom + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(xv)
          << "</text>\n";
        s << "<text x=\"" << kLeft - 6 << "\" y=\"" << f.py(yv) + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(yv)
          << "</text>\n";
    }
    s << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n";
    s << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << (kTop + kHeight - kBottom) / 2 << ")\">" << y_label
      << "</text>\n";
}

void polyline(std::ostringstream& s, const Frame& f, const std::vector<double>& x,
              const std::vector<double>& y, const std::string& style) {
    s << "<polyline fill=\"none\" " << style << " points=\"";
    for (size_t i = 0; i < x.size(); ++i) s << f.px(x[i]) << "," << f.py(y[i]) << " ";
    s << "\"/>\n";
}

}  // namespace

std::string svg_line_plot(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& x_label, const std::string& y_label,
                          const std::string& title) {
    Frame f{};
    span(x, f.x_min, f.x_max);
    span(y, f.y_min, f.y_max);
    std::ostringstream s;
    open_svg(s, title);
    axes(s, f, x_label, y_label);
    polyline(s, f, x, y, "stroke=\"#1f77b4\" stroke-width=\"1.5\"");
    s << "</svg>\n";
    return s.str();
}

std::string svg_heatmap(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<std::vector<double>>& grid,
                        const std::string& x_label, const std::string& y_label,
                        const std::string& title) {
    Frame f{};
    span(x, f.x_min, f.x_max);
    span(y, f.y_min, f.y_max);
    double v_lo = grid[0][0], v_hi = grid[0][0];
    for (const auto& col : grid)
        for (double v : col) {
            v_lo = std::min(v_lo, v);
            v_hi = std::max(v_hi, v);
        }
    if (v_hi - v_lo < 1e-300) v_hi = v_lo + 1.0;

    std::ostringstream s;
    open_svg(s, title);
    const double cw = (kWidth - kLeft - kRight) / x.size();
    const double ch = (kHeight - kTop - kBottom) / y.size();
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < y.size(); ++j) {
            // deep dips dark blue, baseline white
            const double t = (grid[i][j] - v_lo) / (v_hi - v_lo);
            const int r = static_cast<int>(255 * t);
            const int g = static_cast<int>(255 * (0.35 + 0.65 * t));
            s << "<rect x=\"" << kLeft + i * cw << "\" y=\""
              << kHeight - kBottom - (j + 1) * ch << "\" width=\"" << cw + 0.5
              << "\" height=\"" << ch + 0.5 << "\" fill=\"rgb(" << r << "," << g
              << ",255)\"/>\n";
        }
    axes(s, f, x_label, y_label);
    s << "</svg>\n";
    return s.str();
}

std::string svg_stem_plot(const std::vector<double>& x, const std::vector<double>& height,
                          const std::vector<int>& series, const std::string& x_label,
                          const std::string& y_label, const std::string& title) {
    Frame f{};
    span(x, f.x_min, f.x_max);
    f.x_min -= 0.05 * (f.x_max - f.x_min);
    f.x_max += 0.05 * (f.x_max - f.x_min);
    f.y_min = 0.0;
    f.y_max = *std::max_element(height.begin(), height.end()) * 1.1;

    std::ostringstream s;
    open_svg(s, title);
    axes(s, f, x_label, y_label);
    for (size_t i = 0; i < x.size(); ++i) {
        const char* color = series[i] == 0 ? "#1f77b4" : "#d62728";
        s << "<line x1=\"" << f.px(x[i]) << "\" y1=\"" << f.py(0.0) << "\" x2=\""
          << f.px(x[i]) << "\" y2=\"" << f.py(height[i]) << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
        s << "<circle cx=\"" << f.px(x[i]) << "\" cy=\"" << f.py(height[i])
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string svg_fit_overlay(const std::vector<double>& x, const std::vector<double>& data,
                            const std::vector<double>& model,
                            const std::vector<double>& comp_minus,
                            const std::vector<double>& comp_plus, const std::string& title) {
    Frame f{};
    span(x, f.x_min, f.x_max);
    double lo = data[0], hi = data[0];
    for (const auto* v : {&data, &model, &comp_minus, &comp_plus})
        for (double e : *v) {
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
    f.y_min = lo - 0.05 * (hi - lo + 1e-300);
    f.y_max = hi + 0.05 * (hi - lo + 1e-300);

    std::ostringstream s;
    open_svg(s, title);
    axes(s, f, "frequency (MHz)", "contrast");
    for (size_t i = 0; i < x.size(); ++i)
        s << "<circle cx=\"" << f.px(x[i]) << "\" cy=\"" << f.py(data[i])
          << "\" r=\"2\" fill=\"#555555\"/>\n";
    polyline(s, f, x, comp_minus,
             "stroke=\"#2ca02c\" stroke-width=\"1.2\" stroke-dasharray=\"5,3\"");
    polyline(s, f, x, comp_plus,
             "stroke=\"#d62728\" stroke-width=\"1.2\" stroke-dasharray=\"5,3\"");
    polyline(s, f, x, model, "stroke=\"#1f77b4\" stroke-width=\"1.8\"");
    s << "</svg>\n";
    return s.str();
}

}  // namespace odmrsim
