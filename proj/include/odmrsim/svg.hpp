#pragma once

#include <string>
#include <vector>

namespace odmrsim {

/// Minimal self-contained SVG emitters for the CLI's --plot output.

std::string svg_line_plot(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& x_label, const std::string& y_label,
                          const std::string& title);

/// grid[i][j] is the value at (x[i], y[j]); rendered as column x, row y.
std::string svg_heatmap(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<std::vector<double>>& grid,
                        const std::string& x_label, const std::string& y_label,
                        const std::string& title);

std::string svg_stem_plot(const std::vector<double>& x, const std::vector<double>& height,
                          const std::vector<int>& series, const std::string& x_label,
                          const std::string& y_label, const std::string& title);

/// Data points plus fitted model and its two dip components.
std::string svg_fit_overlay(const std::vector<double>& x, const std::vector<double>& data,
                            const std::vector<double>& model,
                            const std::vector<double>& comp_minus,
                            const std::vector<double>& comp_plus, const std::string& title);

}  // namespace odmrsim
