#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wug::report {

std::string csv_field(std::string_view s);
void csv_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest round-trip form; "NA" for nullopt.
std::string fmt(double v);
std::string fmt(std::optional<double> v);

// Writes to a sibling temporary and renames it over `path`, creating parent
// directories as needed.
void write_file(const std::filesystem::path& path, const std::string& content);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> labels;  // optional point labels (scatter only)
};

// Plain SVG plots. They are for eyeballing; the CSVs are the data.
std::string svg_scatter(std::string_view title, std::string_view x_label, std::string_view y_label,
                        const std::vector<Series>& series);
std::string svg_lines(std::string_view title, std::string_view x_label, std::string_view y_label,
                      const std::vector<Series>& series);
std::string svg_bars(std::string_view title, const std::vector<std::string>& labels,
                     const std::vector<double>& values);

}  // namespace wug::report
