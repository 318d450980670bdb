#include "wug/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "wug/errors.hpp"

namespace wug::report {

namespace {

constexpr double kWidth = 640, kHeight = 420, kMargin = 60;
const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  explicit Frame(const std::vector<Series>& series) {
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
    for (const auto& s : series) {
      for (double v : s.x) lo_x = std::min(lo_x, v), hi_x = std::max(hi_x, v);
      for (double v : s.y) lo_y = std::min(lo_y, v), hi_y = std::max(hi_y, v);
    }
    if (std::isfinite(lo_x)) x0 = lo_x, x1 = hi_x;
    if (std::isfinite(lo_y)) y0 = lo_y, y1 = hi_y;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  }
  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

void header(std::ostringstream& os, std::string_view title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << xml(title)
     << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f, std::string_view xl, std::string_view yl) {
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin
     << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
     << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 15 << "\">" << fmt(f.x0) << "</text>\n"
     << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 15
     << "\" text-anchor=\"end\">" << fmt(f.x1) << "</text>\n"
     << "<text x=\"" << kMargin - 5 << "\" y=\"" << kHeight - kMargin << "\" text-anchor=\"end\">"
     << fmt(f.y0) << "</text>\n"
     << "<text x=\"" << kMargin - 5 << "\" y=\"" << kMargin + 4 << "\" text-anchor=\"end\">" << fmt(f.y1)
     << "</text>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << xml(xl)
     << "</text>\n"
     << "<text x=\"15\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 15 " << kHeight / 2
     << ")\" text-anchor=\"middle\">" << xml(yl) << "</text>\n";
}

void legend(std::ostringstream& os, const std::vector<Series>& series) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = kMargin + 14.0 * static_cast<double>(i);
    os << "<rect x=\"" << kWidth - kMargin - 110 << "\" y=\"" << y - 8 << "\" width=\"8\" height=\"8\" fill=\""
       << kColours[i % 6] << "\"/><text x=\"" << kWidth - kMargin - 98 << "\" y=\"" << y << "\">"
       << xml(series[i].name) << "</text>\n";
  }
}

}  // namespace

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
  out << '\n';
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("NA");
}

std::string fmt(std::optional<double> v) { return v ? fmt(*v) : std::string("NA"); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string svg_scatter(std::string_view title, std::string_view x_label, std::string_view y_label,
                        const std::vector<Series>& series) {
  std::ostringstream os;
  const Frame f(series);
  header(os, title);
  axes(os, f, x_label, y_label);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      os << "<circle cx=\"" << f.px(ser.x[i]) << "\" cy=\"" << f.py(ser.y[i]) << "\" r=\"3\" fill=\""
         << kColours[s % 6] << "\" fill-opacity=\"0.7\"/>\n";
      if (i < ser.labels.size()) {
        os << "<text x=\"" << f.px(ser.x[i]) + 4 << "\" y=\"" << f.py(ser.y[i]) - 4
           << "\" font-size=\"8\">" << xml(ser.labels[i]) << "</text>\n";
      }
    }
  }
  legend(os, series);
  os << "</svg>\n";
  return os.str();
}

std::string svg_lines(std::string_view title, std::string_view x_label, std::string_view y_label,
                      const std::vector<Series>& series) {
  std::ostringstream os;
  const Frame f(series);
  header(os, title);
  axes(os, f, x_label, y_label);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    os << "<polyline fill=\"none\" stroke=\"" << kColours[s % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      os << f.px(ser.x[i]) << ',' << f.py(ser.y[i]) << ' ';
    }
    os << "\"/>\n";
  }
  legend(os, series);
  os << "</svg>\n";
  return os.str();
}

std::string svg_bars(std::string_view title, const std::vector<std::string>& labels,
                     const std::vector<double>& values) {
  if (labels.size() != values.size()) throw DimensionError("svg_bars: labels/values length mismatch");
  std::ostringstream os;
  header(os, title);
  double hi = 0.0;
  for (double v : values) hi = std::max(hi, v);
  if (hi <= 0.0) hi = 1.0;
  const double slot = values.empty() ? 0.0 : (kWidth - 2 * kMargin) / static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double h = std::max(0.0, values[i]) / hi * (kHeight - 2 * kMargin);
    const double x = kMargin + slot * static_cast<double>(i);
    os << "<rect x=\"" << x + slot * 0.1 << "\" y=\"" << kHeight - kMargin - h << "\" width=\"" << slot * 0.8
       << "\" height=\"" << h << "\" fill=\"" << kColours[0] << "\"/>\n"
       << "<text x=\"" << x + slot / 2 << "\" y=\"" << kHeight - kMargin + 14
       << "\" text-anchor=\"middle\">" << xml(labels[i]) << "</text>\n"
       << "<text x=\"" << x + slot / 2 << "\" y=\"" << kHeight - kMargin - h - 3
       << "\" text-anchor=\"middle\">" << fmt(values[i]) << "</text>\n";
  }
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin
     << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n</svg>\n";
  return os.str();
}

}  // namespace wug::report
