#include "svg.hpp"

#include <array>
#include <cstdio>

namespace climact {

namespace {

std::string px(double v) {
  // Two decimals keep files small and byte-stable.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

Svg::Svg(int width, int height) : width_(width), height_(height) {}

void Svg::line(double x1, double y1, double x2, double y2,
               const std::string& color, double width) {
  body_ << "<line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\""
        << px(x2) << "\" y2=\"" << px(y2) << "\" stroke=\"" << color
        << "\" stroke-width=\"" << px(width) << "\"/>\n";
}

void Svg::circle(double cx, double cy, double r, const std::string& color) {
  body_ << "<circle cx=\"" << px(cx) << "\" cy=\"" << px(cy) << "\" r=\""
        << px(r) << "\" fill=\"" << color << "\"/>\n";
}

void Svg::rect(double x, double y, double w, double h,
               const std::string& color, double opacity) {
  body_ << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\""
        << px(w) << "\" height=\"" << px(h) << "\" fill=\"" << color
        << "\" fill-opacity=\"" << px(opacity) << "\"/>\n";
}

void Svg::text(double x, double y, const std::string& s, int size,
               const std::string& anchor, const std::string& color) {
  body_ << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\" font-size=\""
        << size << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
        << "\" fill=\"" << color << "\">" << xml_escape(s) << "</text>\n";
}

std::string Svg::str() const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
      << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << ' '
      << height_ << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width_ << "\" height=\""
      << height_ << "\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

const std::string& series_color(std::size_t index) {
  static const std::array<std::string, 6> palette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
  return palette[index % palette.size()];
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace climact
