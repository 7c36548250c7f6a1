#pragma once

#include <sstream>
#include <string>

namespace climact {

/// Minimal SVG assembly for the report figures. Coordinates are plain
/// pixels; callers do their own data-to-pixel mapping.
class Svg {
 public:
  Svg(int width, int height);

  void line(double x1, double y1, double x2, double y2,
            const std::string& color, double width = 1.0);
  void circle(double cx, double cy, double r, const std::string& color);
  void rect(double x, double y, double w, double h, const std::string& color,
            double opacity = 1.0);
  void text(double x, double y, const std::string& s, int size = 11,
            const std::string& anchor = "start",
            const std::string& color = "#333333");

  std::string str() const;

 private:
  int width_;
  int height_;
  std::ostringstream body_;
};

/// Fixed series palette (wraps around).
const std::string& series_color(std::size_t index);

/// Escapes &, < and > for text nodes.
std::string xml_escape(const std::string& s);

}  // namespace climact
