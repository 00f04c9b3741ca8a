#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sdg::report::svg {

struct Style {
  std::string stroke = "none";
  std::string fill = "none";
  double stroke_width = 1.0;
  double opacity = 1.0;
  std::string dash;  // stroke-dasharray
};

using Point = std::pair<double, double>;

/// Minimal SVG writer. Coordinates are written with 2 decimals so output is
/// byte-stable.
class Document {
 public:
  Document(double width, double height);

  void rect(double x, double y, double w, double h, const Style& style);
  void line(double x1, double y1, double x2, double y2, const Style& style);
  void polyline(std::span<const Point> points, const Style& style, const std::string& id = {});
  void circle(double cx, double cy, double r, const Style& style, const std::string& extra = {});
  void text(double x, double y, const std::string& content, double size = 12.0, const std::string& anchor = "start",
            const std::string& fill = "#000000", double rotate = 0.0);
  void begin_group(const std::string& attributes);
  void end_group();
  void comment(const std::string& content);

  std::string str() const;

  double width() const { return width_; }
  double height() const { return height_; }

 private:
  double width_;
  double height_;
  std::string body_;
};

/// Affine map from a data interval onto a pixel interval.
struct LinearScale {
  double domain_lo = 0.0;
  double domain_hi = 1.0;
  double range_lo = 0.0;
  double range_hi = 1.0;

  double operator()(double v) const;
  double invert(double px) const;
};

/// Expands [lo, hi] by a relative margin; degenerate ranges become unit width.
std::pair<double, double> padded_range(double lo, double hi, double margin = 0.05);

std::vector<double> nice_ticks(double lo, double hi, int target = 6);

std::string format_number(double v);
/// Axis label: whole numbers without decimals, otherwise up to 2 decimals.
std::string format_tick(double v);
std::string escape(const std::string& text);

/// "#rrggbb" linear blend, t in [0, 1].
std::string blend(const std::string& from, const std::string& to, double t);

/// Blue (-1) through white (0) to red (+1).
std::string diverging(double value);

/// Plot frame with ticks and labels inside `doc`.
struct Frame {
  double left, top, width, height;
  LinearScale x, y;
};

Frame draw_axes(Document& doc, double left, double top, double width, double height, std::pair<double, double> xr,
                std::pair<double, double> yr, const std::string& xlabel, const std::string& ylabel,
                const std::string& title);

}  // namespace sdg::report::svg
