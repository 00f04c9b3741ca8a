#include "sdg/report/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace sdg::report::svg {

std::string format_number(double v) {
  if (std::abs(v) < 0.005) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_tick(double v) {
  if (std::abs(v - std::round(v)) < 1e-9) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", std::round(v) == 0.0 ? 0.0 : std::round(v));
    return buf;
  }
  std::string s = format_number(v);
  while (s.back() == '0') s.pop_back();
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

std::string style_attrs(const Style& s) {
  std::string out = " stroke=\"" + s.stroke + "\" fill=\"" + s.fill + "\" stroke-width=\"" + format_number(s.stroke_width) + "\"";
  if (s.opacity < 1.0) out += " opacity=\"" + format_number(s.opacity) + "\"";
  if (!s.dash.empty()) out += " stroke-dasharray=\"" + s.dash + "\"";
  return out;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return 0;
}

std::array<int, 3> parse_color(const std::string& hex) {
  std::array<int, 3> rgb{0, 0, 0};
  if (hex.size() != 7 || hex[0] != '#') return rgb;
  for (int i = 0; i < 3; ++i) rgb[i] = hex_digit(hex[1 + 2 * i]) * 16 + hex_digit(hex[2 + 2 * i]);
  return rgb;
}

}  // namespace

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::rect(double x, double y, double w, double h, const Style& style) {
  body_ += "<rect x=\"" + format_number(x) + "\" y=\"" + format_number(y) + "\" width=\"" + format_number(w) +
           "\" height=\"" + format_number(h) + "\"" + style_attrs(style) + "/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, const Style& style) {
  body_ += "<line x1=\"" + format_number(x1) + "\" y1=\"" + format_number(y1) + "\" x2=\"" + format_number(x2) +
           "\" y2=\"" + format_number(y2) + "\"" + style_attrs(style) + "/>\n";
}

void Document::polyline(std::span<const Point> points, const Style& style, const std::string& id) {
  if (points.empty()) return;
  body_ += "<polyline";
  if (!id.empty()) body_ += " id=\"" + escape(id) + "\"";
  body_ += " points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ += ' ';
    body_ += format_number(points[i].first) + ',' + format_number(points[i].second);
  }
  body_ += "\"" + style_attrs(style) + "/>\n";
}

void Document::circle(double cx, double cy, double r, const Style& style, const std::string& extra) {
  body_ += "<circle cx=\"" + format_number(cx) + "\" cy=\"" + format_number(cy) + "\" r=\"" + format_number(r) + "\"" +
           style_attrs(style) + (extra.empty() ? "" : " " + extra) + "/>\n";
}

void Document::text(double x, double y, const std::string& content, double size, const std::string& anchor,
                    const std::string& fill, double rotate) {
  body_ += "<text x=\"" + format_number(x) + "\" y=\"" + format_number(y) + "\" font-size=\"" + format_number(size) +
           "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\" fill=\"" + fill + "\"";
  if (rotate != 0.0)
    body_ += " transform=\"rotate(" + format_number(rotate) + " " + format_number(x) + " " + format_number(y) + ")\"";
  body_ += ">" + escape(content) + "</text>\n";
}

void Document::begin_group(const std::string& attributes) { body_ += "<g " + attributes + ">\n"; }

void Document::end_group() { body_ += "</g>\n"; }

void Document::comment(const std::string& content) { body_ += "<!-- " + content + " -->\n"; }

std::string Document::str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         format_number(width_) + "\" height=\"" + format_number(height_) + "\" viewBox=\"0 0 " + format_number(width_) +
         " " + format_number(height_) + "\">\n<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n" +
         body_ + "</svg>\n";
}

double LinearScale::operator()(double v) const {
  if (domain_hi == domain_lo) return 0.5 * (range_lo + range_hi);
  return range_lo + (v - domain_lo) / (domain_hi - domain_lo) * (range_hi - range_lo);
}

double LinearScale::invert(double px) const {
  if (range_hi == range_lo) return domain_lo;
  return domain_lo + (px - range_lo) / (range_hi - range_lo) * (domain_hi - domain_lo);
}

std::pair<double, double> padded_range(double lo, double hi, double margin) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) return {0.0, 1.0};
  if (hi == lo) return {lo - 0.5, hi + 0.5};
  const double pad = (hi - lo) * margin;
  return {lo - pad, hi + pad};
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  std::vector<double> ticks;
  if (!(hi > lo) || target < 2) return ticks;
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return ticks;
}

std::string blend(const std::string& from, const std::string& to, double t) {
  t = std::clamp(t, 0.0, 1.0);
  const auto a = parse_color(from);
  const auto b = parse_color(to);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(a[0] + (b[0] - a[0]) * t)),
                static_cast<int>(std::lround(a[1] + (b[1] - a[1]) * t)),
                static_cast<int>(std::lround(a[2] + (b[2] - a[2]) * t)));
  return buf;
}

std::string diverging(double value) {
  value = std::clamp(value, -1.0, 1.0);
  return value >= 0.0 ? blend("#ffffff", "#b2182b", value) : blend("#ffffff", "#2166ac", -value);
}

Frame draw_axes(Document& doc, double left, double top, double width, double height, std::pair<double, double> xr,
                std::pair<double, double> yr, const std::string& xlabel, const std::string& ylabel,
                const std::string& title) {
  Frame f{left, top, width, height, {xr.first, xr.second, left, left + width}, {yr.first, yr.second, top + height, top}};
  const Style axis{"#333333", "none", 1.0, 1.0, ""};
  const Style grid{"#e0e0e0", "none", 0.5, 1.0, ""};
  doc.rect(left, top, width, height, Style{"#333333", "none", 1.0, 1.0, ""});
  for (double t : nice_ticks(xr.first, xr.second)) {
    const double px = f.x(t);
    doc.line(px, top, px, top + height, grid);
    doc.line(px, top + height, px, top + height + 4, axis);
    doc.text(px, top + height + 16, format_tick(t), 10, "middle");
  }
  for (double t : nice_ticks(yr.first, yr.second)) {
    const double py = f.y(t);
    doc.line(left, py, left + width, py, grid);
    doc.line(left - 4, py, left, py, axis);
    doc.text(left - 6, py + 3, format_tick(t), 10, "end");
  }
  if (!xlabel.empty()) doc.text(left + width / 2, top + height + 34, xlabel, 12, "middle");
  if (!ylabel.empty()) doc.text(left - 40, top + height / 2, ylabel, 12, "middle", "#000000", -90.0);
  if (!title.empty()) doc.text(left + width / 2, top - 10, title, 14, "middle");
  return f;
}

}  // namespace sdg::report::svg
