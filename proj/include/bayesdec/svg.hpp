#pragma once

// Minimal SVG assembly for the static output plots. Coordinates are
// formatted with fixed precision so identical inputs render identical
// bytes; nothing here depends on the clock or the locale.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "bayesdec/error.hpp"

namespace bayesdec::svg {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string escape_text(const std::string& s) {
  std::string out;
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

// Linear map from data coordinates to pixel coordinates. Pixel y grows
// downward, so callers flip the range for vertical axes.
struct Axis {
  double d0 = 0.0, d1 = 1.0;  // data extent
  double p0 = 0.0, p1 = 1.0;  // pixel extent

  double operator()(double x) const {
    if (d1 == d0) return 0.5 * (p0 + p1);
    return p0 + (x - d0) * (p1 - p0) / (d1 - d0);
  }
};

class Document {
 public:
  Document(double width, double height) : width_(width), height_(height) {
    if (!(width > 0.0) || !(height > 0.0))
      throw ValidationError("svg canvas dimensions must be positive");
  }

  void raw(const std::string& element) { body_.push_back(element); }

  void line(double x1, double y1, double x2, double y2, const std::string& style,
            const std::string& id = "") {
    std::ostringstream e;
    e << "<line" << id_attr(id) << " x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1)
      << "\" x2=\"" << fmt(x2) << "\" y2=\"" << fmt(y2) << "\" style=\"" << style
      << "\"/>";
    body_.push_back(e.str());
  }

  void rect(double x, double y, double w, double h, const std::string& style,
            const std::string& id = "") {
    std::ostringstream e;
    e << "<rect" << id_attr(id) << " x=\"" << fmt(x) << "\" y=\"" << fmt(y)
      << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\" style=\""
      << style << "\"/>";
    body_.push_back(e.str());
  }

  void circle(double cx, double cy, double r, const std::string& style) {
    std::ostringstream e;
    e << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r)
      << "\" style=\"" << style << "\"/>";
    body_.push_back(e.str());
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& style, const std::string& id = "") {
    std::ostringstream e;
    e << "<polyline" << id_attr(id) << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) e << " ";
      e << fmt(pts[i].first) << "," << fmt(pts[i].second);
    }
    e << "\" style=\"" << style << "\"/>";
    body_.push_back(e.str());
  }

  // Closed filled region: the points are traversed in order and closed.
  void polygon(const std::vector<std::pair<double, double>>& pts,
               const std::string& style, const std::string& id = "") {
    std::ostringstream e;
    e << "<polygon" << id_attr(id) << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) e << " ";
      e << fmt(pts[i].first) << "," << fmt(pts[i].second);
    }
    e << "\" style=\"" << style << "\"/>";
    body_.push_back(e.str());
  }

  void text(double x, double y, const std::string& s, const std::string& style) {
    std::ostringstream e;
    e << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" style=\"" << style
      << "\">" << escape_text(s) << "</text>";
    body_.push_back(e.str());
  }

  std::string render() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_)
        << "\" height=\"" << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_)
        << " " << fmt(height_) << "\">\n";
    for (const auto& e : body_) out << e << "\n";
    out << "</svg>\n";
    return out.str();
  }

 private:
  static std::string id_attr(const std::string& id) {
    return id.empty() ? std::string() : " id=\"" + id + "\"";
  }

  double width_, height_;
  std::vector<std::string> body_;
};

}  // namespace bayesdec::svg
