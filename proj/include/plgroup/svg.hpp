#pragma once
// Rectangle diagrams: the domain window on the top line, its image on the
// bottom line, one connector per vertex and the slope written in each
// trapezoid. Coordinates are presentation only; the structure is exact.

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plgroup/plmap.hpp"
#include "plgroup/subdivide.hpp"

namespace plgroup {

struct SvgWindow {
  Rational lo, hi;
};

namespace detail {

inline std::string svg_num(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

}  // namespace detail

// Diagram through the given points (x increasing, y increasing), drawn with
// the top line scaled to [first.x, last.x] and the bottom to [first.y, last.y].
inline std::string render_points_svg(const std::vector<Vertex>& pts, int width, int height) {
  if (width < 40 || height < 40) throw Error("BadParameters", "diagram needs width and height >= 40");
  if (pts.size() < 2) throw Error("BadParameters", "diagram needs two points");
  const Rational lo = pts.front().x, hi = pts.back().x, ylo = pts.front().y, yhi = pts.back().y;
  const double margin = 20, top = margin, bottom = height - margin, span = width - 2 * margin;
  auto tx = [&](const Rational& x) { return margin + span * Rational((x - lo) / (hi - lo)).get_d(); };
  auto bx = [&](const Rational& y) { return margin + span * Rational((y - ylo) / (yhi - ylo)).get_d(); };
  using detail::svg_num;
  auto line = [&](const char* cls, double x1, double y1, double x2, double y2) {
    return std::string("  <line class=\"") + cls + "\" x1=\"" + svg_num(x1) + "\" y1=\"" + svg_num(y1) + "\" x2=\"" +
           svg_num(x2) + "\" y2=\"" + svg_num(y2) + "\" stroke=\"black\"/>\n";
  };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
                    std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " +
                    std::to_string(height) + "\">\n";
  out += line("row top", margin, top, width - margin, top);
  out += line("row bottom", margin, bottom, width - margin, bottom);
  for (const auto& p : pts) {
    double a = tx(p.x), b = bx(p.y);
    out += line("tick top", a, top - 5, a, top + 5);
    out += line("tick bottom", b, bottom - 5, b, bottom + 5);
    out += line("connector", a, top, b, bottom);
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Rational s = (pts[i + 1].y - pts[i].y) / (pts[i + 1].x - pts[i].x);
    double cx = (tx(pts[i].x) + tx(pts[i + 1].x) + bx(pts[i].y) + bx(pts[i + 1].y)) / 4;
    out += "  <text class=\"slope\" x=\"" + svg_num(cx) + "\" y=\"" + svg_num(height / 2.0) +
           "\" text-anchor=\"middle\">" + s.get_str() + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

// Without a window the convex hull of the support is drawn.
inline std::string render_svg(const PLMap& f, int width = 600, int height = 200,
                              std::optional<SvgWindow> window = std::nullopt) {
  if (!window) {
    auto h = f.support();
    if (!h || !h->lo || !h->hi) throw Error("UnboundedWithoutWindow", "support is not bounded; give a window");
    window = SvgWindow{*h->lo, *h->hi};
  }
  if (!(window->lo < window->hi)) throw Error("BadParameters", "window needs lo < hi");
  std::vector<Vertex> pts{{window->lo, f(window->lo)}};
  for (const auto& v : f.vertices())
    if (window->lo < v.x && v.x < window->hi) pts.push_back(v);
  pts.push_back({window->hi, f(window->hi)});
  return render_points_svg(pts, width, height);
}

// Diagram of the map sending the subdivision d onto d2 of [0, 1].
inline std::string render_svg(const Subdivision& d, const Subdivision& d2, int width = 600, int height = 200) {
  if (d.points.size() != d2.points.size()) throw Error("BadParameters", "subdivisions differ in size");
  std::vector<Vertex> pts;
  for (std::size_t i = 0; i < d.points.size(); ++i) pts.push_back({d.points[i], d2.points[i]});
  return render_points_svg(pts, width, height);
}

}  // namespace plgroup
