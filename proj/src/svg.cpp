// Minimal deterministic SVG plots: no timestamps, fixed number formatting.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scarlab/cli.hpp"
#include "scarlab/error.hpp"

namespace scarlab::cli {

namespace {

constexpr double W = 640, H = 480, L = 70, R = 20, T = 20, B = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<double> numeric_column(const CsvTable& t, std::size_t c) {
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    try {
      out.push_back(std::stod(r[c]));
    } catch (const std::exception&) {
      throw ValidationError("column '" + t.header[c] + "' is not numeric ('" + r[c] + "')");
    }
  }
  return out;
}

struct Range {
  double lo, hi;
  explicit Range(const std::vector<double>& v) {
    lo = hi = 0;
    bool first = true;
    for (double x : v) {
      if (!std::isfinite(x)) continue;
      if (first) lo = hi = x, first = false;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    if (hi == lo) lo -= 0.5, hi += 0.5;
  }
};

class Canvas {
 public:
  Canvas(const Range& x, const Range& y) : x_(x), y_(y) {}
  double px(double v) const { return L + (v - x_.lo) / (x_.hi - x_.lo) * (W - L - R); }
  double py(double v) const { return H - B - (v - y_.lo) / (y_.hi - y_.lo) * (H - T - B); }

  void axes(const std::string& xl, const std::string& yl) {
    body_ += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W - L - R) + "\" height=\"" +
             num(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double xv = x_.lo + (x_.hi - x_.lo) * k / 4, yv = y_.lo + (y_.hi - y_.lo) * k / 4;
      body_ += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(H - B + 16) + "\" text-anchor=\"middle\" font-size=\"11\">" +
               num(xv) + "</text>\n";
      body_ += "<text x=\"" + num(L - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
               num(yv) + "</text>\n";
    }
    body_ += "<text x=\"" + num((L + W - R) / 2) + "\" y=\"" + num(H - 12) + "\" text-anchor=\"middle\" font-size=\"13\">" +
             escape(xl) + "</text>\n";
    body_ += "<text x=\"16\" y=\"" + num((T + H - B) / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " +
             num((T + H - B) / 2) + ")\">" + escape(yl) + "</text>\n";
  }
  void add(const std::string& s) { body_ += s; }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\"" << num(H) << "\" viewBox=\"0 0 "
        << num(W) << ' ' << num(H) << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_ << "</svg>\n";
  }

  static std::string escape(const std::string& s) {
    std::string o;
    for (char ch : s) {
      if (ch == '<') o += "&lt;";
      else if (ch == '>') o += "&gt;";
      else if (ch == '&') o += "&amp;";
      else o += ch;
    }
    return o;
  }

 private:
  Range x_, y_;
  std::string body_;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

// Diverging blue-white-red for signed data, white-to-blue otherwise.
std::string colour(double v, double lo, double hi) {
  int r, g, b;
  if (lo < 0 && hi > 0) {
    const double m = std::max(-lo, hi);
    const double s = std::clamp(v / m, -1.0, 1.0);
    if (s >= 0) r = 255, g = b = int(255 * (1 - s));
    else b = 255, r = g = int(255 * (1 + s));
  } else {
    const double s = hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.0;
    r = g = int(255 * (1 - s));
    b = 255 - int(100 * s);
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

void render_svg(const CsvTable& table, const std::string& kind, const std::string& x, const std::string& y,
                const std::string& z, const std::string& out) {
  if (table.rows.empty()) throw ValidationError("CSV has no data rows");
  auto pick = [&](const std::string& name, std::size_t fallback) {
    if (!name.empty()) return table.column(name);
    if (fallback >= table.header.size()) throw ValidationError("CSV has too few columns for a " + kind + " plot");
    return fallback;
  };
  const std::size_t cx = pick(x, 0);
  const std::vector<double> xs = numeric_column(table, cx);

  if (kind == "heatmap") {
    const std::size_t cy = pick(y, 1), cz = pick(z, 2);
    const std::vector<double> ys = numeric_column(table, cy), zs = numeric_column(table, cz);
    const std::set<double> ux(xs.begin(), xs.end()), uy(ys.begin(), ys.end());
    if (ux.size() * uy.size() != xs.size()) throw ValidationError("heatmap needs a full rectangular grid");
    Range rx(xs), ry(ys), rz(zs);
    Canvas cv(rx, ry);
    const double dx = (W - L - R) / double(ux.size()), dy = (H - T - B) / double(uy.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double cxp = ux.size() > 1 ? cv.px(xs[k]) - dx / 2 : L, cyp = uy.size() > 1 ? cv.py(ys[k]) - dy / 2 : T;
      cv.add("<rect x=\"" + num(cxp) + "\" y=\"" + num(cyp) + "\" width=\"" + num(dx) + "\" height=\"" + num(dy) +
             "\" fill=\"" + colour(zs[k], rz.lo, rz.hi) + "\"/>\n");
    }
    cv.axes(table.header[cx], table.header[cy]);
    cv.add("<text x=\"" + num(W - R) + "\" y=\"14\" text-anchor=\"end\" font-size=\"11\">" +
           Canvas::escape(table.header[cz]) + " in [" + num(rz.lo) + ", " + num(rz.hi) + "]</text>\n");
    cv.write(out);
    return;
  }

  if (kind != "scatter" && kind != "lines") throw ValidationError("unknown plot kind '" + kind + "'");
  std::vector<std::size_t> ycols;
  if (!y.empty()) {
    ycols.push_back(table.column(y));
  } else if (kind == "scatter") {
    ycols.push_back(pick("", 1));
  } else {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == cx) continue;
      try {
        numeric_column(table, c);
        ycols.push_back(c);
      } catch (const ValidationError&) {
      }
    }
    if (ycols.empty()) throw ValidationError("no numeric columns to draw");
  }
  std::vector<std::vector<double>> yss;
  std::vector<double> all;
  for (auto c : ycols) {
    yss.push_back(numeric_column(table, c));
    all.insert(all.end(), yss.back().begin(), yss.back().end());
  }
  Canvas cv{Range(xs), Range(all)};
  for (std::size_t s = 0; s < yss.size(); ++s) {
    const std::string col = kPalette[s % 6];
    if (kind == "scatter") {
      for (std::size_t k = 0; k < xs.size(); ++k)
        if (std::isfinite(yss[s][k]))
          cv.add("<circle cx=\"" + num(cv.px(xs[k])) + "\" cy=\"" + num(cv.py(yss[s][k])) + "\" r=\"2\" fill=\"" + col +
                 "\"/>\n");
    } else {
      std::string pts;
      for (std::size_t k = 0; k < xs.size(); ++k)
        if (std::isfinite(yss[s][k])) pts += num(cv.px(xs[k])) + "," + num(cv.py(yss[s][k])) + " ";
      cv.add("<polyline fill=\"none\" stroke=\"" + col + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n");
      cv.add("<text x=\"" + num(W - R - 4) + "\" y=\"" + num(T + 14 + 14 * double(s)) + "\" text-anchor=\"end\" font-size=\"11\" fill=\"" +
             col + "\">" + Canvas::escape(table.header[ycols[s]]) + "</text>\n");
    }
  }
  cv.axes(table.header[cx], ycols.size() == 1 ? table.header[ycols[0]] : std::string("value"));
  cv.write(out);
}

}  // namespace scarlab::cli
