#include "circext/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "circext/errors.hpp"
#include "circext/report.hpp"

namespace circext::plot {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;

struct Range {
  double lo, hi;
  double span() const { return hi - lo; }
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(std::abs(lo) * 0.05, 1e-3);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

std::string label(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

std::string render_svg(const threshold::ThresholdCurve& c) {
  const std::size_t n = c.eps_values.size();
  if (n == 0) throw DomainError("emit_plot: curve is empty");
  if (c.lhs.size() != n || c.rhs.size() != n) throw DomainError("emit_plot: curve arrays differ in length");

  const auto [xmin, xmax] = std::minmax_element(c.eps_values.begin(), c.eps_values.end());
  double ylo = std::min(*std::min_element(c.lhs.begin(), c.lhs.end()), *std::min_element(c.rhs.begin(), c.rhs.end()));
  double yhi = std::max(*std::max_element(c.lhs.begin(), c.lhs.end()), *std::max_element(c.rhs.begin(), c.rhs.end()));
  const Range xr = padded(*xmin, *xmax), yr = padded(ylo, yhi);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / xr.span() * pw; };
  auto py = [&](double y) { return kTop + (yr.hi - y) / yr.span() * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\""
     << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = xr.lo + xr.span() * i / 4, y = yr.lo + yr.span() * i / 4;
    os << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(kTop + ph) << "\" x2=\"" << fmt(px(x))
       << "\" y2=\"" << fmt(kTop + ph + 5) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(kTop + ph + 20) << "\" text-anchor=\"middle\">"
       << label(x) << "</text>\n"
       << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << fmt(kLeft) << "\" y2=\""
       << fmt(py(y)) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py(y) + 4) << "\" text-anchor=\"end\">" << label(y)
       << "</text>\n";
  }
  os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 10)
     << "\" text-anchor=\"middle\">eps</text>\n";

  auto series = [&](const std::vector<double>& ys, const char* colour, const char* name, double ly) {
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < n; ++i) os << (i ? " " : "") << fmt(px(c.eps_values[i])) << ',' << fmt(py(ys[i]));
    os << "\"/>\n";
    for (std::size_t i = 0; i < n; ++i)
      os << "<circle cx=\"" << fmt(px(c.eps_values[i])) << "\" cy=\"" << fmt(py(ys[i])) << "\" r=\"2.5\" fill=\""
         << colour << "\"/>\n";
    const double lx = kLeft + pw + 15;
    os << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 25) << "\" y2=\"" << fmt(ly)
       << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << fmt(lx + 32) << "\" y=\"" << fmt(ly + 4) << "\">" << name << "</text>\n";
  };
  series(c.lhs, "#e0a800", "left side", kTop + 15);
  series(c.rhs, "#1f5fbf", "right side", kTop + 35);

  for (double x : c.crossings()) {
    os << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(px(x)) << "\" y2=\""
       << fmt(kTop + ph) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n"
       << "<text class=\"crossing\" x=\"" << fmt(px(x) - 4) << "\" y=\"" << fmt(kTop + ph - 8)
       << "\" text-anchor=\"end\">crossing eps = "
       << report::format_number(std::round(x * 1e5) / 1e5) << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void emit_plot(const threshold::ThresholdCurve& curve, const std::filesystem::path& path) {
  const std::string svg = render_svg(curve);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << svg;
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace circext::plot
