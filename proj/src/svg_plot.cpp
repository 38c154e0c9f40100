#include "stablepd/svg_plot.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace stablepd {
namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::vector<PlotPoint> read_plot_points(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty file", 1);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  std::stringstream rest;
  rest << header << '\n' << in.rdbuf();
  std::vector<PlotPoint> pts;
  if (header.rfind("degree,birth,death,essential", 0) == 0) {
    for (const auto& p : read_diagram_csv(rest).points) pts.push_back({p.degree, p.birth, p.death});
  } else if (header.rfind("degree,birth,death,sigma", 0) == 0) {
    for (const auto& s : read_stable_csv(rest).points) pts.push_back({s.point.degree, s.point.birth, s.point.death});
  } else {
    throw ParseError("unrecognised CSV header", 1);
  }
  return pts;
}

std::string render_diagram_svg(const std::vector<PlotPoint>& points, const PlotOptions& opts) {
  double lo = 0.0;
  double hi = 1.0;
  for (const auto& p : points) {
    lo = std::min({lo, p.birth, p.death});
    hi = std::max({hi, p.birth, p.death});
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double size = opts.size;
  const double margin = 48;
  const double span = size - 2 * margin;
  auto sx = [&](double v) { return margin + (v - lo) / (hi - lo) * span; };
  auto sy = [&](double v) { return size - margin - (v - lo) / (hi - lo) * span; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.size << "\" height=\"" << opts.size
    << "\" viewBox=\"0 0 " << opts.size << ' ' << opts.size << "\">\n";
  if (!opts.title.empty())
    o << "<text x=\"" << fmt(size / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << xml_escape(opts.title) << "</text>\n";

  o << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
    << "<line x1=\"" << fmt(margin) << "\" y1=\"" << fmt(size - margin) << "\" x2=\"" << fmt(size - margin)
    << "\" y2=\"" << fmt(size - margin) << "\"/>\n"
    << "<line x1=\"" << fmt(margin) << "\" y1=\"" << fmt(margin) << "\" x2=\"" << fmt(margin) << "\" y2=\""
    << fmt(size - margin) << "\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    o << "<line x1=\"" << fmt(sx(v)) << "\" y1=\"" << fmt(size - margin) << "\" x2=\"" << fmt(sx(v))
      << "\" y2=\"" << fmt(size - margin + 4) << "\"/>\n"
      << "<line x1=\"" << fmt(margin - 4) << "\" y1=\"" << fmt(sy(v)) << "\" x2=\"" << fmt(margin)
      << "\" y2=\"" << fmt(sy(v)) << "\"/>\n";
  }
  o << "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    o << "<text x=\"" << fmt(sx(v)) << "\" y=\"" << fmt(size - margin + 16) << "\" text-anchor=\"middle\">"
      << fmt(v) << "</text>\n"
      << "<text x=\"" << fmt(margin - 6) << "\" y=\"" << fmt(sy(v) + 3) << "\" text-anchor=\"end\">" << fmt(v)
      << "</text>\n";
  }
  o << "<text x=\"" << fmt(size / 2) << "\" y=\"" << fmt(size - 10) << "\" text-anchor=\"middle\">death</text>\n"
    << "<text x=\"14\" y=\"" << fmt(size / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << fmt(size / 2) << ")\">birth</text>\n</g>\n";
  o << "<line class=\"diagonal\" x1=\"" << fmt(sx(lo)) << "\" y1=\"" << fmt(sy(lo)) << "\" x2=\"" << fmt(sx(hi))
    << "\" y2=\"" << fmt(sy(hi)) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  o << "<g class=\"points\" fill-opacity=\"0.7\">\n";
  for (const auto& p : points) {
    const double x = sx(p.death);
    const double y = sy(p.birth);
    if (p.degree == 0)
      o << "<circle class=\"h0\" cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"4\" fill=\"red\"/>\n";
    else
      o << "<rect class=\"h1\" x=\"" << fmt(x - 4) << "\" y=\"" << fmt(y - 4)
        << "\" width=\"8\" height=\"8\" fill=\"blue\"/>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace stablepd
