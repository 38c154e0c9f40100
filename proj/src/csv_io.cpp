#include "stablepd/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace stablepd {
namespace {

constexpr std::string_view kDiagramHeader = "degree,birth,death,essential,scale,filtration";
constexpr std::string_view kStableHeader = "degree,birth,death,sigma,medial_scale,vine_id,filtration";

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line, const char* what) {
  T v{};
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || tok.empty())
    throw ParseError(std::string("bad ") + what + " '" + std::string(tok) + "'", line);
  return v;
}

Real parse_real(std::string_view tok, std::size_t line, const char* what) {
  const Real v = parse_number<Real>(tok, line, what);
  if (!std::isfinite(v)) throw ParseError(std::string("non-finite ") + what, line);
  return v;
}

int parse_degree(std::string_view tok, std::size_t line) {
  const int d = parse_number<int>(tok, line, "degree");
  if (d != 0 && d != 1) throw ParseError("degree must be 0 or 1", line);
  return d;
}

Filtration parse_filtration_at(std::string_view tok, std::size_t line) {
  try {
    return parse_filtration(tok);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line);
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_field_csv(std::ostream& out, const Field& f) {
  out << f.width() << ',' << f.height() << '\n';
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      if (c) out << ',';
      out << format_real(f(r, c));
    }
    out << '\n';
  }
}

Field read_field_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError("empty field file", 1);
  const auto dims = split(trim_cr(line));
  if (dims.size() != 2) throw ParseError("expected 'width,height'", lineno);
  const int w = parse_number<int>(dims[0], lineno, "width");
  const int h = parse_number<int>(dims[1], lineno, "height");
  if (w <= 0 || h <= 0) throw ParseError("dimensions must be positive", lineno);
  FieldArray<Real> values(h, w);
  for (int r = 0; r < h; ++r) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError("missing field row", lineno);
    const auto toks = split(trim_cr(line));
    if (static_cast<int>(toks.size()) != w) throw ParseError("wrong number of values", lineno);
    for (int c = 0; c < w; ++c) values(r, c) = parse_real(toks[c], lineno, "value");
  }
  return Field::tight(std::move(values));
}

void write_diagram_csv(std::ostream& out, const Diagram& pd) {
  Diagram sorted = pd;
  sorted.sort_canonical();
  out << kDiagramHeader << '\n';
  for (const auto& p : sorted.points) {
    out << p.degree << ',' << format_real(p.birth) << ',' << format_real(p.death) << ','
        << (p.essential ? 1 : 0) << ',' << pd.scale_index << ',' << to_string(pd.filtration) << '\n';
  }
}

Diagram read_diagram_csv(std::istream& in, int fallback_scale, Filtration fallback_filtration) {
  Diagram pd;
  pd.scale_index = fallback_scale;
  pd.filtration = fallback_filtration;
  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != kDiagramHeader)
    throw ParseError("expected header '" + std::string(kDiagramHeader) + "'", 1);
  std::size_t lineno = 1;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto row = trim_cr(line);
    if (row.empty()) continue;
    const auto t = split(row);
    if (t.size() != 6) throw ParseError("expected 6 fields", lineno);
    Point p;
    p.degree = parse_degree(t[0], lineno);
    p.birth = parse_real(t[1], lineno, "birth");
    p.death = parse_real(t[2], lineno, "death");
    if (t[3] != "0" && t[3] != "1") throw ParseError("essential must be 0 or 1", lineno);
    p.essential = t[3] == "1";
    if (p.birth < p.death) throw ParseError("birth below death", lineno);
    const int scale = parse_number<int>(t[4], lineno, "scale");
    if (scale < 1) throw ParseError("scale must be positive", lineno);
    const Filtration filt = parse_filtration_at(t[5], lineno);
    if (first) {
      pd.scale_index = scale;
      pd.filtration = filt;
      first = false;
    } else if (scale != pd.scale_index || filt != pd.filtration) {
      throw ParseError("mixed scale or filtration within one diagram", lineno);
    }
    pd.points.push_back(p);
  }
  pd.sort_canonical();
  return pd;
}

void write_stable_csv(std::ostream& out, const Stable& sd) {
  Stable sorted = sd;
  sorted.sort_canonical();
  out << kStableHeader << '\n';
  for (const auto& s : sorted.points) {
    out << s.point.degree << ',' << format_real(s.point.birth) << ',' << format_real(s.point.death) << ','
        << format_real(s.sigma) << ',' << s.medial_scale << ',' << s.vine_id << ','
        << to_string(sd.filtration) << '\n';
  }
}

Stable read_stable_csv(std::istream& in, Filtration fallback_filtration) {
  Stable sd;
  sd.filtration = fallback_filtration;
  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != kStableHeader)
    throw ParseError("expected header '" + std::string(kStableHeader) + "'", 1);
  std::size_t lineno = 1;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto row = trim_cr(line);
    if (row.empty()) continue;
    const auto t = split(row);
    if (t.size() != 7) throw ParseError("expected 7 fields", lineno);
    StablePoint<Real> s;
    s.point.degree = parse_degree(t[0], lineno);
    s.point.birth = parse_real(t[1], lineno, "birth");
    s.point.death = parse_real(t[2], lineno, "death");
    s.sigma = parse_number<double>(t[3], lineno, "sigma");
    s.medial_scale = parse_number<int>(t[4], lineno, "medial_scale");
    s.vine_id = parse_number<int>(t[5], lineno, "vine_id");
    const Filtration filt = parse_filtration_at(t[6], lineno);
    if (first) {
      sd.filtration = filt;
      first = false;
    } else if (filt != sd.filtration) {
      throw ParseError("mixed filtration within one stable diagram", lineno);
    }
    sd.points.push_back(s);
  }
  sd.sort_canonical();
  return sd;
}

std::string vines_json(std::span<const DiagramVine> vines) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& v : vines) {
    nlohmann::ordered_json o;
    o["id"] = v.id;
    o["degree"] = v.degree;
    o["birth_scale"] = v.birth_scale;
    o["death_scale"] = v.death_scale;
    o["sigma"] = stability_score(v);
    auto segs = nlohmann::ordered_json::array();
    for (const auto& s : v.segments)
      segs.push_back({s.scale_from, s.point_from.birth, s.point_from.death, s.point_to.birth, s.point_to.death,
                      s.distance});
    o["segments"] = std::move(segs);
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::string match_json(const MatchResult& m) {
  nlohmann::ordered_json o;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& p : m.pairs) pairs.push_back({p.a, p.b, p.distance});
  o["pairs"] = std::move(pairs);
  o["unmatched_a"] = m.unmatched_a;
  o["unmatched_b"] = m.unmatched_b;
  return o.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error(p.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& contents) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error(p.string() + ": cannot open for writing");
  out << contents;
  if (!out.flush()) throw std::runtime_error(p.string() + ": write failed");
}

}  // namespace stablepd
