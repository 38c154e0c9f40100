#pragma once

#include "stablepd/matching.hpp"
#include "stablepd/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>

namespace stablepd {

/// Malformed text input; `line` is 1-based (0 when not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// `%.9g` formatting shared by every CSV writer.
std::string format_real(double v);

// Field CSV: first line "W,H", then H rows of W values.
void write_field_csv(std::ostream& out, const Field& f);
Field read_field_csv(std::istream& in);

// Diagram CSV: degree,birth,death,essential,scale,filtration.
void write_diagram_csv(std::ostream& out, const Diagram& pd);
/// Scale and filtration come from the rows; `fallback_scale`/`fallback_filtration`
/// apply to header-only files.
Diagram read_diagram_csv(std::istream& in, int fallback_scale = 1,
                         Filtration fallback_filtration = Filtration::intensity);

// Stable CSV: degree,birth,death,sigma,medial_scale,vine_id,filtration.
void write_stable_csv(std::ostream& out, const Stable& sd);
Stable read_stable_csv(std::istream& in, Filtration fallback_filtration = Filtration::intensity);

/// Debug dump: one object per vine, segments as [scale_from, b_from, d_from, b_to, d_to, distance].
std::string vines_json(std::span<const DiagramVine> vines);

std::string match_json(const MatchResult& m);

// File helpers; throw std::runtime_error on I/O failure.
std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& contents);

}  // namespace stablepd
