#include "stablepd/cli.hpp"

#include "stablepd/image_io.hpp"
#include "stablepd/io.hpp"
#include "stablepd/pipeline.hpp"
#include "stablepd/svg_plot.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace stablepd {
namespace fs = std::filesystem;
namespace {

/// A failure that maps onto a specific exit code.
struct CommandError : std::runtime_error {
  CommandError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
  int code;
};

struct Options {
  int levels = 3;
  std::string metric = "relpers";
  double tau_m = 0.3;
  double tau_s = 0.7;
  std::vector<std::string> filtrations{"intensity", "gradient"};
  bool drop_zero = false;
  int jobs = 1;
  std::string output;
};

PipelineConfig to_config(const Options& o) {
  PipelineConfig cfg;
  cfg.n_levels = o.levels;
  cfg.vineyard.metric = parse_metric(o.metric);
  cfg.vineyard.tau_m = o.tau_m;
  cfg.vineyard.tau_s = o.tau_s;
  cfg.filtrations.clear();
  for (const auto& f : o.filtrations) {
    const Filtration parsed = parse_filtration(f);
    if (std::find(cfg.filtrations.begin(), cfg.filtrations.end(), parsed) == cfg.filtrations.end())
      cfg.filtrations.push_back(parsed);
  }
  cfg.drop_zero_persistence = o.drop_zero;
  cfg.jobs = o.jobs;
  return cfg;
}

void require_input(const fs::path& p) {
  if (!fs::exists(p)) throw CommandError(kExitMissingInput, p.string() + ": no such file or directory");
}

fs::path require_output(const Options& o) {
  if (o.output.empty()) throw UsageError("--output is required");
  return o.output;
}

RasterImage load_or_fail(const fs::path& p) {
  require_input(p);
  try {
    return load_image(p);
  } catch (const ImageError& e) {
    throw CommandError(kExitParseError, e.what());
  }
}

template <typename Parse>
auto parse_file(const fs::path& p, Parse&& parse) {
  require_input(p);
  std::ifstream in(p, std::ios::binary);
  if (!in) throw CommandError(kExitMissingInput, p.string() + ": cannot open");
  try {
    return parse(in);
  } catch (const ParseError& e) {
    throw CommandError(kExitParseError, p.string() + ": " + e.what());
  }
}

void write_text(const fs::path& p, const std::string& s) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  write_file(p, s);
}

int cmd_pd(const fs::path& input, const Options& o) {
  PipelineConfig cfg = to_config(o);
  validate(cfg, /*need_stabilization=*/false);
  const RasterImage img = load_or_fail(input);
  const fs::path out = require_output(o);
  fs::create_directories(out);
  for (const Filtration f : cfg.filtrations) {
    for (const auto& pd : image_diagrams(img, f, cfg)) {
      std::ostringstream ss;
      write_diagram_csv(ss, pd);
      write_text(out / diagram_filename(f, pd.scale_index), ss.str());
    }
  }
  return kExitOk;
}

// Diagrams for one filtration read back from a `pd` output directory.
std::vector<Diagram> read_diagram_dir(const fs::path& dir, Filtration f, const PipelineConfig& cfg) {
  std::vector<Diagram> pds;
  for (int s = 1; s <= cfg.n_levels; ++s) {
    const fs::path p = dir / diagram_filename(f, s);
    if (!fs::exists(p))
      throw CommandError(kExitIncompletePyramid,
                         "incomplete pyramid: missing " + diagram_filename(f, s) + " in " + dir.string());
    Diagram pd = parse_file(p, [&](std::istream& in) { return read_diagram_csv(in, s, f); });
    if (pd.scale_index != s || pd.filtration != f)
      throw CommandError(kExitParseError, p.string() + ": rows do not match file name");
    if (cfg.drop_zero_persistence) pd = drop_zero_persistence(std::move(pd));
    pds.push_back(std::move(pd));
  }
  return pds;
}

bool has_any_scale(const fs::path& dir, Filtration f, int levels) {
  for (int s = 1; s <= levels; ++s)
    if (fs::exists(dir / diagram_filename(f, s))) return true;
  return false;
}

int cmd_stabilize(const fs::path& input, const Options& o, bool dump_vines) {
  PipelineConfig cfg = to_config(o);
  validate(cfg, /*need_stabilization=*/true);
  require_input(input);
  const fs::path out = require_output(o);
  std::vector<std::pair<Filtration, VineyardResult<Real>>> results;
  if (fs::is_directory(input)) {
    for (const Filtration f : cfg.filtrations) {
      if (!has_any_scale(input, f, cfg.n_levels)) continue;
      results.emplace_back(f, run_vineyard<Real>(read_diagram_dir(input, f, cfg), cfg.vineyard));
    }
    if (results.empty())
      throw CommandError(kExitIncompletePyramid, "incomplete pyramid: no diagrams found in " + input.string());
  } else {
    const RasterImage img = load_or_fail(input);
    for (const Filtration f : cfg.filtrations)
      results.emplace_back(f, analyze_image(img, f, cfg, /*stabilize=*/true).vineyard);
  }
  fs::create_directories(out);
  for (const auto& [f, res] : results) {
    std::ostringstream ss;
    write_stable_csv(ss, res.stable);
    write_text(out / stable_filename(f), ss.str());
    if (dump_vines) write_text(out / vines_filename(f), vines_json(res.vines));
  }
  return kExitOk;
}

int cmd_plot(const fs::path& input, const Options& o, const std::string& title) {
  const fs::path out = require_output(o);
  const auto points = parse_file(input, [](std::istream& in) { return read_plot_points(in); });
  PlotOptions opts;
  opts.title = title;
  write_text(out, render_diagram_svg(points, opts));
  return kExitOk;
}

int cmd_match(const fs::path& a_path, const fs::path& b_path, const Options& o, int degree, std::ostream& out) {
  PipelineConfig cfg = to_config(o);
  validate(cfg, /*need_stabilization=*/false);
  const Diagram a = parse_file(a_path, [](std::istream& in) { return read_diagram_csv(in); });
  const Diagram b = parse_file(b_path, [](std::istream& in) { return read_diagram_csv(in); });
  out << match_json(match_diagrams(a, b, degree, cfg.vineyard.metric, cfg.vineyard.tau_m));
  return kExitOk;
}

int cmd_pipeline(const fs::path& input, const Options& o, std::ostream& err) {
  PipelineConfig cfg = to_config(o);
  validate(cfg, /*need_stabilization=*/true);
  require_input(input);
  if (!fs::is_directory(input)) throw UsageError(input.string() + " is not a directory");
  const fs::path out = require_output(o);
  const auto reports = run_pipeline(input, out, cfg);
  int failed = 0;
  for (const auto& r : reports) {
    if (r.ok) continue;
    ++failed;
    err << "error: " << r.input.filename().string() << ": " << r.error << '\n';
  }
  return failed ? kExitPartialFailure : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-scale cubical persistence diagrams and stable-diagram extraction"};
  app.name("stablepd");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");

  Options o;
  app.add_option("--levels", o.levels, "Pyramid levels")->check(CLI::PositiveNumber);
  app.add_option("--metric", o.metric, "Point distance: euclidean|pscaled|relpers")
      ->check(CLI::IsMember({"euclidean", "pscaled", "relpers"}));
  app.add_option("--tau-m", o.tau_m, "Matching threshold")->check(CLI::NonNegativeNumber);
  app.add_option("--tau-s", o.tau_s, "Stability threshold")->check(CLI::Range(0.0, 1.0));
  app.add_option("--filtration", o.filtrations, "Filtrations (intensity,gradient)")
      ->delimiter(',')
      ->check(CLI::IsMember({"intensity", "gradient"}));
  app.add_flag("--drop-zero-pers", o.drop_zero, "Drop zero-persistence points");
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output,-o", o.output, "Output file or directory");

  std::string in_a, in_b, title;
  bool dump_vines = false;
  int degree = 0;

  auto* pd = app.add_subcommand("pd", "Write per-scale persistence diagrams of an image");
  pd->add_option("input", in_a, "Image (PNG or PGM)")->required();

  auto* stab = app.add_subcommand("stabilize", "Stable diagram from an image or a diagram directory");
  stab->add_option("input", in_a, "Image or directory written by `pd`")->required();
  stab->add_flag("--dump-vines", dump_vines, "Also write vines_<filtration>.json");

  auto* plot = app.add_subcommand("plot", "Render a diagram CSV as SVG");
  plot->add_option("input", in_a, "Diagram or stable-diagram CSV")->required();
  plot->add_option("--title", title, "Plot title");

  auto* pipe = app.add_subcommand("pipeline", "Process every image of a directory");
  pipe->add_option("input", in_a, "Input directory")->required();

  auto* match = app.add_subcommand("match", "Print the thresholded matching of two diagram CSVs");
  match->add_option("a", in_a, "First diagram CSV")->required();
  match->add_option("b", in_b, "Second diagram CSV")->required();
  match->add_option("--degree", degree, "Homology degree")->check(CLI::Range(0, 1));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (pd->parsed()) return cmd_pd(in_a, o);
    if (stab->parsed()) return cmd_stabilize(in_a, o, dump_vines);
    if (plot->parsed()) return cmd_plot(in_a, o, title);
    if (pipe->parsed()) return cmd_pipeline(in_a, o, err);
    if (match->parsed()) return cmd_match(in_a, in_b, o, degree, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CommandError& e) {
    err << "error: " << e.what() << '\n';
    return e.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitPartialFailure;
  }
  return kExitUsage;
}

}  // namespace stablepd
