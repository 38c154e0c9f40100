#pragma once

#include "stablepd/field.hpp"
#include "stablepd/types.hpp"
#include "stablepd/vineyard.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stablepd {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  int n_levels = 3;
  VineyardParams vineyard;
  std::vector<Filtration> filtrations{Filtration::intensity, Filtration::gradient};
  bool drop_zero_persistence = false;
  int jobs = 1;
};

/// Throws UsageError when a field is out of range; `need_stabilization` requires two levels.
void validate(const PipelineConfig& cfg, bool need_stabilization);

/// Everything derived from one image under one filtration.
struct FiltrationOutputs {
  Filtration filtration = Filtration::intensity;
  std::vector<Diagram> diagrams;  ///< scale 1..n
  VineyardResult<Real> vineyard;  ///< empty unless stabilized
};

std::vector<Diagram> image_diagrams(const RasterImage& img, Filtration f, const PipelineConfig& cfg);
FiltrationOutputs analyze_image(const RasterImage& img, Filtration f, const PipelineConfig& cfg, bool stabilize);

std::string diagram_filename(Filtration f, int scale);
std::string stable_filename(Filtration f);
std::string vines_filename(Filtration f);

std::string sha256_hex(std::string_view data);

struct ImageReport {
  std::filesystem::path input;
  bool ok = false;
  std::string error;
};

/// Writes all diagrams, stable diagrams and `manifest.json` for one image under `out_dir`.
ImageReport process_image(const std::filesystem::path& image, const std::filesystem::path& out_dir,
                          const PipelineConfig& cfg);

/// Supported images directly inside `dir`, sorted by file name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

/// Processes every image of `in_dir` with up to `cfg.jobs` workers. Each image
/// gets its own subdirectory of `out_dir` named after the image file.
std::vector<ImageReport> run_pipeline(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                                      const PipelineConfig& cfg);

}  // namespace stablepd
