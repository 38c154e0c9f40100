#include "stablepd/pipeline.hpp"

#include "stablepd/image_io.hpp"
#include "stablepd/io.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <memory>
#include <sstream>
#include <thread>

namespace stablepd {
namespace fs = std::filesystem;

void validate(const PipelineConfig& cfg, bool need_stabilization) {
  if (cfg.n_levels < 1) throw UsageError("--levels must be at least 1");
  if (need_stabilization && cfg.n_levels < 2) throw UsageError("stabilization needs --levels >= 2");
  if (!(cfg.vineyard.tau_m >= 0)) throw UsageError("--tau-m must be >= 0");
  if (!(cfg.vineyard.tau_s >= 0 && cfg.vineyard.tau_s <= 1)) throw UsageError("--tau-s must lie in [0, 1]");
  if (cfg.filtrations.empty()) throw UsageError("no filtration selected");
  if (cfg.jobs < 1) throw UsageError("--jobs must be at least 1");
}

std::vector<Diagram> image_diagrams(const RasterImage& img, Filtration f, const PipelineConfig& cfg) {
  const Pyramid pyramid = build_pyramid(filtration_field<Real>(img, f), cfg.n_levels, f);
  auto pds = pyramid_diagrams(pyramid);
  if (cfg.drop_zero_persistence)
    for (auto& pd : pds) pd = drop_zero_persistence(std::move(pd));
  return pds;
}

FiltrationOutputs analyze_image(const RasterImage& img, Filtration f, const PipelineConfig& cfg, bool stabilize) {
  FiltrationOutputs out;
  out.filtration = f;
  out.diagrams = image_diagrams(img, f, cfg);
  out.vineyard.stable.filtration = f;
  if (stabilize) out.vineyard = run_vineyard<Real>(out.diagrams, cfg.vineyard);
  return out;
}

std::string diagram_filename(Filtration f, int scale) {
  return std::string(to_string(f)) + "_scale" + std::to_string(scale) + ".csv";
}
std::string stable_filename(Filtration f) { return "stable_" + std::string(to_string(f)) + ".csv"; }
std::string vines_filename(Filtration f) { return "vines_" + std::string(to_string(f)) + ".json"; }

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

namespace {

nlohmann::ordered_json config_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json c;
  c["levels"] = cfg.n_levels;
  c["metric"] = to_string(cfg.vineyard.metric);
  c["tau_m"] = cfg.vineyard.tau_m;
  c["tau_s"] = cfg.vineyard.tau_s;
  auto filts = nlohmann::ordered_json::array();
  for (auto f : cfg.filtrations) filts.push_back(to_string(f));
  c["filtrations"] = std::move(filts);
  c["drop_zero_pers"] = cfg.drop_zero_persistence;
  return c;
}

bool is_supported_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm";
}

}  // namespace

ImageReport process_image(const fs::path& image, const fs::path& out_dir, const PipelineConfig& cfg) {
  ImageReport report;
  report.input = image;
  const fs::path dir = out_dir / image.filename();
  nlohmann::ordered_json manifest;
  manifest["image"] = image.filename().string();
  manifest["config"] = config_json(cfg);
  auto outputs = nlohmann::ordered_json::array();
  try {
    fs::create_directories(dir);
    const std::string bytes = read_file(image);
    manifest["input_sha256"] = sha256_hex(bytes);
    const RasterImage img = load_image(image);
    auto emit = [&](const std::string& name, const std::string& kind, Filtration f, int scale,
                    const std::string& contents) {
      write_file(dir / name, contents);
      nlohmann::ordered_json o;
      o["file"] = name;
      o["kind"] = kind;
      o["filtration"] = to_string(f);
      if (scale > 0) o["scale"] = scale;
      o["sha256"] = sha256_hex(contents);
      outputs.push_back(std::move(o));
    };
    for (const Filtration f : cfg.filtrations) {
      const FiltrationOutputs res = analyze_image(img, f, cfg, /*stabilize=*/true);
      for (const auto& pd : res.diagrams) {
        std::ostringstream ss;
        write_diagram_csv(ss, pd);
        emit(diagram_filename(f, pd.scale_index), "diagram", f, pd.scale_index, ss.str());
      }
      std::ostringstream ss;
      write_stable_csv(ss, res.vineyard.stable);
      emit(stable_filename(f), "stable", f, 0, ss.str());
    }
    report.ok = true;
    manifest["status"] = "ok";
  } catch (const std::exception& e) {
    report.error = e.what();
    manifest["status"] = "error";
    // Absolute paths would make manifests depend on the working directory.
    std::string msg = e.what();
    const std::string full = image.string();
    if (const auto pos = msg.find(full); pos != std::string::npos)
      msg.replace(pos, full.size(), image.filename().string());
    manifest["error"] = msg;
  }
  manifest["outputs"] = std::move(outputs);
  try {
    fs::create_directories(dir);
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    report.ok = false;
    if (report.error.empty()) report.error = e.what();
  }
  return report;
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && is_supported_image(entry.path())) out.push_back(entry.path());
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return out;
}

std::vector<ImageReport> run_pipeline(const fs::path& in_dir, const fs::path& out_dir, const PipelineConfig& cfg) {
  validate(cfg, /*need_stabilization=*/true);
  const auto images = list_images(in_dir);
  std::vector<ImageReport> reports(images.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < images.size(); i = next++) reports[i] = process_image(images[i], out_dir, cfg);
  };
  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), images.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_workers; ++t) pool.emplace_back(worker);
    worker();
  }
  return reports;
}

}  // namespace stablepd
