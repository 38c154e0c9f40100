#include "stablepd/image_io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

namespace stablepd {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what) *what = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

struct PngReadState {
  std::string error;
  std::vector<std::uint8_t> samples;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  const char* reject = nullptr;
};

RasterImage load_png(std::FILE* fp, const std::filesystem::path& path) {
  // Heap state: locals modified after setjmp are indeterminate after a longjmp.
  const auto st = std::make_unique<PngReadState>();
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &st->error, png_error_fn, png_warning_fn);
  if (!png) throw ImageError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw ImageError("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ImageError(path.string() + ": corrupt PNG (" + st->error + ")");
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  png_get_IHDR(png, info, &st->width, &st->height, &st->bit_depth, &st->color_type, nullptr, nullptr, nullptr);
  if (st->bit_depth != 8) {
    st->reject = "unsupported bit depth";
  } else if (st->color_type != PNG_COLOR_TYPE_GRAY && st->color_type != PNG_COLOR_TYPE_RGB) {
    st->reject = "unsupported channel count";
  } else if (png_get_valid(png, info, PNG_INFO_tRNS)) {
    st->reject = "unsupported channel count";
  }
  if (st->reject) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ImageError(path.string() + ": " + st->reject);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  const int channels = st->color_type == PNG_COLOR_TYPE_GRAY ? 1 : 3;
  const std::size_t stride = static_cast<std::size_t>(st->width) * channels;
  st->samples.resize(stride * st->height);
  st->rows.resize(st->height);
  for (png_uint_32 r = 0; r < st->height; ++r) st->rows[r] = st->samples.data() + r * stride;
  png_read_image(png, st->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return RasterImage(static_cast<int>(st->width), static_cast<int>(st->height), channels,
                     std::move(st->samples));
}

// Reads one whitespace-delimited PGM header token, skipping '#' comments.
bool pgm_token(std::istream& in, std::string& tok) {
  tok.clear();
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) break;
  }
  if (ch == EOF) return false;
  tok.push_back(static_cast<char>(ch));
  while ((ch = in.peek()) != EOF && !std::isspace(ch) && ch != '#') tok.push_back(static_cast<char>(in.get()));
  return true;
}

int parse_positive(const std::string& tok, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size() || v <= 0 || v > (1 << 28)) throw std::out_of_range("");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ImageError(path.string() + ": corrupt PGM header");
  }
}

RasterImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError(path.string() + ": cannot open");
  std::string tok;
  pgm_token(in, tok);
  if (tok != "P5") throw ImageError(path.string() + ": not a binary PGM");
  std::array<int, 3> header{};
  for (int& v : header) {
    if (!pgm_token(in, tok)) throw ImageError(path.string() + ": corrupt PGM header");
    v = parse_positive(tok, path);
  }
  if (header[2] > 255) throw ImageError(path.string() + ": unsupported bit depth");
  in.get();  // single whitespace after maxval
  const auto [w, h, maxval] = header;
  std::vector<std::uint8_t> samples(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(samples.size()));
  if (in.gcount() != static_cast<std::streamsize>(samples.size()))
    throw ImageError(path.string() + ": truncated PGM data");
  if (maxval != 255) {
    for (auto& s : samples) s = static_cast<std::uint8_t>((s * 255 + maxval / 2) / maxval);
  }
  return RasterImage(w, h, 1, std::move(samples));
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw ImageError(path.string() + ": cannot open");
  std::array<unsigned char, 8> sig{};
  const std::size_t got = std::fread(sig.data(), 1, sig.size(), fp.get());
  if (got >= 2 && sig[0] == 'P' && sig[1] == '5') {
    fp.reset();
    return load_pgm(path);
  }
  if (got == sig.size() && png_sig_cmp(sig.data(), 0, sig.size()) == 0) {
    std::rewind(fp.get());
    return load_png(fp.get(), path);
  }
  throw ImageError(path.string() + ": unsupported image container");
}

void save_png(const RasterImage& img, const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw ImageError(path.string() + ": cannot open for writing");
  const auto error = std::make_unique<std::string>();
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, error.get(), png_error_fn, png_warning_fn);
  if (!png) throw ImageError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw ImageError("libpng initialisation failed");
  }
  std::vector<png_const_bytep> rows(img.height);
  const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
  for (int r = 0; r < img.height; ++r) rows[r] = img.samples.data() + r * stride;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw ImageError(path.string() + ": PNG encode failed (" + *error + ")");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void save_pgm(const RasterImage& img, const std::filesystem::path& path) {
  if (img.channels != 1) throw ImageError("PGM output requires a gray image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageError(path.string() + ": cannot open for writing");
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.samples.data()), static_cast<std::streamsize>(img.samples.size()));
  if (!out) throw ImageError(path.string() + ": write failed");
}

}  // namespace stablepd
