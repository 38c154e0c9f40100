#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stablepd {

/// Which scalar function of the image drives the filtration.
enum class Filtration { intensity, gradient };

inline std::string_view to_string(Filtration f) {
  return f == Filtration::intensity ? "intensity" : "gradient";
}

inline Filtration parse_filtration(std::string_view s) {
  if (s == "intensity") return Filtration::intensity;
  if (s == "gradient") return Filtration::gradient;
  throw std::invalid_argument("unknown filtration '" + std::string(s) + "'");
}

/// Decoded 8-bit raster, row-major, channels interleaved.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> samples;

  RasterImage() = default;
  RasterImage(int w, int h, int c, std::vector<std::uint8_t> s)
      : width(w), height(h), channels(c), samples(std::move(s)) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("image dimensions must be positive");
    if (c != 1 && c != 3) throw std::invalid_argument("unsupported channel count");
    if (samples.size() != static_cast<std::size_t>(w) * h * c)
      throw std::invalid_argument("sample count does not match dimensions");
  }

  std::uint8_t at(int row, int col, int channel) const {
    return samples[(static_cast<std::size_t>(row) * width + col) * channels + channel];
  }
};

template <typename Scalar>
struct ValueRange {
  Scalar lo = 0;
  Scalar hi = 1;
  bool contains(Scalar v) const { return v >= lo && v <= hi; }
  bool operator==(const ValueRange&) const = default;
};

/// Row-major grid of filtration values. Rows index y, columns index x.
template <typename Scalar>
using FieldArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Immutable 2D scalar field with a declared closed value range.
template <typename Scalar>
class ScalarField {
 public:
  using Array = FieldArray<Scalar>;

  ScalarField(Array values, ValueRange<Scalar> range) : values_(std::move(values)), range_(range) {
    if (values_.rows() < 1 || values_.cols() < 1)
      throw std::invalid_argument("scalar field must be nonempty");
    if (!values_.allFinite()) throw std::invalid_argument("scalar field has non-finite values");
    if (values_.minCoeff() < range_.lo || values_.maxCoeff() > range_.hi)
      throw std::invalid_argument("scalar field values outside declared range");
  }

  /// Field whose declared range is exactly [min, max] of the values.
  static ScalarField tight(Array values) {
    if (values.size() == 0) throw std::invalid_argument("scalar field must be nonempty");
    ValueRange<Scalar> r{values.minCoeff(), values.maxCoeff()};
    return ScalarField(std::move(values), r);
  }

  int width() const { return static_cast<int>(values_.cols()); }
  int height() const { return static_cast<int>(values_.rows()); }
  Eigen::Index size() const { return values_.size(); }
  const Array& values() const { return values_; }
  const ValueRange<Scalar>& range() const { return range_; }
  Scalar operator()(int row, int col) const { return values_(row, col); }
  /// Row-major linear access.
  Scalar operator[](Eigen::Index i) const { return values_.data()[i]; }

  bool operator==(const ScalarField& o) const {
    return range_ == o.range_ && values_.rows() == o.values_.rows() &&
           values_.cols() == o.values_.cols() && (values_ == o.values_).all();
  }

 private:
  Array values_;
  ValueRange<Scalar> range_;
};

/// Multi-resolution stack, finest first.
template <typename Scalar>
struct ScalePyramid {
  std::vector<ScalarField<Scalar>> levels;
  Filtration filtration = Filtration::intensity;
};

/// Per-pixel channel mean scaled into [0,1].
template <typename Scalar = float>
ScalarField<Scalar> intensity_field(const RasterImage& img) {
  FieldArray<Scalar> out(img.height, img.width);
  const double denom = 255.0 * img.channels;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      int sum = 0;
      for (int ch = 0; ch < img.channels; ++ch) sum += img.at(r, c, ch);
      out(r, c) = static_cast<Scalar>(sum / denom);
    }
  }
  return ScalarField<Scalar>(std::move(out), {Scalar(0), Scalar(1)});
}

/// Unnormalized channel-averaged |Laplacian| with clamp-to-edge borders.
inline FieldArray<double> laplacian_response(const RasterImage& img) {
  const int h = img.height;
  const int w = img.width;
  FieldArray<double> acc = FieldArray<double>::Zero(h, w);
  for (int ch = 0; ch < img.channels; ++ch) {
    auto px = [&](int r, int c) {
      r = std::clamp(r, 0, h - 1);
      c = std::clamp(c, 0, w - 1);
      return static_cast<double>(img.at(r, c, ch));
    };
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        acc(r, c) += std::abs(px(r - 1, c) + px(r + 1, c) + px(r, c - 1) + px(r, c + 1) - 4.0 * px(r, c));
  }
  return acc / static_cast<double>(img.channels);
}

/// Laplacian gradient magnitude normalized by its maximum; all-zero stays zero.
template <typename Scalar = float>
ScalarField<Scalar> gradient_field(const RasterImage& img) {
  FieldArray<double> resp = laplacian_response(img);
  const double peak = resp.maxCoeff();
  if (peak > 0) resp /= peak;
  return ScalarField<Scalar>(resp.cast<Scalar>(), {Scalar(0), Scalar(1)});
}

/// Box 2x2 average with ceil dimensions; odd borders average the clipped block.
template <typename Scalar>
ScalarField<Scalar> downsample(const ScalarField<Scalar>& f) {
  const int h = f.height();
  const int w = f.width();
  const int oh = (h + 1) / 2;
  const int ow = (w + 1) / 2;
  FieldArray<Scalar> out(oh, ow);
  for (int r = 0; r < oh; ++r) {
    const int rows = std::min(2, h - 2 * r);
    for (int c = 0; c < ow; ++c) {
      const int cols = std::min(2, w - 2 * c);
      const double sum = f.values().block(2 * r, 2 * c, rows, cols).template cast<double>().sum();
      out(r, c) = static_cast<Scalar>(sum / (rows * cols));
    }
  }
  // Block means stay inside [min, max] of the input; clamp guards rounding.
  out = out.max(f.range().lo).min(f.range().hi);
  return ScalarField<Scalar>(std::move(out), f.range());
}

template <typename Scalar>
ScalePyramid<Scalar> build_pyramid(const ScalarField<Scalar>& f, int n_levels,
                                   Filtration tag = Filtration::intensity) {
  if (n_levels < 1) throw std::invalid_argument("pyramid needs at least one level");
  ScalePyramid<Scalar> p;
  p.filtration = tag;
  p.levels.reserve(n_levels);
  p.levels.push_back(f);
  for (int i = 1; i < n_levels; ++i) p.levels.push_back(downsample(p.levels.back()));
  return p;
}

template <typename Scalar = float>
ScalarField<Scalar> filtration_field(const RasterImage& img, Filtration f) {
  return f == Filtration::intensity ? intensity_field<Scalar>(img) : gradient_field<Scalar>(img);
}

}  // namespace stablepd
