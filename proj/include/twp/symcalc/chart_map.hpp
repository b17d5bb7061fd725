#pragma once

#include <vector>

#include "twp/symcalc/tensor.hpp"

namespace twp::sym {

// Image of a target angle coordinate: an integer combination of source angle
// coordinates plus a shift that must not depend on source angles.
struct AngleImage {
  std::vector<std::pair<std::size_t, int>> terms;
  Scalar shift;
};

// Image of one target coordinate. Real targets use `expr`; angle targets use `angle`.
struct CoordinateImage {
  Scalar expr;
  AngleImage angle;
};

// Smooth map from `source` to `target` given by the target coordinates as
// functions of the source coordinates.
class ChartMap {
 public:
  ChartMap(Chart source, Chart target, std::vector<CoordinateImage> images);
  static ChartMap identity(const Chart& chart);

  const Chart& source() const { return source_; }
  const Chart& target() const { return target_; }
  const std::vector<CoordinateImage>& images() const { return images_; }

  // The differential of the i-th target coordinate, as a form on the source.
  Form image_differential(std::size_t i) const;
  // Numeric image of a source point (angle targets reduced mod 1).
  std::vector<double> apply(std::span<const double> x) const;

 private:
  Chart source_, target_;
  std::vector<CoordinateImage> images_;
};

// f o map, for f on the target chart. Throws NotRepresentable when an angle
// shift is not a multiple of 1/4 under a trigonometric factor.
Scalar pullback(const Scalar& f, const ChartMap& map);
Form pullback(const Form& w, const ChartMap& map);

// The map `outer o inner`.
ChartMap compose(const ChartMap& outer, const ChartMap& inner);

// Reinterpret a form on a chart whose coordinates are a prefix of `total`.
Form lift(const Form& w, const Chart& total);
bool is_prefix_chart(const Chart& base, const Chart& total);
// Restrict a form on `total` to a prefix chart; throws if it involves the extra coordinates.
Form restrict_to_prefix(const Form& w, const Chart& base);

}  // namespace twp::sym
