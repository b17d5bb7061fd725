#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twp::sym {

enum class CoordKind { real, angle };

struct Coordinate {
  std::string name;
  CoordKind kind = CoordKind::real;
  bool operator==(const Coordinate&) const = default;
};

// Ordered list of named coordinates. Angle coordinates take values in R/Z.
// Cheap to copy; equality is by value.
class Chart {
 public:
  Chart();
  explicit Chart(std::vector<Coordinate> coords);

  std::size_t dim() const { return coords_->size(); }
  const Coordinate& coord(std::size_t i) const { return (*coords_)[i]; }
  const std::vector<Coordinate>& coords() const { return *coords_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index(std::string_view name) const;
  bool is_angle(std::size_t i) const { return coord(i).kind == CoordKind::angle; }
  std::vector<std::size_t> angle_indices() const;
  std::vector<std::size_t> real_indices() const;
  std::string describe() const;

  friend bool operator==(const Chart& a, const Chart& b) {
    return a.coords_ == b.coords_ || *a.coords_ == *b.coords_;
  }

 private:
  std::shared_ptr<const std::vector<Coordinate>> coords_;
};

// Numeric point of a chart. Angle values are stored reduced to [0, 1).
class Point {
 public:
  Point(Chart chart, std::vector<double> values);
  const Chart& chart() const { return chart_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  Chart chart_;
  std::vector<double> values_;
};

double wrap_unit(double x);

}  // namespace twp::sym
