#include "twp/symcalc/chart.hpp"

#include <cmath>
#include <set>

#include "twp/core/error.hpp"

namespace twp::sym {

Chart::Chart() : coords_(std::make_shared<const std::vector<Coordinate>>()) {}

Chart::Chart(std::vector<Coordinate> coords) {
  std::set<std::string> seen;
  for (const auto& c : coords) {
    if (c.name.empty()) throw ValidationError("coordinate with empty name");
    if (!seen.insert(c.name).second) throw ValidationError("duplicate coordinate name '" + c.name + "'");
  }
  coords_ = std::make_shared<const std::vector<Coordinate>>(std::move(coords));
}

std::optional<std::size_t> Chart::find(std::string_view name) const {
  for (std::size_t i = 0; i < coords_->size(); ++i)
    if ((*coords_)[i].name == name) return i;
  return std::nullopt;
}

std::size_t Chart::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ValidationError("unknown coordinate '" + std::string(name) + "'");
}

std::vector<std::size_t> Chart::angle_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (is_angle(i)) out.push_back(i);
  return out;
}

std::vector<std::size_t> Chart::real_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!is_angle(i)) out.push_back(i);
  return out;
}

std::string Chart::describe() const {
  std::string s = "(";
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) s += ", ";
    s += coord(i).name;
    if (is_angle(i)) s += ":angle";
  }
  return s + ")";
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

Point::Point(Chart chart, std::vector<double> values) : chart_(std::move(chart)), values_(std::move(values)) {
  if (values_.size() != chart_.dim()) throw ValidationError("point dimension does not match chart");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (chart_.is_angle(i)) values_[i] = wrap_unit(values_[i]);
}

}  // namespace twp::sym
