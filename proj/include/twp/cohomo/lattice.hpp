#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twp/core/report.hpp"
#include "twp/symcalc/calculus.hpp"
#include "twp/symcalc/chart_map.hpp"

namespace twp::cohomo {

using sym::Chart;
using sym::ChartMap;
using sym::Form;
using sym::Rational;
using sym::Scalar;
using IntMatrix = std::vector<std::vector<long>>;

struct CoverChart {
  std::string id;
  Chart chart;
  // Coordinates constant along leaves; the remaining ones are leaf directions.
  std::vector<std::size_t> casimirs;
  // Chart domain as {f > 0}; empty means the whole coordinate space.
  std::vector<Scalar> domain = {};
};

// Coordinates of chart `to` as functions of the coordinates of chart `from`,
// valid on their common domain.
struct Overlap {
  std::string from, to;
  ChartMap map;
  // Component of the overlap as {f > 0} in `from` coordinates; empty means all of it.
  std::vector<Scalar> domain = {};
};

class Cover {
 public:
  Cover() = default;
  Cover(std::vector<CoverChart> charts, std::vector<Overlap> overlaps);

  const std::vector<CoverChart>& charts() const { return charts_; }
  const std::vector<Overlap>& overlaps() const { return overlaps_; }
  std::size_t index(const std::string& id) const;
  const CoverChart& chart(const std::string& id) const { return charts_[index(id)]; }
  bool contains(std::size_t chart, std::span<const double> x) const;

 private:
  std::vector<CoverChart> charts_;
  std::vector<Overlap> overlaps_;
};

// One form per cover chart, in cover order.
using ChartForms = std::vector<Form>;

// Checks map* w[to] == w[from] on every overlap; failures name the overlap.
Report check_overlap_consistency(const Cover& cover, const ChartForms& w, const std::string& what);
bool vanishes_on_leaves(const CoverChart& c, const Form& w);

// Lattice of closed 1-forms in Casimir differentials. On each overlap the
// basis transforms as map* e_to^j = sum_l A_jl e_from^l.
class LatticeBundle {
 public:
  LatticeBundle(Cover cover, std::vector<std::vector<Form>> basis, std::vector<IntMatrix> transitions);

  const Cover& cover() const { return cover_; }
  std::size_t rank() const { return rank_; }
  const std::vector<Form>& basis(std::size_t chart) const { return basis_[chart]; }
  const IntMatrix& transition(std::size_t overlap) const { return transitions_[overlap]; }
  bool trivial() const;
  const Report& certificate() const { return certificate_; }

 private:
  Cover cover_;
  std::vector<std::vector<Form>> basis_;
  std::vector<IntMatrix> transitions_;
  std::size_t rank_ = 0;
  Report certificate_;
};

// Transverse submersions r_j with r_to o map = A r_from + c on overlaps.
struct AffineTransition {
  IntMatrix a;
  std::vector<Rational> c;
};

class TIAStructure {
 public:
  TIAStructure(Cover cover, std::vector<std::vector<Scalar>> r, std::vector<AffineTransition> transitions);

  const Cover& cover() const { return cover_; }
  std::size_t rank() const { return rank_; }
  const std::vector<Scalar>& submersion(std::size_t chart) const { return r_[chart]; }
  const AffineTransition& transition(std::size_t overlap) const { return transitions_[overlap]; }

 private:
  Cover cover_;
  std::vector<std::vector<Scalar>> r_;
  std::vector<AffineTransition> transitions_;
  std::size_t rank_ = 0;
};

LatticeBundle lattice_from_atlas(const TIAStructure& t);
// primitives[j][u] must satisfy d(primitive) = basis form u on chart j.
TIAStructure atlas_from_lattice(const LatticeBundle& l, const std::vector<std::vector<Scalar>>& primitives);

long determinant(const IntMatrix& m);
IntMatrix identity_matrix(std::size_t k);

// c_rep ^ (lattice frame form) on each chart, for a trivial bundle.
ChartForms dazord_delzant_trivial(const LatticeBundle& l, const ChartForms& c_rep, std::size_t frame);

}  // namespace twp::cohomo
