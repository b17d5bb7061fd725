#include "twp/cohomo/lattice.hpp"

#include <algorithm>
#include <set>

#include "twp/symcalc/text.hpp"

namespace twp::cohomo {

Cover::Cover(std::vector<CoverChart> charts, std::vector<Overlap> overlaps)
    : charts_(std::move(charts)), overlaps_(std::move(overlaps)) {
  if (charts_.empty()) throw ValidationError("cover has no charts");
  std::set<std::string> ids;
  for (auto& c : charts_) {
    if (!ids.insert(c.id).second) throw ValidationError("duplicate chart id " + c.id);
    std::sort(c.casimirs.begin(), c.casimirs.end());
    for (auto i : c.casimirs)
      if (i >= c.chart.dim()) throw ValidationError("Casimir index out of range in chart " + c.id);
  }
  for (const auto& o : overlaps_) {
    if (!(o.map.source() == chart(o.from).chart)) throw ChartMismatch("overlap " + o.from + "->" + o.to + " has the wrong source");
    if (!(o.map.target() == chart(o.to).chart)) throw ChartMismatch("overlap " + o.from + "->" + o.to + " has the wrong target");
  }
}

std::size_t Cover::index(const std::string& id) const {
  for (std::size_t i = 0; i < charts_.size(); ++i)
    if (charts_[i].id == id) return i;
  throw ValidationError("unknown chart " + id);
}

bool Cover::contains(std::size_t chart, std::span<const double> x) const {
  for (const auto& f : charts_[chart].domain)
    if (!(f.evaluate(x) > 0.0)) return false;
  return true;
}

Report check_overlap_consistency(const Cover& cover, const ChartForms& w, const std::string& what) {
  if (w.size() != cover.charts().size()) throw ValidationError(what + ": one form per chart expected");
  Report r;
  r.subject = what + " overlap consistency";
  for (const auto& o : cover.overlaps()) {
    const Form pulled = sym::pullback(w[cover.index(o.to)], o.map);
    const Form diff = pulled - w[cover.index(o.from)];
    r.add(what + " on " + o.from + "->" + o.to, diff.is_zero(), diff.is_zero() ? "" : "residual " + sym::to_string(diff));
  }
  return r;
}

bool vanishes_on_leaves(const CoverChart& c, const Form& w) {
  for (const auto& [idx, coef] : w.coefficients())
    if (std::none_of(idx.begin(), idx.end(),
                     [&](int i) { return std::binary_search(c.casimirs.begin(), c.casimirs.end(), std::size_t(i)); }))
      return false;
  return true;
}

long determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  long det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<long> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[i][c]);
      minor.push_back(row);
    }
    det += (j % 2 ? -1 : 1) * m[0][j] * determinant(minor);
  }
  return det;
}

IntMatrix identity_matrix(std::size_t k) {
  IntMatrix m(k, std::vector<long>(k, 0));
  for (std::size_t i = 0; i < k; ++i) m[i][i] = 1;
  return m;
}

namespace {

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix r(a.size(), std::vector<long>(b.empty() ? 0 : b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t l = 0; l < b.size(); ++l)
      for (std::size_t j = 0; j < r[i].size(); ++j) r[i][j] += a[i][l] * b[l][j];
  return r;
}

void check_square(const IntMatrix& m, std::size_t k, const std::string& where) {
  if (m.size() != k) throw ValidationError("transition on " + where + " must be " + std::to_string(k) + "x" + std::to_string(k));
  for (const auto& row : m)
    if (row.size() != k) throw ValidationError("transition on " + where + " must be square");
  const long det = determinant(m);
  if (det != 1 && det != -1) throw ValidationError("transition on " + where + " is not in GL(k,Z)");
}

std::string overlap_name(const Overlap& o) { return o.from + "->" + o.to; }

// A_ac = A_bc A_ab whenever all three overlaps are declared.
void check_triples(const Cover& cover, const std::vector<IntMatrix>& m, Report& r) {
  const auto& ov = cover.overlaps();
  if (cover.charts().size() < 3) return;
  for (std::size_t p = 0; p < ov.size(); ++p)
    for (std::size_t q = 0; q < ov.size(); ++q) {
      if (ov[p].to != ov[q].from || ov[p].from == ov[q].to) continue;
      for (std::size_t s = 0; s < ov.size(); ++s) {
        if (ov[s].from != ov[p].from || ov[s].to != ov[q].to) continue;
        const bool ok = multiply(m[q], m[p]) == m[s];
        if (!ok) throw ValidationError("cocycle condition fails on " + ov[p].from + "," + ov[p].to + "," + ov[q].to);
        r.add("cocycle " + ov[p].from + "," + ov[p].to + "," + ov[q].to, true);
      }
    }
}

}  // namespace

LatticeBundle::LatticeBundle(Cover cover, std::vector<std::vector<Form>> basis, std::vector<IntMatrix> transitions)
    : cover_(std::move(cover)), basis_(std::move(basis)), transitions_(std::move(transitions)) {
  const auto& charts = cover_.charts();
  if (basis_.size() != charts.size()) throw ValidationError("lattice needs a basis on every chart");
  rank_ = basis_[0].size();
  if (rank_ == 0) throw ValidationError("lattice basis is empty");
  certificate_.subject = "lattice bundle";
  for (std::size_t j = 0; j < charts.size(); ++j) {
    if (basis_[j].size() != rank_) throw ValidationError("lattice rank differs on chart " + charts[j].id);
    for (std::size_t u = 0; u < rank_; ++u) {
      const Form& e = basis_[j][u];
      if (e.degree() != 1 || !(e.chart() == charts[j].chart))
        throw ValidationError("lattice basis form must be a 1-form on chart " + charts[j].id);
      if (!vanishes_on_leaves(charts[j], e))
        throw ValidationError("lattice basis form " + std::to_string(u + 1) + " on chart " + charts[j].id +
                              " is not in the span of Casimir differentials");
      if (!sym::d(e).is_zero())
        throw ValidationError("lattice basis form " + std::to_string(u + 1) + " on chart " + charts[j].id + " is not closed");
    }
  }
  certificate_.add("basis forms closed", true, "each basis form is closed and conormal");
  if (transitions_.size() != cover_.overlaps().size()) throw ValidationError("lattice needs a transition per overlap");
  for (std::size_t o = 0; o < transitions_.size(); ++o) {
    const Overlap& ov = cover_.overlaps()[o];
    check_square(transitions_[o], rank_, overlap_name(ov));
    const auto& from = basis_[cover_.index(ov.from)];
    const auto& to = basis_[cover_.index(ov.to)];
    for (std::size_t j = 0; j < rank_; ++j) {
      Form expected(ov.map.source(), 1);
      for (std::size_t l = 0; l < rank_; ++l) expected = expected + Scalar(transitions_[o][j][l]) * from[l];
      const Form diff = sym::pullback(to[j], ov.map) - expected;
      if (!diff.is_zero())
        throw ValidationError("lattice transition fails on " + overlap_name(ov) + ": residual " + sym::to_string(diff));
    }
    certificate_.add("transition " + overlap_name(ov), true, "integral change of basis");
  }
  check_triples(cover_, transitions_, certificate_);
}

bool LatticeBundle::trivial() const {
  const IntMatrix id = identity_matrix(rank_);
  return std::all_of(transitions_.begin(), transitions_.end(), [&](const IntMatrix& m) { return m == id; });
}

TIAStructure::TIAStructure(Cover cover, std::vector<std::vector<Scalar>> r, std::vector<AffineTransition> transitions)
    : cover_(std::move(cover)), r_(std::move(r)), transitions_(std::move(transitions)) {
  const auto& charts = cover_.charts();
  if (r_.size() != charts.size()) throw ValidationError("atlas needs a submersion on every chart");
  rank_ = r_[0].size();
  if (rank_ == 0) throw ValidationError("atlas submersion is empty");
  for (std::size_t j = 0; j < charts.size(); ++j) {
    if (r_[j].size() != rank_) throw ValidationError("submersion rank differs on chart " + charts[j].id);
    for (const auto& f : r_[j]) {
      if (!vanishes_on_leaves(charts[j], sym::differential(charts[j].chart, f)))
        throw ValidationError("submersion on chart " + charts[j].id + " is not constant on leaves");
    }
  }
  if (transitions_.size() != cover_.overlaps().size()) throw ValidationError("atlas needs a transition per overlap");
  std::vector<IntMatrix> linear;
  for (std::size_t o = 0; o < transitions_.size(); ++o) {
    const Overlap& ov = cover_.overlaps()[o];
    const auto& t = transitions_[o];
    check_square(t.a, rank_, overlap_name(ov));
    if (t.c.size() != rank_) throw ValidationError("translation on " + overlap_name(ov) + " has the wrong length");
    const auto& from = r_[cover_.index(ov.from)];
    const auto& to = r_[cover_.index(ov.to)];
    for (std::size_t j = 0; j < rank_; ++j) {
      Scalar expected(t.c[j]);
      for (std::size_t l = 0; l < rank_; ++l) expected += Scalar(t.a[j][l]) * from[l];
      const Scalar diff = sym::pullback(to[j], ov.map) - expected;
      if (!diff.is_zero())
        throw ValidationError("affine transition fails on " + overlap_name(ov) + ": residual " +
                              sym::to_string(diff, ov.map.source()));
    }
    linear.push_back(t.a);
  }
  Report unused;
  check_triples(cover_, linear, unused);
}

LatticeBundle lattice_from_atlas(const TIAStructure& t) {
  std::vector<std::vector<Form>> basis;
  for (std::size_t j = 0; j < t.cover().charts().size(); ++j) {
    std::vector<Form> b;
    for (const auto& f : t.submersion(j)) b.push_back(sym::differential(t.cover().charts()[j].chart, f));
    basis.push_back(std::move(b));
  }
  std::vector<IntMatrix> a;
  for (std::size_t o = 0; o < t.cover().overlaps().size(); ++o) a.push_back(t.transition(o).a);
  return LatticeBundle(t.cover(), std::move(basis), std::move(a));
}

TIAStructure atlas_from_lattice(const LatticeBundle& l, const std::vector<std::vector<Scalar>>& primitives) {
  const Cover& cover = l.cover();
  if (primitives.size() != cover.charts().size()) throw ValidationError("one list of primitives per chart expected");
  for (std::size_t j = 0; j < primitives.size(); ++j) {
    if (primitives[j].size() != l.rank()) throw ValidationError("primitive count differs from lattice rank");
    for (std::size_t u = 0; u < l.rank(); ++u) {
      const Form diff = sym::differential(cover.charts()[j].chart, primitives[j][u]) - l.basis(j)[u];
      if (!diff.is_zero())
        throw ValidationError("primitive " + std::to_string(u + 1) + " on chart " + cover.charts()[j].id +
                              " is wrong: d(primitive) - basis = " + sym::to_string(diff));
    }
  }
  std::vector<AffineTransition> ts;
  for (std::size_t o = 0; o < cover.overlaps().size(); ++o) {
    const Overlap& ov = cover.overlaps()[o];
    AffineTransition t{l.transition(o), {}};
    const auto& from = primitives[cover.index(ov.from)];
    const auto& to = primitives[cover.index(ov.to)];
    for (std::size_t j = 0; j < l.rank(); ++j) {
      Scalar c = sym::pullback(to[j], ov.map);
      for (std::size_t u = 0; u < l.rank(); ++u) c -= Scalar(t.a[j][u]) * from[u];
      auto cv = c.constant_value();
      if (!cv) throw ValidationError("primitives on " + overlap_name(ov) + " differ by a non-constant");
      t.c.push_back(*cv);
    }
    ts.push_back(std::move(t));
  }
  return TIAStructure(cover, primitives, std::move(ts));
}

ChartForms dazord_delzant_trivial(const LatticeBundle& l, const ChartForms& c_rep, std::size_t frame) {
  if (!l.trivial()) throw NotRepresentable("Dazord-Delzant map is only supported for trivial lattice bundles");
  if (frame >= l.rank()) throw ValidationError("frame index out of range");
  const Cover& cover = l.cover();
  if (c_rep.size() != cover.charts().size()) throw ValidationError("class representative needs a form per chart");
  ChartForms out;
  for (std::size_t j = 0; j < c_rep.size(); ++j) {
    const CoverChart& cc = cover.charts()[j];
    if (c_rep[j].degree() != 2) throw DegreeError("class representative must be a 2-form");
    if (!sym::d(c_rep[j]).is_zero()) throw ValidationError("class representative is not closed on chart " + cc.id);
    Form w = sym::wedge(c_rep[j], l.basis(j)[frame]);
    if (!sym::d(w).is_zero()) throw ValidationError("image is not closed on chart " + cc.id);
    if (!vanishes_on_leaves(cc, w)) throw ValidationError("image does not vanish on leaves on chart " + cc.id);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace twp::cohomo
