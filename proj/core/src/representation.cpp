#include "mbp/error.hpp"
#include "mbp/problem.hpp"

namespace mbp {

std::vector<int> block_offsets(const Problem& p, const std::vector<int>& sizes) {
  std::vector<int> off(p.size() + 1, 0);
  for (int i = 0; i < p.size(); ++i) off[i + 1] = off[i] + sizes.at(p.class_of[i]);
  return off;
}

Representation zero_representation(const Problem& p, const std::vector<int>& sizes, const std::vector<RatMatrix>& weyr) {
  Representation r;
  r.sizes = sizes;
  r.weyr = weyr;
  r.weyr.resize(p.classes.size());
  for (std::size_t c = 0; c < p.classes.size(); ++c)
    if (p.classes[c].nontrivial && r.weyr[c].rows() != sizes[c]) r.weyr[c] = RatMatrix(sizes[c], sizes[c]);
  for (const auto& a : p.solid) r.values.emplace_back(sizes[a.source], sizes[a.target]);
  return r;
}

void check_representation(const Problem& p, const Representation& r) {
  if (r.sizes.size() != p.classes.size() || r.values.size() != p.solid.size() || r.weyr.size() != p.classes.size())
    throw Error("ShapeError", "representation does not match the problem");
  for (std::size_t c = 0; c < p.classes.size(); ++c) {
    if (r.sizes[c] < 0) throw Error("ShapeError", "negative size");
    if (!p.classes[c].nontrivial) continue;
    const RatMatrix& w = r.weyr[c];
    if (w.rows() != r.sizes[c] || w.cols() != r.sizes[c])
      throw Error("ShapeError", "Weyr part of " + p.classes[c].name + " has the wrong size");
    for (const auto& f : p.classes[c].forbidden)
      if (r.sizes[c] > 0 && !inverse(f.eval(w)))
        throw Error("NonRegular", "Weyr part of " + p.classes[c].name + " meets a forbidden root",
                    {{"class", p.classes[c].name}});
  }
  for (std::size_t i = 0; i < p.solid.size(); ++i) {
    const auto& a = p.solid[i];
    if (r.values[i].rows() != r.sizes[a.source] || r.values[i].cols() != r.sizes[a.target])
      throw Error("ShapeError", "value of " + a.name + " has the wrong shape");
  }
}

namespace {

RatMatrix h_block(const Problem& p, const Representation& r, const HEntry& e) {
  int c = p.class_of[e.row];
  int m = r.sizes[c];
  if (p.classes[c].nontrivial) return e.value.eval(r.weyr[c]);
  return RatMatrix::identity(m) * e.value.coeff(0);
}

}  // namespace

RatMatrix rep_matrix(const Problem& p, const Representation& r) {
  check_representation(p, r);
  auto off = block_offsets(p, r.sizes);
  RatMatrix big(off.back(), off.back());
  for (const auto& e : p.h) big.add_block(off[e.row], off[e.col], h_block(p, r, e));
  for (std::size_t i = 0; i < p.solid.size(); ++i)
    for (const auto& e : p.solid[i].entries) big.add_block(off[e.row], off[e.col], r.values[i], e.value);
  return big;
}

Representation rep_from_matrix(const Problem& p, const std::vector<int>& sizes, const std::vector<RatMatrix>& weyr,
                               const RatMatrix& big) {
  Representation r = zero_representation(p, sizes, weyr);
  auto off = block_offsets(p, sizes);
  if (big.rows() != off.back() || big.cols() != off.back())
    throw Error("ShapeError", "partitioned matrix has the wrong size");
  for (std::size_t i = 0; i < p.solid.size(); ++i) {
    const auto& a = p.solid[i];
    RatMatrix b = big.block(off[a.lead.row], off[a.lead.col], sizes[a.source], sizes[a.target]);
    for (const auto& e : p.h)
      if (Pos{e.row, e.col} == a.lead) b -= h_block(p, r, e);
    r.values[i] = std::move(b);
  }
  return r;
}

RatMatrix morphism_matrix(const Problem& p, const Representation& src, const Representation& dst, const Morphism& f) {
  if (f.e.size() != p.classes.size() || f.v.size() != p.dotted.size())
    throw Error("ShapeError", "morphism does not match the problem");
  auto ro = block_offsets(p, src.sizes);
  auto co = block_offsets(p, dst.sizes);
  RatMatrix big(ro.back(), co.back());
  for (int i = 0; i < p.size(); ++i) {
    int c = p.class_of[i];
    const RatMatrix& b = f.e[c];
    if (b.rows() != src.sizes[c] || b.cols() != dst.sizes[c])
      throw Error("ShapeError", "morphism block of " + p.classes[c].name + " has the wrong shape");
    big.set_block(ro[i], co[i], b);
  }
  auto param = [&](const Representation& r, int c) {
    return p.classes[c].nontrivial ? r.weyr[c] : RatMatrix::identity(r.sizes[c]);
  };
  for (std::size_t j = 0; j < p.dotted.size(); ++j) {
    const auto& d = p.dotted[j];
    const RatMatrix& b = f.v[j];
    if (b.rows() != src.sizes[d.source] || b.cols() != dst.sizes[d.target])
      throw Error("ShapeError", "morphism value of " + d.name + " has the wrong shape");
    for (const auto& e : d.entries)
      big.add_block(ro[e.row], co[e.col], localized_apply(e.value, param(src, d.source), b, param(dst, d.target)));
  }
  return big;
}

bool is_morphism(const Problem& p, const Representation& src, const Representation& dst, const Morphism& f) {
  for (std::size_t c = 0; c < p.classes.size(); ++c)
    if (p.classes[c].nontrivial && !(src.weyr[c] * f.e[c] == f.e[c] * dst.weyr[c])) return false;
  RatMatrix m = morphism_matrix(p, src, dst, f);
  return rep_matrix(p, src) * m == m * rep_matrix(p, dst);
}

}  // namespace mbp
