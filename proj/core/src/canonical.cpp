#include "mbp/canonical.hpp"

#include "mbp/error.hpp"

#include <algorithm>
#include <numeric>

namespace mbp {

namespace {

Morphism identity_morphism(const Problem& p, const Representation& rep) {
  Morphism f;
  for (std::size_t c = 0; c < p.classes.size(); ++c) f.e.push_back(RatMatrix::identity(rep.sizes[c]));
  for (const auto& v : p.dotted) f.v.emplace_back(rep.sizes[v.source], rep.sizes[v.target]);
  return f;
}

// Columns of `base` extended by unit vectors to a basis of k^n.
RatMatrix extend_to_basis(const RatMatrix& base, int n) {
  std::vector<RatMatrix> cols;
  for (int j = 0; j < base.cols(); ++j) cols.push_back(base.block(0, j, n, 1));
  auto assemble = [&](const std::vector<RatMatrix>& cs) {
    RatMatrix m(n, int(cs.size()));
    for (std::size_t j = 0; j < cs.size(); ++j) m.set_block(0, int(j), cs[j]);
    return m;
  };
  int r = rank(assemble(cols));
  for (int i = 0; i < n && r < n; ++i) {
    RatMatrix e(n, 1);
    e(i, 0) = 1;
    cols.push_back(e);
    int r2 = rank(assemble(cols));
    if (r2 > r)
      r = r2;
    else
      cols.pop_back();
  }
  return assemble(cols);
}

std::optional<AutoStep> finish(const Problem& p, const Representation& rep, StepResult r, const Morphism& f,
                               const std::vector<int>& sizes) {
  RatMatrix big = rep_matrix(p, rep);
  RatMatrix fm = morphism_matrix(p, rep, rep, f);
  auto fi = inverse(fm);
  if (!fi) throw Error("Internal", "reduction base change is singular");
  RatMatrix moved = *fi * big * fm;
  Representation nr = rep_from_matrix(r.problem, sizes, {}, moved);
  if (!(rep_matrix(r.problem, nr) == moved)) return std::nullopt;
  AutoStep out;
  out.step = std::move(r.step);
  out.problem = std::move(r.problem);
  out.rep = std::move(nr);
  out.iso = f;
  out.iso_matrix = std::move(fm);
  return out;
}

}  // namespace

AutoStep reduce_step_auto(const Problem& p, const Representation& rep) {
  if (!p.all_trivial()) throw Error("Unsupported", "automatic reduction needs trivial classes");
  check_representation(p, rep);
  int nc = int(p.classes.size());

  std::vector<int> kept;
  for (int c = 0; c < nc; ++c)
    if (rep.sizes[c] > 0) kept.push_back(c);
  if (int(kept.size()) < nc) {
    StepResult r = deletion(p, kept);
    std::vector<int> sizes;
    for (int c : kept) sizes.push_back(rep.sizes[c]);
    auto out = finish(p, rep, std::move(r), identity_morphism(p, rep), sizes);
    if (!out) throw Error("Internal", "deletion changed the representation");
    return *out;
  }
  if (p.solid.empty()) throw Error("PreconditionFailed", "the problem is minimal");

  const auto& a1 = p.solid[0];
  int x = a1.source, y = a1.target;
  const RatMatrix& pa = rep.values[0];
  Differential d = differential(p, 0);

  if (!d.is_zero()) {
    int piv = -1;
    for (std::size_t k = 0; k < d.linear.size() && piv < 0; ++k)
      if (d.linear[k].coeff.is_constant() && !is_zero(d.linear[k].coeff.constant_term())) piv = int(k);
    if (piv < 0) {
      regularization(p);  // throws NotRegularizable with the payload
      throw Error("Internal", "regularization pivot disagreement");
    }
    StepResult r = regularization(p);
    Rational c = d.linear[piv].coeff.constant_term();
    int vp = d.linear[piv].dotted;
    for (int sign : {1, -1}) {
      Morphism f = identity_morphism(p, rep);
      f.v[vp] = pa * (Rational(sign) / c);
      auto out = finish(p, rep, r, f, rep.sizes);
      if (out) {
        out->step.b = RatMatrix();
        out->step.info["empty_block"] = {rep.sizes[x], rep.sizes[y]};
        return *out;
      }
    }
    throw Error("Internal", "regularization did not clear the first block");
  }

  if (x != y) {
    int mx = rep.sizes[x], my = rep.sizes[y];
    int rk = rank(pa);
    RatMatrix ker = nullspace(pa);
    RatMatrix fy = extend_to_basis(ker, my);
    RatMatrix pc = pa * fy.block(0, my - rk, my, rk);
    RatMatrix fx = extend_to_basis(pc, mx);
    StepResult r = edge_reduction(p, rk, mx, my);
    std::vector<int> sizes = induced_sizes(r.step, rep.sizes);
    Morphism f = identity_morphism(p, rep);
    f.e[x] = fx;
    f.e[y] = fy;
    auto out = finish(p, rep, std::move(r), f, sizes);
    if (!out) throw Error("Internal", "edge reduction did not reach the rank normal form");
    return *out;
  }

  JordanData jd = jordan_data(pa);
  auto [w, s] = weyr_canonical(pa);
  StepResult r = loop_reduction(p, jd);
  std::vector<int> sizes = induced_sizes(r.step, rep.sizes);
  Morphism f = identity_morphism(p, rep);
  f.e[x] = s;
  auto out = finish(p, rep, std::move(r), f, sizes);
  if (!out) throw Error("Internal", "loop reduction did not reach the Weyr form");
  return *out;
}

CanonicalForm canonical_form(const Problem& p, const Representation& rep) {
  CanonicalForm cf;
  cf.sizes = rep.sizes;
  Problem cur = p;
  Representation r = rep;
  for (;;) {
    bool sincere = std::all_of(r.sizes.begin(), r.sizes.end(), [](int m) { return m > 0; });
    if (sincere && cur.solid.empty()) break;
    AutoStep s = reduce_step_auto(cur, r);
    cf.links += s.step.links;
    cf.trace.push_back(std::move(s.step));
    cur = std::move(s.problem);
    r = std::move(s.rep);
  }
  cf.terminal = cur;
  cf.terminal_sizes = r.sizes;
  Representation back = r;
  for (auto it = cf.trace.rbegin(); it != cf.trace.rend(); ++it) back = transport_rep(*it, back);
  cf.matrix = rep_matrix(p, back);
  return cf;
}

int links(const CanonicalForm& cf) {
  int n = 0;
  for (const auto& s : cf.trace) n += s.links;
  return n;
}

int rep_dimension(const Representation& rep) { return std::accumulate(rep.sizes.begin(), rep.sizes.end(), 0); }

bool isomorphic(const Problem& p, const Representation& a, const Representation& b) {
  if (a.sizes != b.sizes) return false;
  return canonical_form(p, a).matrix == canonical_form(p, b).matrix;
}

bool indecomposable(const Problem& p, const Representation& rep) {
  int dim = rep_dimension(rep);
  if (dim == 0) throw Error("PreconditionFailed", "the zero representation is not indecomposable");
  return links(canonical_form(p, rep)) == dim - 1;
}

bool same_structure(const Problem& a, const Problem& b) {
  if (a.size() != b.size() || a.class_of != b.class_of || a.classes.size() != b.classes.size()) return false;
  for (std::size_t c = 0; c < a.classes.size(); ++c)
    if (a.classes[c].nontrivial != b.classes[c].nontrivial) return false;
  if (!(a.h == b.h) || a.solid.size() != b.solid.size()) return false;
  for (std::size_t i = 0; i < a.solid.size(); ++i)
    if (!(a.solid[i].entries == b.solid[i].entries)) return false;
  return true;
}

ReductionTrace replay_sequence(const Problem& p, const Problem& target) {
  if (!p.all_trivial() || !target.all_trivial()) throw Error("Unsupported", "replay needs trivial classes");
  for (int i = 0; i < p.size(); ++i)
    if (p.origin.size() != std::size_t(p.size()) || p.origin[i] != i)
      throw Error("PreconditionFailed", "replay starts from a root problem");
  std::vector<int> m = unit_root_sizes(p, target);
  std::vector<int> ones(target.classes.size(), 1);
  RatMatrix goal = rep_matrix(target, zero_representation(target, ones));
  Representation r = rep_from_matrix(p, m, {}, goal);
  if (!(rep_matrix(p, r) == goal)) throw Error("Unreachable", "H of the target is not a representation of the problem");
  ReductionTrace trace;
  Problem cur = p;
  for (;;) {
    bool unit = std::all_of(r.sizes.begin(), r.sizes.end(), [](int s) { return s == 1; });
    if (unit && same_structure(cur, target)) return trace;
    bool sincere = std::all_of(r.sizes.begin(), r.sizes.end(), [](int s) { return s > 0; });
    if (sincere && cur.solid.empty()) throw Error("Unreachable", "the canonical sequence ends before the target");
    AutoStep s = reduce_step_auto(cur, r);
    trace.push_back(std::move(s.step));
    cur = std::move(s.problem);
    r = std::move(s.rep);
  }
}

}  // namespace mbp
