#include "support.hpp"

#include "mbp/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mbp::testing {

std::string fixture_path(const std::string& name) { return std::string(MBP_FIXTURE_DIR) + "/" + name; }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BasedAlgebra two_loop_algebra() { return build_based_algebra(parse_presentation(read_text(fixture_path("ex145.quiver")))); }

Problem two_loop_problem() { return build_bipartite_problem(two_loop_algebra()); }

WorkedReplay worked_replay() {
  WorkedReplay e;
  e.root = two_loop_problem();
  e.after_edge = edge_reduction(e.root, 1, 1, 1).problem;
  JordanData jd;
  jd.eigen.push_back({Rational(0), {0, 1}});
  e.after_loop = loop_reduction(e.after_edge, jd).problem;
  e.after_mutation = loop_mutation(e.after_loop).problem;
  Problem cur = e.after_mutation;
  for (int k = 0; k < 3; ++k) {
    StepResult r = regularization(cur);
    e.regularizations.push_back(r.step);
    cur = r.problem;
  }
  e.after_regularizations = cur;
  return e;
}

Problem a2_problem() { return quiver_problem(Quiver{{"1", "2"}, {{"a", 0, 1}}}); }
Problem a3_problem() { return quiver_problem(Quiver{{"1", "2", "3"}, {{"a", 0, 1}, {"b", 1, 2}}}); }
Problem loop_problem() { return quiver_problem(Quiver{{"1"}, {{"a", 0, 0}}}); }

RatMatrix random_matrix(std::mt19937& g, int rows, int cols, const std::vector<int>& entries) {
  std::uniform_int_distribution<std::size_t> d(0, entries.size() - 1);
  RatMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = entries[d(g)];
  return m;
}

RatMatrix random_invertible(std::mt19937& g, int n, const std::vector<int>& entries) {
  for (;;) {
    RatMatrix m = random_matrix(g, n, n, entries);
    if (rank(m) == n) return m;
  }
}

Representation random_rep(std::mt19937& g, const Problem& p, const std::vector<int>& sizes, const std::vector<int>& entries) {
  Representation r = zero_representation(p, sizes);
  for (auto& v : r.values) v = random_matrix(g, v.rows(), v.cols(), entries);
  return r;
}

Morphism random_base_change(std::mt19937& g, const Problem& p, const Representation& r, const std::vector<int>& entries) {
  Morphism f;
  for (std::size_t c = 0; c < p.classes.size(); ++c) f.e.push_back(random_invertible(g, r.sizes[c], entries));
  for (const auto& v : p.dotted) f.v.push_back(random_matrix(g, r.sizes[v.source], r.sizes[v.target], entries));
  return f;
}

Representation conjugate(const Problem& p, const Representation& r, const Morphism& f) {
  RatMatrix fm = morphism_matrix(p, r, r, f);
  RatMatrix moved = *inverse(fm) * rep_matrix(p, r) * fm;
  Representation out = rep_from_matrix(p, r.sizes, r.weyr, moved);
  if (!(rep_matrix(p, out) == moved)) throw std::runtime_error("conjugate left the representation space");
  return out;
}

Representation direct_sum(const Problem& p, const Representation& a, const Representation& b) {
  std::vector<int> sizes;
  for (std::size_t c = 0; c < a.sizes.size(); ++c) sizes.push_back(a.sizes[c] + b.sizes[c]);
  Representation r = zero_representation(p, sizes);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = mbp::direct_sum(a.values[i], b.values[i]);
  return r;
}

std::vector<RatMatrix> endomorphism_basis(const Problem& p, const Representation& r) {
  RatMatrix big = rep_matrix(p, r);
  int n = big.rows();
  Morphism zero;
  for (std::size_t c = 0; c < p.classes.size(); ++c) zero.e.emplace_back(r.sizes[c], r.sizes[c]);
  for (const auto& v : p.dotted) zero.v.emplace_back(r.sizes[v.source], r.sizes[v.target]);
  std::vector<RatMatrix> units;
  auto add_unit = [&](RatMatrix& slot) {
    for (int i = 0; i < slot.rows(); ++i)
      for (int j = 0; j < slot.cols(); ++j) {
        slot(i, j) = 1;
        units.push_back(morphism_matrix(p, r, r, zero));
        slot(i, j) = 0;
      }
  };
  for (auto& e : zero.e) add_unit(e);
  for (auto& v : zero.v) add_unit(v);
  RatMatrix eq(n * n, int(units.size()));
  for (std::size_t u = 0; u < units.size(); ++u) {
    RatMatrix c = big * units[u] - units[u] * big;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) eq(i * n + j, int(u)) = c(i, j);
  }
  RatMatrix ns = nullspace(eq);
  std::vector<RatMatrix> out;
  for (int k = 0; k < ns.cols(); ++k) {
    RatMatrix f(n, n);
    for (std::size_t u = 0; u < units.size(); ++u)
      if (!is_zero(ns(int(u), k))) f += units[u] * ns(int(u), k);
    out.push_back(f);
  }
  return out;
}

namespace {

// Basis of the span of the given matrices, by incremental echelon reduction of their entries.
std::vector<RatMatrix> span_basis(const std::vector<RatMatrix>& ms) {
  std::vector<RatMatrix> out;
  std::vector<std::vector<Rational>> echelon;
  std::vector<std::size_t> pivots;
  for (const auto& m : ms) {
    std::vector<Rational> v;
    v.reserve(std::size_t(m.rows() * m.cols()));
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      if (is_zero(v[pivots[k]])) continue;
      Rational f = v[pivots[k]];
      for (std::size_t x = 0; x < v.size(); ++x)
        if (!is_zero(echelon[k][x])) v[x] -= f * echelon[k][x];
    }
    auto nz = std::find_if(v.begin(), v.end(), [](const Rational& q) { return !is_zero(q); });
    if (nz == v.end()) continue;
    Rational inv = 1 / *nz;
    for (auto& q : v) q *= inv;
    pivots.push_back(std::size_t(nz - v.begin()));
    echelon.push_back(std::move(v));
    out.push_back(m);
  }
  return out;
}

RatMatrix columns_of(const RatMatrix& m) {
  // Basis of the column space.
  RatMatrix t = rref(m.transpose()).reduced;
  int r = rank(m);
  return t.block(0, 0, r, t.cols()).transpose();
}

std::optional<RatMatrix> fitting_idempotent(const RatMatrix& psi) {
  int n = psi.rows();
  RatMatrix q = psi.power(n);
  int r = rank(q);
  if (r == 0 || r == n) return std::nullopt;
  RatMatrix im = columns_of(q);
  RatMatrix ker = nullspace(q);
  RatMatrix b(n, n);
  b.set_block(0, 0, im);
  b.set_block(0, im.cols(), ker);
  RatMatrix d(n, n);
  for (int i = 0; i < im.cols(); ++i) d(i, i) = 1;
  return b * d * *inverse(b);
}

}  // namespace

OracleVerdict idempotent_oracle(const Problem& p, const Representation& r) {
  RatMatrix big = rep_matrix(p, r);
  int n = big.rows();
  auto basis = endomorphism_basis(p, r);
  RatMatrix id = RatMatrix::identity(n);
  std::vector<RatMatrix> traceless;
  for (const auto& f : basis) {
    Rational tr = 0;
    for (int i = 0; i < n; ++i) tr += f(i, i);
    traceless.push_back(f - id * (tr / n));
  }
  std::vector<RatMatrix> power = span_basis(traceless);
  bool local = true;
  for (int k = 1; !power.empty(); ++k) {
    if (k > n) {
      local = false;
      break;
    }
    std::vector<RatMatrix> next;
    for (const auto& a : power)
      for (const auto& b : traceless) next.push_back(a * b);
    power = span_basis(next);
  }
  OracleVerdict v;
  v.indecomposable = local;
  if (local) return v;
  std::mt19937 g(12345);
  std::vector<RatMatrix> candidates = basis;
  for (int t = 0; t < 64; ++t) {
    RatMatrix c(n, n);
    for (const auto& f : basis) c += f * Rational(int(g() % 7) - 3);
    candidates.push_back(c);
  }
  for (const auto& phi : candidates) {
    RootSplit roots = rational_roots(characteristic_polynomial(phi));
    std::vector<Rational> shifts{Rational(0)};
    for (const auto& [l, mult] : roots.roots) shifts.push_back(l);
    for (const auto& l : shifts)
      if (auto e = fitting_idempotent(phi - id * l)) {
        if (!(big * *e == *e * big) || !(*e * *e == *e)) throw std::runtime_error("Fitting projection is not an idempotent endomorphism");
        v.idempotent = *e;
        return v;
      }
  }
  throw std::runtime_error("endomorphism algebra is not split local and no idempotent was found");
}

std::vector<int> weyr_sequence_by_ranks(const RatMatrix& a, const Rational& lambda) {
  int n = a.rows();
  RatMatrix b = a - RatMatrix::identity(n) * lambda;
  std::vector<int> m;
  int prev = n;
  RatMatrix pw = RatMatrix::identity(n);
  for (int k = 1; k <= n; ++k) {
    pw = pw * b;
    int r = rank(pw);
    if (prev - r == 0) break;
    m.push_back(prev - r);
    prev = r;
  }
  return m;
}

RatMatrix jordan_matrix(const std::vector<std::pair<Rational, std::vector<int>>>& blocks) {
  int n = 0;
  for (const auto& [l, sizes] : blocks)
    for (int s : sizes) n += s;
  RatMatrix j(n, n);
  int off = 0;
  for (const auto& [l, sizes] : blocks)
    for (int s : sizes) {
      for (int i = 0; i < s; ++i) {
        j(off + i, off + i) = l;
        if (i + 1 < s) j(off + i, off + i + 1) = 1;
      }
      off += s;
    }
  return j;
}

std::vector<RatMatrix> all_01_matrices(int rows, int cols) {
  int cells = rows * cols;
  std::vector<RatMatrix> out;
  for (long mask = 0; mask < (1L << cells); ++mask) {
    RatMatrix m(rows, cols);
    for (int k = 0; k < cells; ++k)
      if (mask >> k & 1) m(k / cols, k % cols) = 1;
    out.push_back(m);
  }
  return out;
}

}  // namespace mbp::testing
