#include "mbp/weyr.hpp"

#include "mbp/error.hpp"

#include <algorithm>

namespace mbp {

int JordanBlocks::size() const {
  int s = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) s += int(j + 1) * blocks[j];
  return s;
}

int JordanBlocks::max_block() const {
  for (std::size_t j = blocks.size(); j-- > 0;)
    if (blocks[j] > 0) return int(j + 1);
  return 0;
}

int JordanData::size() const {
  int s = 0;
  for (const auto& e : eigen) s += e.size();
  return s;
}

namespace {

RatMatrix shifted(const RatMatrix& a, const Rational& lambda) {
  RatMatrix n = a;
  for (int i = 0; i < a.rows(); ++i) n(i, i) -= lambda;
  return n;
}

RatMatrix hcat(const std::vector<RatMatrix>& cols, int rows) {
  int total = 0;
  for (const auto& c : cols) total += c.cols();
  RatMatrix out(rows, total);
  int at = 0;
  for (const auto& c : cols) {
    out.set_block(0, at, c);
    at += c.cols();
  }
  return out;
}

RatMatrix column(const RatMatrix& m, int j) { return m.block(0, j, m.rows(), 1); }

}  // namespace

JordanData jordan_data(const RatMatrix& a) {
  if (!a.square()) throw Error("ShapeError", "jordan_data needs a square matrix");
  RootSplit split = rational_roots(characteristic_polynomial(a));
  if (split.cofactor.degree() > 0)
    throw Error("NonSplitSpectrum", "characteristic polynomial has no rational splitting",
                {{"factor", split.cofactor.monic().to_string("x")}});
  int n = a.rows();
  JordanData out;
  for (const auto& [lambda, mult] : split.roots) {
    RatMatrix nm = shifted(a, lambda);
    std::vector<int> nullity{0};
    RatMatrix p = RatMatrix::identity(n);
    for (int j = 1; j <= mult + 1; ++j) {
      p = p * nm;
      nullity.push_back(n - rank(p));
    }
    JordanBlocks jb{lambda, std::vector<int>(mult, 0)};
    for (int j = 1; j <= mult; ++j)
      jb.blocks[j - 1] = (nullity[j] - nullity[j - 1]) - (nullity[j + 1] - nullity[j]);
    while (!jb.blocks.empty() && jb.blocks.back() == 0) jb.blocks.pop_back();
    out.eigen.push_back(std::move(jb));
  }
  return out;
}

WeyrForm weyr_matrix(const JordanData& jd) {
  WeyrForm w;
  std::vector<RatMatrix> parts;
  for (const auto& e : jd.eigen) {
    WeyrBlock b{e.lambda, {}, {}};
    int d = e.max_block();
    for (int j = 1; j <= d; ++j) {
      int m = 0;
      for (int k = j; k <= d; ++k) m += e.blocks[k - 1];
      b.m.push_back(m);
    }
    int size = e.size();
    b.matrix = RatMatrix(size, size);
    int off = 0;
    for (std::size_t l = 0; l < b.m.size(); ++l) {
      for (int i = 0; i < b.m[l]; ++i) b.matrix(off + i, off + i) = e.lambda;
      if (l + 1 < b.m.size())
        for (int i = 0; i < b.m[l + 1]; ++i) b.matrix(off + i, off + b.m[l] + i) = 1;
      off += b.m[l];
    }
    parts.push_back(b.matrix);
    w.blocks.push_back(std::move(b));
  }
  w.matrix = RatMatrix(0, 0);
  for (const auto& p : parts) w.matrix = direct_sum(w.matrix, p);
  return w;
}

std::pair<WeyrForm, RatMatrix> weyr_canonical(const RatMatrix& a) {
  JordanData jd = jordan_data(a);
  WeyrForm w = weyr_matrix(jd);
  int n = a.rows();
  std::vector<RatMatrix> basis_cols;
  for (const auto& e : jd.eigen) {
    RatMatrix nm = shifted(a, e.lambda);
    int d = e.max_block();
    std::vector<RatMatrix> kernels(d + 1);
    kernels[0] = RatMatrix(n, 0);
    RatMatrix p = RatMatrix::identity(n);
    for (int j = 1; j <= d; ++j) {
      p = p * nm;
      kernels[j] = nullspace(p);
    }
    // chains[c] = vectors b_1..b_s with nm b_k = b_{k-1}.
    std::vector<std::vector<RatMatrix>> chains;
    for (int j = d; j >= 1; --j) {
      std::vector<RatMatrix> covered{kernels[j - 1]};
      for (const auto& ch : chains) covered.push_back(ch[j - 1]);
      RatMatrix u = hcat(covered, n);
      RatMatrix cand = hcat({u, kernels[j]}, n);
      RrefResult r = rref(cand);
      std::vector<RatMatrix> tops;
      // Pivots among the kernel columns pick the new chain tops.
      for (int pc : r.pivots)
        if (pc >= u.cols()) tops.push_back(column(cand, pc));
      for (const auto& top : tops) {
        std::vector<RatMatrix> ch(j);
        ch[j - 1] = top;
        for (int k = j - 1; k >= 1; --k) ch[k - 1] = nm * ch[k];
        chains.push_back(std::move(ch));
      }
    }
    // Chains are already sorted by size descending.
    for (int l = 1; l <= d; ++l)
      for (const auto& ch : chains)
        if (int(ch.size()) >= l) basis_cols.push_back(ch[l - 1]);
  }
  RatMatrix s = hcat(basis_cols, n);
  auto sinv = inverse(s);
  if (!sinv || !(*sinv * a * s == w.matrix))
    throw Error("InternalError", "Weyr similarity certificate failed");
  return {std::move(w), std::move(s)};
}

bool is_regular(const WeyrForm& w, const std::vector<Poly>& forbidden) {
  for (const auto& b : w.blocks)
    for (const auto& f : forbidden)
      if (is_zero(f.eval(b.lambda))) return false;
  return true;
}

JordanData jordan_of(const WeyrForm& w) {
  JordanData jd;
  for (const auto& b : w.blocks) {
    JordanBlocks jb{b.lambda, std::vector<int>(b.m.size(), 0)};
    for (std::size_t l = 0; l < b.m.size(); ++l)
      jb.blocks[l] = b.m[l] - (l + 1 < b.m.size() ? b.m[l + 1] : 0);
    jd.eigen.push_back(std::move(jb));
  }
  return jd;
}

}  // namespace mbp
