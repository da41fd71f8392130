#include "mbp/matrix.hpp"

#include "mbp/error.hpp"

#include <algorithm>
#include <sstream>

namespace mbp {

bool position_leq(Pos p, Pos q) {
  if (p.row != q.row) return p.row > q.row;
  return p.col <= q.col;
}

bool position_less(Pos p, Pos q) { return position_leq(p, q) && !(p == q); }

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = int(rows.size());
  cols_ = rows_ ? int(rows.begin()->size()) : 0;
  data_.reserve(std::size_t(rows_) * cols_);
  for (const auto& r : rows) {
    if (int(r.size()) != cols_) throw Error("ShapeError", "ragged matrix literal");
    for (const auto& v : r) data_.push_back(v);
  }
}

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RatMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& v) { return mbp::is_zero(v); });
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RatMatrix RatMatrix::block(int r0, int c0, int rows, int cols) const {
  RatMatrix b(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void RatMatrix::set_block(int r0, int c0, const RatMatrix& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

void RatMatrix::add_block(int r0, int c0, const RatMatrix& b, const Rational& scale) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      if (!mbp::is_zero(b(i, j))) (*this)(r0 + i, c0 + j) += scale * b(i, j);
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("ShapeError", "matrix sum shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

RatMatrix& RatMatrix::operator-=(const RatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("ShapeError", "matrix difference shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

RatMatrix& RatMatrix::operator*=(const Rational& s) {
  for (auto& v : data_) v *= s;
  return *this;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw Error("ShapeError", "matrix product shape mismatch");
  RatMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const Rational& x = a(i, k);
      if (is_zero(x)) continue;
      for (int j = 0; j < b.cols_; ++j)
        if (!is_zero(b(k, j))) c(i, j) += x * b(k, j);
    }
  return c;
}

RatMatrix RatMatrix::power(int e) const {
  RatMatrix r = identity(rows_);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

std::string RatMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << mbp::to_string((*this)(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

RrefResult rref(const RatMatrix& m) {
  RrefResult res{m, {}, RatMatrix::identity(m.rows())};
  RatMatrix& a = res.reduced;
  RatMatrix& t = res.transform;
  int row = 0;
  for (int col = 0; col < a.cols() && row < a.rows(); ++col) {
    int piv = -1;
    for (int i = row; i < a.rows(); ++i)
      if (!is_zero(a(i, col))) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
    if (piv != row)
      for (int j = 0; j < t.cols(); ++j) std::swap(t(piv, j), t(row, j));
    Rational inv = 1 / a(row, col);
    for (int j = 0; j < a.cols(); ++j) a(row, j) *= inv;
    for (int j = 0; j < t.cols(); ++j) t(row, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == row || is_zero(a(i, col))) continue;
      Rational f = a(i, col);
      for (int j = 0; j < a.cols(); ++j)
        if (!is_zero(a(row, j))) a(i, j) -= f * a(row, j);
      for (int j = 0; j < t.cols(); ++j)
        if (!is_zero(t(row, j))) t(i, j) -= f * t(row, j);
    }
    res.pivots.push_back(col);
    ++row;
  }
  return res;
}

int rank(const RatMatrix& m) { return int(rref(m).pivots.size()); }

RatMatrix nullspace(const RatMatrix& m) {
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int p : r.pivots) is_pivot[p] = true;
  std::vector<int> free;
  for (int j = 0; j < m.cols(); ++j)
    if (!is_pivot[j]) free.push_back(j);
  RatMatrix ns(m.cols(), int(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    ns(free[k], int(k)) = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) ns(r.pivots[i], int(k)) = -r.reduced(int(i), free[k]);
  }
  return ns;
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (!m.square()) return std::nullopt;
  RrefResult r = rref(m);
  if (int(r.pivots.size()) != m.rows()) return std::nullopt;
  return r.transform;
}

RatMatrix direct_sum(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix s(a.rows() + b.rows(), a.cols() + b.cols());
  s.set_block(0, 0, a);
  s.set_block(a.rows(), a.cols(), b);
  return s;
}

std::vector<Pos> ordered_positions(int rows, int cols) {
  std::vector<Pos> out;
  out.reserve(std::size_t(rows) * cols);
  for (int i = rows - 1; i >= 0; --i)
    for (int j = 0; j < cols; ++j) out.push_back({i, j});
  return out;
}

std::optional<std::pair<Pos, Rational>> leading_entry(const RatMatrix& m) {
  for (Pos p : ordered_positions(m.rows(), m.cols()))
    if (!is_zero(m(p.row, p.col))) return std::make_pair(p, m(p.row, p.col));
  return std::nullopt;
}

std::vector<NormalizedElement> normalized_basis(const std::vector<RatMatrix>& spanning) {
  if (spanning.empty()) return {};
  int rows = spanning[0].rows(), cols = spanning[0].cols();
  std::vector<Pos> order = ordered_positions(rows, cols);
  RatMatrix coords(int(spanning.size()), int(order.size()));
  for (std::size_t k = 0; k < spanning.size(); ++k) {
    if (spanning[k].rows() != rows || spanning[k].cols() != cols)
      throw Error("ShapeError", "normalized_basis requires a common shape");
    for (std::size_t c = 0; c < order.size(); ++c)
      coords(int(k), int(c)) = spanning[k](order[c].row, order[c].col);
  }
  RrefResult r = rref(coords);
  std::vector<NormalizedElement> out;
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    RatMatrix u(rows, cols);
    for (std::size_t c = 0; c < order.size(); ++c) u(order[c].row, order[c].col) = r.reduced(int(i), int(c));
    out.push_back({std::move(u), order[r.pivots[i]]});
  }
  return out;
}

}  // namespace mbp
