#pragma once

#include "mbp/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mbp {

// Zero-based matrix position.
struct Pos {
  int row = 0;
  int col = 0;
  friend bool operator==(const Pos&, const Pos&) = default;
};

// The position order: (i,j) precedes (i',j') iff i > i', or i = i' and j <= j'.
bool position_leq(Pos p, Pos q);
// Strict version of position_leq.
bool position_less(Pos p, Pos q);

// Dense matrix over the rationals, row-major.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RatMatrix identity(int n);
  static RatMatrix zero(int rows, int cols) { return RatMatrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rational& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }

  bool is_zero() const;
  RatMatrix transpose() const;
  RatMatrix block(int r0, int c0, int rows, int cols) const;
  void set_block(int r0, int c0, const RatMatrix& b);
  void add_block(int r0, int c0, const RatMatrix& b, const Rational& scale = 1);

  RatMatrix& operator+=(const RatMatrix& o);
  RatMatrix& operator-=(const RatMatrix& o);
  RatMatrix& operator*=(const Rational& s);

  friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
  friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
  friend RatMatrix operator*(RatMatrix a, const Rational& s) { return a *= s; }
  friend RatMatrix operator*(const Rational& s, RatMatrix a) { return a *= s; }
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  RatMatrix power(int e) const;
  std::string to_string() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

struct RrefResult {
  RatMatrix reduced;
  std::vector<int> pivots;  // pivot column per nonzero row
  RatMatrix transform;      // invertible, transform * input = reduced
};

RrefResult rref(const RatMatrix& m);
int rank(const RatMatrix& m);
// Columns form a basis of the right kernel.
RatMatrix nullspace(const RatMatrix& m);
std::optional<RatMatrix> inverse(const RatMatrix& m);
RatMatrix direct_sum(const RatMatrix& a, const RatMatrix& b);

// Position order smallest nonzero entry.
std::optional<std::pair<Pos, Rational>> leading_entry(const RatMatrix& m);

struct NormalizedElement {
  RatMatrix matrix;
  Pos lead;
};

// Unique basis of the span with unit, exclusive leading entries in position order.
std::vector<NormalizedElement> normalized_basis(const std::vector<RatMatrix>& spanning);

// All positions of a rows x cols grid sorted by position_leq.
std::vector<Pos> ordered_positions(int rows, int cols);

}  // namespace mbp
