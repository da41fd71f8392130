#pragma once

#include "mbp/matrix.hpp"
#include "mbp/poly.hpp"

#include <utility>
#include <vector>

namespace mbp {

// Jordan blocks of one eigenvalue: blocks[j-1] = number of blocks J_j(lambda).
struct JordanBlocks {
  Rational lambda;
  std::vector<int> blocks;
  int size() const;      // sum of j * e_j
  int max_block() const; // largest j with e_j > 0
  friend bool operator==(const JordanBlocks&, const JordanBlocks&) = default;
};

// Eigenvalues distinct and sorted ascending.
struct JordanData {
  std::vector<JordanBlocks> eigen;
  int size() const;
  friend bool operator==(const JordanData&, const JordanData&) = default;
};

struct WeyrBlock {
  Rational lambda;
  std::vector<int> m;  // m_1 >= m_2 >= ... >= m_d
  RatMatrix matrix;
};

struct WeyrForm {
  std::vector<WeyrBlock> blocks;
  RatMatrix matrix;  // direct sum of the blocks in ascending eigenvalue order
};

JordanData jordan_data(const RatMatrix& a);
WeyrForm weyr_matrix(const JordanData& j);
// W with s^{-1} a s = W.
std::pair<WeyrForm, RatMatrix> weyr_canonical(const RatMatrix& a);
bool is_regular(const WeyrForm& w, const std::vector<Poly>& forbidden);
// Jordan data read off a Weyr form.
JordanData jordan_of(const WeyrForm& w);

}  // namespace mbp
