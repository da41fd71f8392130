#pragma once

#include "mbp/problem.hpp"

#include <map>
#include <string>
#include <vector>

namespace mbp {

struct Arrow {
  std::string name;
  int source = 0;
  int target = 0;
};

struct Quiver {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;
  int vertex_index(const std::string& name) const;  // -1 when absent
  int arrow_index(const std::string& name) const;   // -1 when absent
};

// Sequence of arrow indices, composed left to right.
using Path = std::vector<int>;

struct PathTerm {
  Rational coeff;
  Path path;
};

struct Relation {
  std::vector<PathTerm> terms;
  int line = 0;
};

struct AlgebraPresentation {
  Quiver quiver;
  std::vector<Relation> relations;
  int nilpotency = 0;          // J^nilpotency = 0; 0 means unset
  std::vector<Path> basis;     // optional explicit radical basis, empty for the default choice
};

// Parses the line-oriented quiver format; ';' also separates statements, '#' starts a comment.
AlgebraPresentation parse_presentation(const std::string& text);

struct BasisElement {
  std::string label;
  Path path;         // empty for idempotents
  int vertex = -1;   // idempotents only
  int source = 0;    // start vertex
  int target = 0;    // end vertex
  int layer = 0;     // radical layer, 0 for idempotents
};

using SparseVec = std::map<int, Rational>;

struct BasedAlgebra {
  Quiver quiver;
  std::vector<BasisElement> basis;             // radical by descending layer, then idempotents
  std::vector<std::vector<SparseVec>> product; // product[i][j] = b_i b_j in basis coordinates
  int radical_dim() const;
  int dim() const { return int(basis.size()); }
  std::string label(const SparseVec& v) const;
};

BasedAlgebra build_based_algebra(const AlgebraPresentation& p);

// Entry (i, j) is the element whose b_k coefficient is the coefficient of b_i in b_k b_j.
using LabelMatrix = std::vector<std::vector<SparseVec>>;
LabelMatrix regular_representation(const BasedAlgebra& a);
// Matrix of left multiplication by basis element k.
RatMatrix left_multiplication(const BasedAlgebra& a, int k);
std::string render_label_matrix(const BasedAlgebra& a, const LabelMatrix& m);

// Bipartite problem: left copy of the regular representation acts on the left of M_1 = rad.
Problem build_bipartite_problem(const BasedAlgebra& a);

struct RdccReport {
  bool distinct_rows = true;
  bool concentrated = true;
  bool ok() const { return distinct_rows && concentrated; }
  std::vector<std::string> messages;
};
RdccReport check_rdcc(const Problem& p);

// Representations of the quiver itself: per arrow a row index in the source class and a column
// index in the target class, one solid element E_{row,col}, no dotted part.
Problem quiver_problem(const Quiver& q);

}  // namespace mbp
