#pragma once

#include "mbp/matrix.hpp"
#include "mbp/poly.hpp"

#include <map>
#include <string>
#include <vector>

namespace mbp {

// One class of the index partition: trivial (ring k) or k[x] localized at the forbidden factors.
struct VertexClass {
  std::string name;
  bool nontrivial = false;
  std::vector<Poly> forbidden;  // monic
  std::string param;            // variable name, nontrivial classes only
  friend bool operator==(const VertexClass&, const VertexClass&) = default;
};

// Entry of a dotted basis matrix: an element of R_row (x) R_col.
struct DottedEntry {
  int row = 0;
  int col = 0;
  LocalizedElem value{2};
  friend bool operator==(const DottedEntry&, const DottedEntry&) = default;
};

// Basis matrix V_j of K_1, strictly upper, inside E_source N E_target.
struct DottedElement {
  std::string name;
  int source = 0;
  int target = 0;
  std::vector<DottedEntry> entries;  // sorted by (row, col)
  friend bool operator==(const DottedElement&, const DottedElement&) = default;
};

struct SolidEntry {
  int row = 0;
  int col = 0;
  Rational value;
  friend bool operator==(const SolidEntry&, const SolidEntry&) = default;
};

// Basis matrix A_i of M_1 with scalar entries.
struct SolidElement {
  std::string name;
  int source = 0;
  int target = 0;
  std::vector<SolidEntry> entries;  // sorted by (row, col)
  Pos lead;
  friend bool operator==(const SolidElement&, const SolidElement&) = default;
};

// Entry of H, a polynomial of degree at most one in the parameter of its class.
struct HEntry {
  int row = 0;
  int col = 0;
  Poly value;
  friend bool operator==(const HEntry&, const HEntry&) = default;
};

// A matrix bi-module problem (R, K, M, H). E-basis: one idempotent matrix per class.
struct Problem {
  std::vector<VertexClass> classes;
  std::vector<int> class_of;  // per index
  std::vector<int> origin;    // per index: index of the root problem it descends from
  std::vector<DottedElement> dotted;
  std::vector<SolidElement> solid;
  std::vector<HEntry> h;  // sorted by (row, col)

  int size() const { return int(class_of.size()); }
  std::vector<int> indices_of(int cls) const;
  bool all_trivial() const;
  bool h_zero() const { return h.empty(); }
  int find_solid(const std::string& name) const;   // -1 when absent
  int find_dotted(const std::string& name) const;  // -1 when absent
  SlotRings rings(const std::vector<int>& cls) const;
  std::vector<std::string> slot_names(const std::vector<int>& cls) const;
  // Names for a coefficient in R_source (x) R_target; a shared parameter reads x on the right as x̄.
  std::vector<std::string> coefficient_names(int source, int target) const;
  friend bool operator==(const Problem&, const Problem&) = default;
};

// Sorts entries, recomputes leads and orders the solid basis by lead position.
void canonicalize(Problem& p);
// A problem whose origin map is the identity.
void reset_origin(Problem& p);

struct Diagnostic {
  std::string axiom;
  std::string message;
};

// Empty iff all structural axioms hold.
std::vector<Diagnostic> validate(const Problem& p);

// Bookkeeping of symbols in the formal products.
struct FormalTerm {
  char kind;  // 'e', 'v' or 'a'
  int index;  // class, dotted or solid index
  LocalizedElem coeff{2};
};

struct FormalProducts {
  std::map<std::pair<int, int>, std::vector<FormalTerm>> upsilon, pi, theta;
};

FormalProducts formal_products(const Problem& p);

struct LinearTerm {
  int dotted = 0;
  LocalizedElem coeff{2};  // slots: source, target of the dotted element
};

struct BilinearTerm {
  int dotted = 0;
  int solid = 0;
  LocalizedElem coeff{3};  // slots: outer left, middle, outer right
};

// delta(a_l) = sum(left) - sum(right) + sum(linear); left terms read "v a", right terms "a v".
struct Differential {
  std::vector<LinearTerm> linear;
  std::vector<BilinearTerm> left;
  std::vector<BilinearTerm> right;
  bool is_zero() const { return linear.empty() && left.empty() && right.empty(); }
  bool linear_only() const { return left.empty() && right.empty(); }
};

using DifferentialTable = std::vector<Differential>;

Differential differential(const Problem& p, int solid_index);
DifferentialTable differentials(const Problem& p);
// Paper-style rendering such as "u2 b - b v2".
std::string render_differential(const Problem& p, const Differential& d);
// Rendering of a dotted-linear combination, e.g. "x v".
std::string render_linear(const Problem& p, const std::vector<LinearTerm>& terms);

// Expansion of V_i V_j over the dotted basis, scalar problems only.
struct StructureConstant {
  int i = 0;
  int j = 0;
  int l = 0;
  Rational value;
};
std::vector<StructureConstant> mu11(const Problem& p);

// Representation: a size per class, a Weyr matrix per nontrivial class, a block per solid element.
struct Representation {
  std::vector<int> sizes;
  std::vector<RatMatrix> weyr;    // empty matrices on trivial classes
  std::vector<RatMatrix> values;  // values[i] is sizes[source] x sizes[target]
  friend bool operator==(const Representation&, const Representation&) = default;
};

// Morphism: a block per class and per dotted element.
struct Morphism {
  std::vector<RatMatrix> e;
  std::vector<RatMatrix> v;
};

// Row offset of each index in the partitioned matrix; the last entry is the total size.
std::vector<int> block_offsets(const Problem& p, const std::vector<int>& sizes);
Representation zero_representation(const Problem& p, const std::vector<int>& sizes,
                                   const std::vector<RatMatrix>& weyr = {});
// Sum of H_X(W_X) and the star products P(a_i) * A_i.
RatMatrix rep_matrix(const Problem& p, const Representation& r);
// Inverse of rep_matrix: reads each P(a_i) at the leading block of A_i.
Representation rep_from_matrix(const Problem& p, const std::vector<int>& sizes, const std::vector<RatMatrix>& weyr,
                               const RatMatrix& big);
RatMatrix morphism_matrix(const Problem& p, const Representation& src, const Representation& dst, const Morphism& f);
bool is_morphism(const Problem& p, const Representation& src, const Representation& dst, const Morphism& f);
// Throws ShapeError or NonRegular when the representation does not fit the problem.
void check_representation(const Problem& p, const Representation& r);

}  // namespace mbp
