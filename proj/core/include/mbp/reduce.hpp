#pragma once

#include "mbp/problem.hpp"
#include "mbp/weyr.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mbp {

// How one old class unfolds into slots of the induced problem.
struct SlotAction {
  std::vector<int> slots;           // new class of each slot
  std::vector<bool> param;          // slot is a parameter slot, x acts as the new parameter
  RatMatrix scalar;                 // action of x on the scalar slots (zero on parameter slots)
  std::vector<RatMatrix> radical;   // strictly upper scalar endomorphisms, one dotted element each
};

// Admissible bimodule data: new classes, per-old-class layout, and the value absorbed into H.
struct Induction {
  std::vector<VertexClass> classes;
  std::vector<SlotAction> action;               // per old class
  bool absorb_first = false;                    // A_1 leaves M and L(a_1) * A_1 joins H
  std::vector<std::vector<Poly>> first_value;   // L(a_1), slots of source x slots of target
  std::string radical_name = "v";
};

Problem admissible_induce(const Problem& p, const Induction& ind);

struct ReductionStep {
  std::string kind;   // edge, loop, regularization, deletion, localization, loop-mutation, unraveling, prop226, prop227
  std::string arrow;  // name of the first solid element when it is consumed
  Induction induction;
  RatMatrix b;        // value assigned to a_1 at the representation level, when fixed
  int links = 0;
  nlohmann::json info;
  std::shared_ptr<const Problem> before;
  std::shared_ptr<const Problem> after;
};

using ReductionTrace = std::vector<ReductionStep>;

struct StepResult {
  ReductionStep step;
  Problem problem;
};

// delta(a_1) has a unit coefficient: drop a_1 and the pivot dotted element.
StepResult regularization(const Problem& p);
// Symbols (v') = (v) F, matrices (V') = (V) F^{-T}; F must not mix class pairs.
Problem base_change_dotted(const Problem& p, const RatMatrix& f);
// Full edge reduction with classes Z1, Z2, Z3.
StepResult edge_reduction(const Problem& p);
// Edge reduction at rank r followed by deletion of the empty classes for sizes (m_X, m_Y).
StepResult edge_reduction(const Problem& p, int r, int m_x, int m_y);
// Loop mutation, unraveling and deletion of the absent Jordan classes in one step.
StepResult loop_reduction(const Problem& p, const JordanData& jd);
StepResult loop_mutation(const Problem& p);
StepResult localization(const Problem& p, int cls, const Poly& factor);
StepResult deletion(const Problem& p, const std::vector<int>& kept);
StepResult unraveling(const Problem& p, int cls, const std::vector<Rational>& lambdas, int depth, bool keep_parameter);
StepResult prop226_zero(const Problem& p);
StepResult prop227_identity(const Problem& p, bool experimental = false);

// Size vector of the induced problem for a representation of the old one reduced by the step.
std::vector<int> induced_sizes(const ReductionStep& step, const std::vector<int>& sizes);
// Size vector of the old problem determined by one over the induced problem.
std::vector<int> transport_size(const ReductionStep& step, const std::vector<int>& sizes);
// Representation of the old problem with the same partitioned matrix.
Representation transport_rep(const ReductionStep& step, const Representation& rep);

// Defining system of `current` written over the variable matrix of `root` at the size vector
// determined by unit sizes of `current`.
struct DefiningSystem {
  int variables = 0;
  int rank_before = 0;   // rank before the lead of A_1 and off the remaining solids
  int rank_with = 0;     // rank after adding the equations at the lead of A_1
  int solution_dim() const { return variables - rank_before; }
  bool delta_zero() const { return rank_with == rank_before; }
  RatMatrix basis;       // columns span the solutions
};
DefiningSystem solve_defining_system(const Problem& root, const Problem& current);

// Root size vector fixed by unit sizes on `current`.
std::vector<int> unit_root_sizes(const Problem& root, const Problem& current);

}  // namespace mbp
