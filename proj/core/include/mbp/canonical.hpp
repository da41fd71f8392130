#pragma once

#include "mbp/reduce.hpp"

#include <vector>

namespace mbp {

// One step of the canonical-form algorithm with its certifying isomorphism f: P -> transported P'.
struct AutoStep {
  ReductionStep step;
  Problem problem;
  Representation rep;
  Morphism iso;
  RatMatrix iso_matrix;  // f with f^{-1} P f equal to the matrix of rep over `problem`
};

// Deletes zero classes, or performs the regularization, edge or loop reduction forced by rep(a_1).
AutoStep reduce_step_auto(const Problem& p, const Representation& rep);

struct CanonicalForm {
  ReductionTrace trace;
  std::vector<int> sizes;         // size vector of the input representation
  RatMatrix matrix;               // P^infinity over the original partition
  int links = 0;
  Problem terminal;
  std::vector<int> terminal_sizes;
};

CanonicalForm canonical_form(const Problem& p, const Representation& rep);
int links(const CanonicalForm& cf);
// Sum of the sizes over the classes.
int rep_dimension(const Representation& rep);
bool isomorphic(const Problem& p, const Representation& a, const Representation& b);
bool indecomposable(const Problem& p, const Representation& rep);

// Classes, H and solid basis agree; names and dotted bases are ignored.
bool same_structure(const Problem& a, const Problem& b);
// Steps of the canonical-form algorithm that lead from p to target at unit sizes of target.
ReductionTrace replay_sequence(const Problem& p, const Problem& target);

}  // namespace mbp
