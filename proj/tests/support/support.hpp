#pragma once

#include "mbp/algebra.hpp"
#include "mbp/canonical.hpp"
#include "mbp/classify.hpp"
#include "mbp/reduce.hpp"

#include <random>
#include <string>
#include <vector>

namespace mbp::testing {

std::string fixture_path(const std::string& name);
std::string read_text(const std::string& path);

Problem two_loop_problem();
BasedAlgebra two_loop_algebra();
// Root problem and the state after each recorded step of the worked replay.
struct WorkedReplay {
  Problem root;
  Problem after_edge;
  Problem after_loop;
  Problem after_mutation;
  Problem after_regularizations;
  std::vector<ReductionStep> regularizations;
};
WorkedReplay worked_replay();

Problem a2_problem();    // 1 -> 2
Problem a3_problem();    // 1 -> 2 -> 3
Problem loop_problem();  // one vertex, one loop

RatMatrix random_matrix(std::mt19937& g, int rows, int cols, const std::vector<int>& entries);
RatMatrix random_invertible(std::mt19937& g, int n, const std::vector<int>& entries);
Representation random_rep(std::mt19937& g, const Problem& p, const std::vector<int>& sizes, const std::vector<int>& entries);
// Random invertible structured base change: invertible class blocks and arbitrary dotted parts.
Morphism random_base_change(std::mt19937& g, const Problem& p, const Representation& r, const std::vector<int>& entries);
// The representation g^{-1} P g.
Representation conjugate(const Problem& p, const Representation& r, const Morphism& f);
Representation direct_sum(const Problem& p, const Representation& a, const Representation& b);

// Basis of End(rep) as big matrices, by solving the morphism equations exactly.
std::vector<RatMatrix> endomorphism_basis(const Problem& p, const Representation& r);
// Indecomposability by the endomorphism algebra: local iff the traceless parts generate a nilpotent
// algebra. When not local, a nontrivial idempotent endomorphism is produced through Fitting's lemma.
struct OracleVerdict {
  bool indecomposable = false;
  RatMatrix idempotent;  // set when decomposable
};
OracleVerdict idempotent_oracle(const Problem& p, const Representation& r);

// m-sequence of an eigenvalue from ranks of powers of a - lambda.
std::vector<int> weyr_sequence_by_ranks(const RatMatrix& a, const Rational& lambda);
// S J S^{-1} for Jordan data given as (lambda, block sizes).
RatMatrix jordan_matrix(const std::vector<std::pair<Rational, std::vector<int>>>& blocks);

// All 0/1 matrices of a shape, in binary order.
std::vector<RatMatrix> all_01_matrices(int rows, int cols);

}  // namespace mbp::testing
