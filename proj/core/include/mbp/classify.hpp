#pragma once

#include "mbp/reduce.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mbp {

// A wild configuration met at the first solid element.
struct WildReport {
  int wild_case = 0;        // 1 or 2
  int step = 0;             // position in the trace where it was met
  std::string arrow;
  std::string source;       // class names
  std::string target;
  std::string f;            // Case 2: the non-invertible coefficient
  std::string pivot;        // Case 2: the dotted element it multiplies
  std::vector<std::string> forbidden;  // forbidden factors of the endpoints
  std::string tag;          // MW1, MW2, local-case-2-unresolved or empty
  nlohmann::json data;      // raw differentials for unresolved local cases
};

std::optional<WildReport> detect_wild_config(const Problem& p);
nlohmann::json to_json(const WildReport& w);

struct TreeOptions {
  std::vector<Rational> eigenvalues{Rational(0)};
  bool keep_parameter = false;
  int max_depth = 64;
};

struct TreeNode {
  std::string kind;         // root, or the kind of the step leading here
  nlohmann::json choice;    // rank, Jordan data or parameter
  std::vector<int> sizes;   // size vector over the classes of `problem`
  Problem problem;
  std::string leaf;         // minimal, wild, unresolved, depth, or empty for inner nodes
  RatMatrix matrix;         // minimal leaves with trivial classes: P^infinity over the root
  std::optional<WildReport> wild;
  nlohmann::json error;
  std::vector<TreeNode> children;
};

struct ReductionTree {
  TreeNode root;
  bool empty = false;
};

// Depth-first enumeration of the reduction branches at a fixed size vector.
ReductionTree reduction_tree(const Problem& p, const std::vector<int>& sizes, const TreeOptions& opts = {});
// Leaves in depth-first order.
std::vector<const TreeNode*> tree_leaves(const ReductionTree& t);
// Steps from the root to every leaf, in the order of tree_leaves.
std::vector<std::vector<nlohmann::json>> leaf_paths(const ReductionTree& t);
nlohmann::json tree_json(const ReductionTree& t);
std::string tree_dot(const ReductionTree& t);

// Partitions of n, lexicographically descending, which refines the dominance order.
std::vector<std::vector<int>> partitions(int n);

}  // namespace mbp
