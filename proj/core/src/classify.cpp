#include "mbp/classify.hpp"

#include "mbp/error.hpp"
#include "mbp/serialize.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace mbp {

namespace {

// Coefficients equal up to scalars, so the base change leaves a single term f v.
bool proportional(const std::vector<LinearTerm>& terms) {
  const LocalizedElem& f = terms.front().coeff;
  for (std::size_t k = 1; k < terms.size(); ++k) {
    const LocalizedElem& g = terms[k].coeff;
    if (!f.is_polynomial() || !g.is_polynomial()) return false;
    Rational c = g.num().terms().rbegin()->second / f.num().terms().rbegin()->second;
    if (!(g - f * c).is_zero()) return false;
  }
  return true;
}

std::vector<std::string> forbidden_of(const Problem& p, int c) {
  std::vector<std::string> out;
  for (const auto& f : p.classes[c].forbidden) out.push_back(f.to_string(p.classes[c].param));
  return out;
}

}  // namespace

std::optional<WildReport> detect_wild_config(const Problem& p) {
  if (p.solid.empty()) return std::nullopt;
  const auto& a1 = p.solid[0];
  int x = a1.source, y = a1.target;
  bool nx = p.classes[x].nontrivial, ny = p.classes[y].nontrivial;
  if (!nx && !ny) return std::nullopt;
  Differential d = differential(p, 0);
  WildReport w;
  w.arrow = a1.name;
  w.source = p.classes[x].name;
  w.target = p.classes[y].name;
  w.forbidden = forbidden_of(p, x);
  if (y != x)
    for (auto& f : forbidden_of(p, y)) w.forbidden.push_back(f);
  bool two_point = p.classes.size() == 2 && x != y;

  if (d.is_zero() && nx != ny) {
    w.wild_case = 1;
    if (two_point) w.tag = "MW1";
    return w;
  }
  if (!nx || !ny) return std::nullopt;
  if (!d.is_zero()) {
    SlotRings rings = p.rings({x, y});
    for (const auto& t : d.linear)
      if (is_unit(t.coeff, rings)) return std::nullopt;
    if (!d.linear_only() || !proportional(d.linear)) return std::nullopt;
  }
  w.wild_case = 2;
  auto names = p.coefficient_names(x, y);
  if (d.is_zero()) {
    w.f = "0";
  } else {
    w.f = d.linear.front().coeff.to_string(names);
    w.pivot = p.dotted[d.linear.front().dotted].name;
  }
  if (x == y) {
    w.tag = "local-case-2-unresolved";
    Json raw = Json::array();
    auto table = differentials(p);
    for (std::size_t i = 0; i < p.solid.size(); ++i)
      raw.push_back({{"arrow", p.solid[i].name}, {"delta", render_differential(p, table[i])}});
    w.data["differentials"] = raw;
  } else if (two_point) {
    w.tag = "MW2";
    w.data["tameness"] = "unknown";
  }
  return w;
}

Json to_json(const WildReport& w) {
  Json out = {{"case", w.wild_case}, {"step", w.step},     {"arrow", w.arrow},
              {"source", w.source},  {"target", w.target}, {"forbidden", w.forbidden}};
  if (w.wild_case == 2) {
    out["f"] = w.f;
    out["pivot"] = w.pivot;
  }
  if (!w.tag.empty()) out["tag"] = w.tag;
  if (!w.data.is_null()) out["data"] = w.data;
  return out;
}

std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rest, int max) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = std::min(rest, max); k >= 1; --k) {
      cur.push_back(k);
      rec(rest - k, k);
      cur.pop_back();
    }
  };
  if (n > 0) rec(n, n);
  return out;
}

namespace {

// Jordan data of total size m over the sample eigenvalues, in stable order.
std::vector<JordanData> jordan_choices(const std::vector<Rational>& samples, int m) {
  std::vector<JordanData> out;
  JordanData cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int rest) {
    if (i == samples.size()) {
      if (rest == 0) out.push_back(cur);
      return;
    }
    for (int k = rest; k >= 0; --k) {
      if (k == 0) {
        rec(i + 1, rest);
        continue;
      }
      for (const auto& part : partitions(k)) {
        JordanBlocks b;
        b.lambda = samples[i];
        b.blocks.assign(part.front(), 0);
        for (int s : part) ++b.blocks[s - 1];
        cur.eigen.push_back(b);
        rec(i + 1, rest - k);
        cur.eigen.pop_back();
      }
    }
  };
  rec(0, m);
  return out;
}

struct Explorer {
  const Problem& root;
  const TreeOptions& opts;
  std::vector<Rational> samples;
  ReductionTrace path;

  void child(TreeNode& node, StepResult r, std::vector<int> sizes, int depth) {
    TreeNode c;
    c.kind = r.step.kind;
    c.choice = step_spec(r.step);
    c.sizes = std::move(sizes);
    c.problem = std::move(r.problem);
    path.push_back(std::move(r.step));
    explore(c, depth + 1);
    path.pop_back();
    node.children.push_back(std::move(c));
  }

  void explore(TreeNode& node, int depth) {
    const Problem& p = node.problem;
    const auto& s = node.sizes;
    int nc = int(p.classes.size());
    std::vector<int> kept;
    for (int c = 0; c < nc; ++c)
      if (s[c] > 0) kept.push_back(c);
    if (int(kept.size()) < nc) {
      if (depth >= opts.max_depth) {
        node.leaf = "depth";
        return;
      }
      StepResult r = deletion(p, kept);
      auto sizes = induced_sizes(r.step, s);
      child(node, std::move(r), sizes, depth);
      return;
    }
    if (p.solid.empty()) {
      node.leaf = "minimal";
      if (p.all_trivial()) {
        Representation rep = zero_representation(p, s);
        for (auto it = path.rbegin(); it != path.rend(); ++it) rep = transport_rep(*it, rep);
        node.matrix = rep_matrix(root, rep);
      }
      return;
    }
    if (depth >= opts.max_depth) {
      node.leaf = "depth";
      return;
    }
    if (auto w = detect_wild_config(p)) {
      node.leaf = "wild";
      w->step = int(path.size());
      node.wild = w;
      return;
    }
    const auto& a1 = p.solid[0];
    int x = a1.source, y = a1.target;
    Differential d = differential(p, 0);
    try {
      if (!d.is_zero()) {
        StepResult r = regularization(p);
        child(node, std::move(r), s, depth);
        return;
      }
      if (p.classes[x].nontrivial || p.classes[y].nontrivial)
        throw Error("Unsupported", "no reduction applies to " + a1.name);
      if (x != y) {
        for (int rk = 0; rk <= std::min(s[x], s[y]); ++rk) {
          StepResult r = edge_reduction(p, rk, s[x], s[y]);
          auto sizes = induced_sizes(r.step, s);
          child(node, std::move(r), sizes, depth);
        }
        return;
      }
      for (const auto& jd : jordan_choices(samples, s[x])) {
        StepResult r = loop_reduction(p, jd);
        auto sizes = induced_sizes(r.step, s);
        child(node, std::move(r), sizes, depth);
      }
      if (opts.keep_parameter) child(node, loop_mutation(p), s, depth);
      if (node.children.empty()) throw Error("Unsupported", "no eigenvalue samples for the loop " + a1.name);
    } catch (const Error& e) {
      node.children.clear();
      node.leaf = "unresolved";
      node.error = {{"code", e.code()}, {"message", e.what()}};
      if (!e.payload().is_null()) node.error["payload"] = e.payload();
    }
  }
};

void collect(const TreeNode& n, std::vector<const TreeNode*>& out) {
  if (!n.leaf.empty()) out.push_back(&n);
  for (const auto& c : n.children) collect(c, out);
}

void collect_paths(const TreeNode& n, std::vector<Json>& cur, std::vector<std::vector<Json>>& out) {
  if (!n.leaf.empty()) out.push_back(cur);
  for (const auto& c : n.children) {
    cur.push_back(c.choice);
    collect_paths(c, cur, out);
    cur.pop_back();
  }
}

Json node_json(const TreeNode& n) {
  Json names = Json::array();
  for (const auto& c : n.problem.classes) names.push_back(c.name);
  Json out = {{"kind", n.kind}, {"classes", names}, {"sizes", n.sizes}};
  if (!n.choice.is_null()) out["choice"] = n.choice;
  if (!n.leaf.empty()) out["leaf"] = n.leaf;
  if (n.leaf == "minimal" && n.problem.all_trivial()) out["matrix"] = matrix_json(n.matrix);
  if (n.wild) out["wild"] = to_json(*n.wild);
  if (!n.error.is_null()) out["error"] = n.error;
  if (!n.children.empty()) {
    Json cs = Json::array();
    for (const auto& c : n.children) cs.push_back(node_json(c));
    out["children"] = cs;
  }
  return out;
}

std::string choice_label(const TreeNode& n) {
  const Json& c = n.choice;
  if (n.kind == "edge") return "r=" + std::to_string(c.value("rank", 0));
  if (n.kind == "loop") {
    std::string s;
    for (const auto& e : c["jordan"]) {
      if (!s.empty()) s += " ";
      s += e["lambda"].get<std::string>() + ":";
      auto blocks = e["blocks"].get<std::vector<int>>();
      std::string part;
      for (int j = int(blocks.size()); j >= 1; --j)
        for (int k = 0; k < blocks[j - 1]; ++k) part += (part.empty() ? "" : ",") + std::to_string(j);
      s += "(" + part + ")";
    }
    return s;
  }
  return n.kind;
}

void dot_node(const TreeNode& n, int& counter, std::ostringstream& os) {
  int id = counter++;
  std::string label = n.kind;
  std::string sizes;
  for (int m : n.sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(m);
  label += "\\n(" + sizes + ")";
  std::string shape = "ellipse";
  if (n.leaf == "minimal") shape = "box";
  if (n.leaf == "wild") {
    shape = "doubleoctagon";
    label += "\\ncase " + std::to_string(n.wild->wild_case);
    if (!n.wild->tag.empty()) label += " " + n.wild->tag;
  }
  if (n.leaf == "unresolved" || n.leaf == "depth") {
    shape = "diamond";
    label += "\\n" + n.leaf;
  }
  os << "  n" << id << " [label=\"" << label << "\", shape=" << shape << "];\n";
  for (const auto& c : n.children) {
    int cid = counter;
    dot_node(c, counter, os);
    os << "  n" << id << " -> n" << cid << " [label=\"" << choice_label(c) << "\"];\n";
  }
}

}  // namespace

ReductionTree reduction_tree(const Problem& p, const std::vector<int>& sizes, const TreeOptions& opts) {
  if (sizes.size() != p.classes.size()) throw Error("ShapeError", "size vector does not match the classes");
  if (!p.all_trivial() || !p.h_zero()) throw Error("PreconditionFailed", "the tree starts from trivial classes and H = 0");
  ReductionTree t;
  t.root.kind = "root";
  t.root.sizes = sizes;
  t.root.problem = p;
  if (std::all_of(sizes.begin(), sizes.end(), [](int m) { return m == 0; })) {
    t.empty = true;
    return t;
  }
  Explorer ex{p, opts, opts.eigenvalues, {}};
  std::sort(ex.samples.begin(), ex.samples.end());
  ex.samples.erase(std::unique(ex.samples.begin(), ex.samples.end()), ex.samples.end());
  ex.explore(t.root, 0);
  return t;
}

std::vector<const TreeNode*> tree_leaves(const ReductionTree& t) {
  std::vector<const TreeNode*> out;
  if (!t.empty) collect(t.root, out);
  return out;
}

std::vector<std::vector<Json>> leaf_paths(const ReductionTree& t) {
  std::vector<std::vector<Json>> out;
  std::vector<Json> cur;
  if (!t.empty) collect_paths(t.root, cur, out);
  return out;
}

Json tree_json(const ReductionTree& t) {
  auto leaves = tree_leaves(t);
  Json counts = Json::object();
  for (const auto* l : leaves) counts[l->leaf] = counts.value(l->leaf, 0) + 1;
  Json out = {{"format", "mbp-tree-1"}, {"sampled", true}, {"leaves", int(leaves.size())}, {"leaf_counts", counts}};
  out["root"] = t.empty ? Json(nullptr) : node_json(t.root);
  return out;
}

std::string tree_dot(const ReductionTree& t) {
  std::ostringstream os;
  os << "digraph reduction_tree {\n  node [fontname=\"monospace\"];\n";
  if (!t.empty) {
    int counter = 0;
    dot_node(t.root, counter, os);
  }
  os << "}\n";
  return os.str();
}

}  // namespace mbp
