// mbp: command-line front end for matrix bi-module problems.
#include "mbp/algebra.hpp"
#include "mbp/canonical.hpp"
#include "mbp/classify.hpp"
#include "mbp/error.hpp"
#include "mbp/serialize.hpp"

#include <CLI11.hpp>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using mbp::Json;

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kStructured = 2;
constexpr int kUsage = 64;

struct Output {
  std::string format = "text";
  bool color = false;

  bool json() const { return format == "json"; }
  std::string paint(const std::string& s, bool good) const {
    if (!color) return s;
    return (good ? "\033[32m" : "\033[31m") + s + "\033[0m";
  }
  void emit(const Json& j) const { std::cout << j.dump(2) << "\n"; }
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw mbp::Error("IOError", "cannot read " + path, {{"path", path}});
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw mbp::Error("IOError", "cannot write " + path, {{"path", path}});
  out << text;
}

Json read_json(const std::string& path) {
  std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw mbp::Error("ParseError", path + ": " + e.what(), {{"path", path}});
  }
}

bool looks_like_json(const std::string& text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

// A problem document, or a quiver file turned into its bipartite problem (or the quiver problem).
mbp::Problem load_problem(const std::string& path, const std::string& kind = "bipartite") {
  std::string text = read_file(path);
  if (looks_like_json(text)) {
    try {
      return mbp::problem_from_json(Json::parse(text));
    } catch (const Json::parse_error& e) {
      throw mbp::Error("ParseError", path + ": " + e.what(), {{"path", path}});
    }
  }
  auto pres = mbp::parse_presentation(text);
  if (kind == "quiver") return mbp::quiver_problem(pres.quiver);
  return mbp::build_bipartite_problem(mbp::build_based_algebra(pres));
}

std::string matrix_text(const mbp::RatMatrix& m) {
  std::vector<std::vector<std::string>> cells(m.rows());
  std::size_t width = 1;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      cells[i].push_back(mbp::to_string(m(i, j)));
      width = std::max(width, cells[i].back().size());
    }
  std::ostringstream os;
  for (const auto& row : cells) {
    os << "  [";
    for (std::size_t j = 0; j < row.size(); ++j)
      os << (j ? " " : "") << std::string(width - row[j].size(), ' ') << row[j];
    os << "]\n";
  }
  return os.str();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--sizes", "expected nonnegative integers separated by commas");
    }
  }
  return out;
}

std::vector<mbp::Rational> parse_rational_list(const std::string& s) {
  std::vector<mbp::Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(mbp::parse_rational(item));
  return out;
}

int report_error(const Output& out, const mbp::Error& e) {
  Json j = {{"error", e.code()}, {"message", e.what()}};
  if (!e.payload().is_null()) j["payload"] = e.payload();
  if (out.json())
    out.emit(j);
  else {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    if (!e.payload().is_null()) std::cerr << e.payload().dump(2) << "\n";
  }
  return kStructured;
}

int verdict(const Output& out, const std::string& key, bool value, Json extra = Json::object()) {
  extra[key] = value;
  if (out.json())
    out.emit(extra);
  else
    std::cout << key << ": " << out.paint(value ? "true" : "false", value) << "\n";
  return value ? kTrue : kFalse;
}

void print_canonical(const Output& out, const mbp::Problem& p, const mbp::CanonicalForm& cf) {
  Json j = mbp::canonical_json(p, cf);
  if (out.json()) {
    out.emit(j);
    return;
  }
  std::cout << "sizes:";
  for (std::size_t c = 0; c < p.classes.size(); ++c) std::cout << " " << p.classes[c].name << "=" << cf.sizes[c];
  std::cout << "\ndimension: " << j["dimension"].get<int>() << "\nlinks: " << cf.links << "\n";
  if (j.contains("indecomposable")) {
    bool ind = j["indecomposable"].get<bool>();
    std::cout << "indecomposable: " << out.paint(ind ? "true" : "false", ind) << "\n";
  }
  std::cout << "steps:";
  for (const auto& s : cf.trace) std::cout << " " << s.kind;
  std::cout << "\ncanonical form:\n" << matrix_text(cf.matrix);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix bi-module problems: reductions, canonical forms and wild configurations"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "dot"}))
      ->capture_default_str();

  // weyr
  auto* weyr = app.add_subcommand("weyr", "Weyr canonical form of a square rational matrix (JSON rows)");
  std::string matrix_path;
  weyr->add_option("matrix", matrix_path, "JSON file holding the matrix, or - for stdin")->required();

  // build
  auto* build = app.add_subcommand("build", "Convert a quiver file to problem JSON");
  std::string quiver_path, build_out, build_kind = "bipartite";
  build->add_option("quiver", quiver_path, "Quiver file")->required();
  build->add_option("-o,--output", build_out, "Write the problem here instead of stdout");
  build->add_option("--kind", build_kind, "bipartite: the bipartite problem of the algebra; quiver: representations of the quiver")
      ->check(CLI::IsMember({"bipartite", "quiver"}))
      ->capture_default_str();

  // validate
  auto* validate = app.add_subcommand("validate", "Check the structural axioms of a problem");
  std::string validate_path;
  validate->add_option("problem", validate_path, "Problem JSON or quiver file")->required();

  // diffs
  auto* diffs = app.add_subcommand("diffs", "Differentials of the solid elements");
  std::string diffs_path;
  diffs->add_option("problem", diffs_path, "Problem JSON or quiver file")->required();

  // canon
  auto* canon = app.add_subcommand("canon", "Canonical form of a representation");
  std::string canon_problem, canon_rep, canon_trace;
  canon->add_option("--problem", canon_problem, "Problem JSON or quiver file");
  canon->add_option("--rep", canon_rep, "Representation JSON");
  canon->add_option("--trace", canon_trace, "Write the reduction trace here");
  std::vector<std::string> canon_pos;
  canon->add_option("files", canon_pos, "Problem and representation, when not given by flags");

  // iso
  auto* iso = app.add_subcommand("iso", "Decide whether two representations are isomorphic");
  std::string iso_problem;
  std::vector<std::string> iso_pos;
  iso->add_option("--problem", iso_problem, "Problem JSON or quiver file");
  iso->add_option("files", iso_pos, "[problem] rep1 rep2");

  // indec
  auto* indec = app.add_subcommand("indec", "Decide whether a representation is indecomposable");
  std::string indec_problem, indec_rep;
  std::vector<std::string> indec_pos;
  indec->add_option("--problem", indec_problem, "Problem JSON or quiver file");
  indec->add_option("--rep", indec_rep, "Representation JSON");
  indec->add_option("files", indec_pos, "Problem and representation, when not given by flags");

  // tree
  auto* tree = app.add_subcommand("tree", "Enumerate reduction branches at a size vector");
  std::string tree_problem, tree_sizes, tree_eigen = "0";
  mbp::TreeOptions topts;
  tree->add_option("--problem", tree_problem, "Problem JSON or quiver file")->required();
  tree->add_option("--sizes", tree_sizes, "Size vector over the classes, e.g. 1,1")->required();
  tree->add_option("--eigen", tree_eigen, "Eigenvalue samples for loops")->capture_default_str();
  tree->add_option("--depth", topts.max_depth, "Depth bound")->capture_default_str()->check(CLI::NonNegativeNumber);
  tree->add_flag("--keep-parameter", topts.keep_parameter, "Add the parameter-keeping branch at loops");

  // detect-wild
  auto* wild = app.add_subcommand("detect-wild", "Look for a Drozd wild configuration at the first solid element");
  std::string wild_problem;
  wild->add_option("--problem", wild_problem, "Problem JSON or quiver file");
  std::vector<std::string> wild_pos;
  wild->add_option("problem_file", wild_pos, "Problem, when not given by --problem");

  // replay
  auto* replay = app.add_subcommand("replay", "Replay a trace, or find the canonical steps reaching a target problem");
  std::string replay_problem, replay_trace, replay_target, replay_out;
  replay->add_option("--problem", replay_problem, "Problem JSON or quiver file")->required();
  auto* rt = replay->add_option("--trace", replay_trace, "Trace JSON (a trace document or an array of step specs)");
  auto* rg = replay->add_option("--target", replay_target, "Target problem JSON");
  rt->excludes(rg);
  replay->add_option("-o,--output", replay_out, "Write the final problem here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const char* color_env = std::getenv("MBP_COLOR");
  out.color = isatty(STDOUT_FILENO) && !(color_env && std::string(color_env) == "0");

  auto usage = [&](const std::string& msg) {
    std::cerr << "usage error: " << msg << "\n";
    return kUsage;
  };

  try {
    if (*weyr) {
      Json j = mbp::weyr_json(mbp::matrix_from_json(read_json(matrix_path)));
      if (out.json()) {
        out.emit(j);
      } else {
        std::cout << "eigenvalues:";
        for (const auto& e : j["eigenvalues"]) std::cout << " " << e.get<std::string>();
        std::cout << "\n";
        for (const auto& [l, m] : j["m_sequences"].items()) std::cout << "m(" << l << "): " << m.dump() << "\n";
        std::cout << "weyr:\n" << matrix_text(mbp::matrix_from_json(j["weyr"]));
        std::cout << "transform:\n" << matrix_text(mbp::matrix_from_json(j["transform"]));
      }
      return kTrue;
    }

    if (*build) {
      mbp::Problem p = load_problem(quiver_path, build_kind);
      std::string text = mbp::problem_json(p).dump(2) + "\n";
      if (build_out.empty())
        std::cout << text;
      else
        write_file(build_out, text);
      return kTrue;
    }

    if (*validate) {
      std::string text = read_file(validate_path);
      mbp::Problem p;
      try {
        p = load_problem(validate_path);
      } catch (const mbp::Error& e) {
        if (e.code() != "InvalidProblem") throw;
        return verdict(out, "valid", false, {{"diagnostics", e.payload().value("diagnostics", Json::array())}});
      }
      auto diag = mbp::validate(p);
      Json dj = Json::array();
      for (const auto& d : diag) dj.push_back({{"axiom", d.axiom}, {"message", d.message}});
      Json extra = {{"diagnostics", dj}};
      if (!looks_like_json(text)) {
        auto rdcc = mbp::check_rdcc(p);
        extra["rdcc"] = rdcc.ok();
        if (!out.json()) std::cout << "rdcc: " << (rdcc.ok() ? "true" : "false") << "\n";
      }
      if (!out.json())
        for (const auto& d : diag) std::cout << d.axiom << ": " << d.message << "\n";
      return verdict(out, "valid", diag.empty(), extra);
    }

    if (*diffs) {
      mbp::Problem p = load_problem(diffs_path);
      auto table = mbp::differentials(p);
      Json j = Json::array();
      for (std::size_t i = 0; i < p.solid.size(); ++i)
        j.push_back({{"arrow", p.solid[i].name}, {"delta", mbp::render_differential(p, table[i])}});
      if (out.json())
        out.emit(j);
      else
        for (const auto& row : j)
          std::cout << "δ(" << row["arrow"].get<std::string>() << ") = " << row["delta"].get<std::string>() << "\n";
      return kTrue;
    }

    if (*canon) {
      if (canon_problem.empty() && !canon_pos.empty()) canon_problem = canon_pos[0], canon_pos.erase(canon_pos.begin());
      if (canon_rep.empty() && !canon_pos.empty()) canon_rep = canon_pos[0], canon_pos.erase(canon_pos.begin());
      if (canon_problem.empty() || canon_rep.empty() || !canon_pos.empty())
        return usage("canon needs one problem and one representation");
      mbp::Problem p = load_problem(canon_problem);
      auto rep = mbp::representation_from_json(p, read_json(canon_rep));
      auto cf = mbp::canonical_form(p, rep);
      if (!canon_trace.empty()) write_file(canon_trace, mbp::trace_json(cf.trace).dump(2) + "\n");
      print_canonical(out, p, cf);
      return kTrue;
    }

    if (*iso) {
      if (iso_problem.empty() && iso_pos.size() == 3) iso_problem = iso_pos[0], iso_pos.erase(iso_pos.begin());
      if (iso_problem.empty() || iso_pos.size() != 2) return usage("iso needs one problem and two representations");
      mbp::Problem p = load_problem(iso_problem);
      auto a = mbp::representation_from_json(p, read_json(iso_pos[0]));
      auto b = mbp::representation_from_json(p, read_json(iso_pos[1]));
      return verdict(out, "isomorphic", mbp::isomorphic(p, a, b));
    }

    if (*indec) {
      if (indec_problem.empty() && !indec_pos.empty()) indec_problem = indec_pos[0], indec_pos.erase(indec_pos.begin());
      if (indec_rep.empty() && !indec_pos.empty()) indec_rep = indec_pos[0], indec_pos.erase(indec_pos.begin());
      if (indec_problem.empty() || indec_rep.empty() || !indec_pos.empty())
        return usage("indec needs one problem and one representation");
      mbp::Problem p = load_problem(indec_problem);
      auto rep = mbp::representation_from_json(p, read_json(indec_rep));
      auto cf = mbp::canonical_form(p, rep);
      int dim = mbp::rep_dimension(rep);
      if (dim == 0) throw mbp::Error("PreconditionFailed", "the zero representation is not indecomposable");
      return verdict(out, "indecomposable", cf.links == dim - 1, {{"links", cf.links}, {"dimension", dim}});
    }

    if (*tree) {
      mbp::Problem p = load_problem(tree_problem);
      topts.eigenvalues = parse_rational_list(tree_eigen);
      auto t = mbp::reduction_tree(p, parse_int_list(tree_sizes), topts);
      if (out.format == "dot") {
        std::cout << mbp::tree_dot(t);
      } else if (out.json()) {
        Json j = mbp::tree_json(t);
        Json eig = Json::array();
        for (const auto& e : topts.eigenvalues) eig.push_back(mbp::rational_json(e));
        j["eigenvalues"] = eig;
        j["keep_parameter"] = topts.keep_parameter;
        j["max_depth"] = topts.max_depth;
        out.emit(j);
      } else {
        auto leaves = mbp::tree_leaves(t);
        auto paths = mbp::leaf_paths(t);
        std::cout << "leaves: " << leaves.size() << " (sampled eigenvalues: " << tree_eigen << ")\n";
        for (std::size_t i = 0; i < leaves.size(); ++i) {
          std::cout << leaves[i]->leaf << ":";
          for (const auto& s : paths[i]) {
            std::cout << " " << s["kind"].get<std::string>();
            if (s.contains("rank")) std::cout << "(r=" << s["rank"].get<int>() << ")";
          }
          if (leaves[i]->wild) std::cout << "  case " << leaves[i]->wild->wild_case << " at " << leaves[i]->wild->arrow;
          std::cout << "\n";
        }
      }
      return kTrue;
    }

    if (*wild) {
      if (wild_problem.empty() && wild_pos.size() == 1) wild_problem = wild_pos[0];
      if (wild_problem.empty()) return usage("detect-wild needs a problem");
      mbp::Problem p = load_problem(wild_problem);
      auto w = mbp::detect_wild_config(p);
      if (out.json()) {
        out.emit(w ? mbp::to_json(*w) : Json{{"case", nullptr}});
      } else if (w) {
        std::cout << "case " << w->wild_case << " at " << w->arrow << " (" << w->source << " -> " << w->target << ")\n";
        if (w->wild_case == 2) std::cout << "f = " << w->f << ", pivot " << w->pivot << "\n";
        if (!w->tag.empty()) std::cout << "tag: " << w->tag << "\n";
      } else {
        std::cout << "no wild configuration at the first solid element\n";
      }
      return w ? kTrue : kFalse;
    }

    if (*replay) {
      mbp::Problem p = load_problem(replay_problem);
      mbp::ReductionTrace steps;
      if (!replay_trace.empty())
        steps = mbp::replay_trace(p, read_json(replay_trace));
      else if (!replay_target.empty())
        steps = mbp::replay_sequence(p, load_problem(replay_target));
      else
        return usage("replay needs --trace or --target");
      const mbp::Problem& last = steps.empty() ? p : *steps.back().after;
      if (!replay_out.empty()) write_file(replay_out, mbp::problem_json(last).dump(2) + "\n");
      auto table = mbp::differentials(last);
      if (out.json()) {
        Json d = Json::array();
        for (std::size_t i = 0; i < last.solid.size(); ++i)
          d.push_back({{"arrow", last.solid[i].name}, {"delta", mbp::render_differential(last, table[i])}});
        out.emit({{"trace", mbp::trace_json(steps)}, {"problem", mbp::problem_json(last)}, {"differentials", d}});
      } else {
        for (const auto& s : steps) {
          std::cout << s.kind;
          if (!s.arrow.empty()) std::cout << " " << s.arrow;
          if (s.info.contains("substitution")) std::cout << ": " << s.info["substitution"].get<std::string>();
          std::cout << "\n";
        }
        std::cout << "classes:";
        for (const auto& c : last.classes) std::cout << " " << c.name << (c.nontrivial ? "[" + c.param + "]" : "");
        std::cout << "\n";
        for (std::size_t i = 0; i < last.solid.size(); ++i)
          std::cout << "δ(" << last.solid[i].name << ") = " << mbp::render_differential(last, table[i]) << "\n";
      }
      return kTrue;
    }
  } catch (const mbp::Error& e) {
    return report_error(out, e);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
