#include "mbp/algebra.hpp"

#include "mbp/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <tuple>

namespace mbp {

int Quiver::vertex_index(const std::string& name) const {
  auto it = std::find(vertices.begin(), vertices.end(), name);
  return it == vertices.end() ? -1 : int(it - vertices.begin());
}

int Quiver::arrow_index(const std::string& name) const {
  for (std::size_t i = 0; i < arrows.size(); ++i)
    if (arrows[i].name == name) return int(i);
  return -1;
}

// ---- parsing ----------------------------------------------------------------

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos;
  int line;
  int col0;  // column of s[0]

  [[noreturn]] void fail(const std::string& msg) const {
    int column = col0 + int(pos);
    std::string tok;
    std::size_t e = pos;
    while (e < s.size() && !std::isspace(static_cast<unsigned char>(s[e]))) ++e;
    tok = s.substr(pos, e - pos);
    throw Error("ParseError", "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg,
                {{"line", line}, {"column", column}, {"token", tok}});
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }
  bool accept(const std::string& w) {
    skip_ws();
    if (s.compare(pos, w.size(), w) != 0) return false;
    pos += w.size();
    return true;
  }
  std::string ident() {
    skip_ws();
    std::size_t b = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
      ++pos;
    if (b == pos) fail("expected a name");
    return s.substr(b, pos - b);
  }
  bool at_digit() {
    skip_ws();
    return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]));
  }
  Rational number() {
    skip_ws();
    std::size_t b = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
    try {
      return parse_rational(s.substr(b, pos - b));
    } catch (const Error&) {
      pos = b;
      fail("malformed number");
    }
  }
};

Path parse_path(Cursor& c, const Quiver& q) {
  Path p;
  do {
    std::size_t at = c.pos;
    std::string name = c.ident();
    int k = q.arrow_index(name);
    if (k < 0) {
      c.pos = at;
      c.skip_ws();
      throw Error("UnknownArrow", "line " + std::to_string(c.line) + ", column " + std::to_string(c.col0 + int(c.pos)) +
                                      ": unknown arrow " + name,
                  {{"line", c.line}, {"column", c.col0 + int(c.pos)}, {"token", name}});
    }
    if (!p.empty() && q.arrows[p.back()].target != q.arrows[k].source) c.fail("arrows do not compose");
    p.push_back(k);
  } while (c.accept('*'));
  return p;
}

void parse_arrow(Cursor& c, Quiver& q) {
  std::string name = c.ident();
  if (!c.accept(':')) c.fail("expected ':' after arrow name");
  if (q.arrow_index(name) >= 0) c.fail("duplicate arrow " + name);
  std::size_t at = c.pos;
  std::string src = c.ident();
  if (!c.accept("->")) c.fail("expected '->'");
  if (c.done()) c.fail("expected target vertex");
  std::size_t at_t = c.pos;
  std::string tgt = c.ident();
  int s = q.vertex_index(src), t = q.vertex_index(tgt);
  if (s < 0) {
    c.pos = at;
    c.skip_ws();
    c.fail("unknown vertex " + src);
  }
  if (t < 0) {
    c.pos = at_t;
    c.skip_ws();
    c.fail("unknown vertex " + tgt);
  }
  if (!c.done()) c.fail("unexpected trailing text");
  q.arrows.push_back({name, s, t});
}

Relation parse_relation(Cursor& c, const Quiver& q) {
  Relation r;
  r.line = c.line;
  bool first = true;
  while (!c.done()) {
    Rational sign = 1;
    if (c.accept('+')) {
    } else if (c.accept('-')) {
      sign = -1;
    } else if (!first) {
      c.fail("expected '+' or '-'");
    }
    Rational coeff = 1;
    if (c.at_digit()) {
      coeff = c.number();
      c.accept('*');
    }
    if (c.done()) c.fail("expected a path");
    Path p = parse_path(c, q);
    r.terms.push_back({sign * coeff, p});
    first = false;
  }
  if (r.terms.empty()) c.fail("empty relation");
  const auto& a = q.arrows;
  int s = a[r.terms[0].path.front()].source, t = a[r.terms[0].path.back()].target;
  for (const auto& term : r.terms) {
    if (a[term.path.front()].source != s || a[term.path.back()].target != t)
      throw Error("ParseError", "line " + std::to_string(c.line) + ": relation mixes paths with different endpoints",
                  {{"line", c.line}, {"column", c.col0}});
    if (term.path.size() < 2)
      throw Error("NotAdmissible", "line " + std::to_string(c.line) + ": relation contains a path of length one",
                  {{"line", c.line}});
  }
  return r;
}

bool is_count(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
}

}  // namespace

AlgebraPresentation parse_presentation(const std::string& text) {
  AlgebraPresentation p;
  bool have_vertices = false;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::size_t start = 0;
    while (start <= raw.size()) {
      std::size_t end = raw.find(';', start);
      if (end == std::string::npos) end = raw.size();
      std::string stmt = raw.substr(start, end - start);
      Cursor c{stmt, 0, line, int(start) + 1};
      if (!c.done()) {
        std::string kw = c.ident();
        if (kw == "vertices") {
          if (!c.accept(':')) c.fail("expected ':'");
          std::vector<std::string> names;
          while (!c.done()) names.push_back(c.ident());
          if (names.size() == 1 && is_count(names[0])) {
            int n = std::stoi(names[0]);
            names.clear();
            for (int i = 1; i <= n; ++i) names.push_back(std::to_string(i));
          }
          if (names.empty()) c.fail("no vertices");
          std::set<std::string> seen(names.begin(), names.end());
          if (seen.size() != names.size()) c.fail("duplicate vertex name");
          p.quiver.vertices = names;
          have_vertices = true;
        } else if (kw == "arrow" || kw == "arrows") {
          if (!have_vertices) c.fail("arrows need a preceding vertices line");
          c.accept(':');
          parse_arrow(c, p.quiver);
        } else if (kw == "relation" || kw == "relations") {
          if (!c.accept(':')) c.fail("expected ':'");
          p.relations.push_back(parse_relation(c, p.quiver));
        } else if (kw == "nilpotency") {
          if (!c.accept(':')) c.fail("expected ':'");
          if (!c.at_digit()) c.fail("expected a positive integer");
          Rational n = c.number();
          if (n.get_den() != 1 || n < 1) c.fail("expected a positive integer");
          p.nilpotency = int(n.get_num().get_si());
          if (!c.done()) c.fail("unexpected trailing text");
        } else if (kw == "basis") {
          if (!c.accept(':')) c.fail("expected ':'");
          while (!c.done()) p.basis.push_back(parse_path(c, p.quiver));
        } else {
          c.pos = 0;
          c.skip_ws();
          c.fail("unknown statement " + kw);
        }
      }
      start = end + 1;
    }
  }
  if (!have_vertices) throw Error("ParseError", "missing vertices line", {{"line", line}, {"column", 1}});
  return p;
}

// ---- based algebra ----------------------------------------------------------

namespace {

// Row echelon form over sparse vectors; each row's pivot is its smallest column.
class Echelon {
 public:
  SparseVec reduce(SparseVec v) const {
    auto it = v.begin();
    while (it != v.end()) {
      auto r = rows_.find(it->first);
      if (r == rows_.end()) {
        ++it;
        continue;
      }
      int key = it->first;
      Rational f = it->second;
      for (const auto& [k, c] : r->second) {
        Rational& slot = v[k];
        slot -= f * c;
      }
      for (auto jt = v.begin(); jt != v.end();) jt = is_zero(jt->second) ? v.erase(jt) : std::next(jt);
      it = v.upper_bound(key);
    }
    return v;
  }
  // Returns true when v enlarged the span.
  bool insert(SparseVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    Rational inv = 1 / v.begin()->second;
    for (auto& [k, c] : v) c *= inv;
    rows_[v.begin()->first] = std::move(v);
    return true;
  }
  std::size_t size() const { return rows_.size(); }

 private:
  std::map<int, SparseVec> rows_;
};

std::string spelling(const Quiver& q, const Path& p) {
  std::string s;
  for (int a : p) s += (s.empty() ? "" : "*") + q.arrows[a].name;
  return s;
}

bool acyclic_longest(const Quiver& q, int& longest) {
  int n = int(q.vertices.size());
  std::vector<int> indeg(n, 0), depth(n, 0);
  for (const auto& a : q.arrows) ++indeg[a.target];
  std::vector<int> order;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& a : q.arrows)
      if (a.source == order[i]) {
        depth[a.target] = std::max(depth[a.target], depth[order[i]] + 1);
        if (--indeg[a.target] == 0) order.push_back(a.target);
      }
  longest = n ? *std::max_element(depth.begin(), depth.end()) : 0;
  return int(order.size()) == n;
}

}  // namespace

int BasedAlgebra::radical_dim() const {
  return int(std::count_if(basis.begin(), basis.end(), [](const BasisElement& b) { return b.layer > 0; }));
}

std::string BasedAlgebra::label(const SparseVec& v) const {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : v) {
    if (first)
      os << (sgn(c) < 0 ? "-" : "");
    else
      os << (sgn(c) < 0 ? " - " : " + ");
    if (abs(c) != 1) os << to_string(Rational(abs(c)));
    os << basis[k].label;
    first = false;
  }
  return os.str();
}

namespace {

BasedAlgebra build_with_bound(const AlgebraPresentation& pres, int nil) {
  const Quiver& q = pres.quiver;

  // All paths of length 1..nil.
  std::vector<Path> paths;
  std::vector<std::vector<int>> by_length(nil + 1);
  for (std::size_t a = 0; a < q.arrows.size(); ++a) paths.push_back({int(a)});
  for (std::size_t i = 0; i < paths.size(); ++i) {
    by_length[paths[i].size()].push_back(int(i));
    if (int(paths[i].size()) == nil) continue;
    for (std::size_t a = 0; a < q.arrows.size(); ++a)
      if (q.arrows[paths[i].back()].target == q.arrows[a].source) {
        Path e = paths[i];
        e.push_back(int(a));
        paths.push_back(std::move(e));
      }
    if (paths.size() > 200000) throw Error("NotFiniteDimensional", "path space too large for the nilpotency bound");
  }
  std::map<Path, int> path_index;
  for (std::size_t i = 0; i < paths.size(); ++i) path_index[paths[i]] = int(i);
  auto start = [&](const Path& p) { return q.arrows[p.front()].source; };
  auto end = [&](const Path& p) { return q.arrows[p.back()].target; };

  // Ideal generators p r q truncated to length <= nil.
  std::vector<SparseVec> ideal;
  std::vector<std::vector<Path>> ending_at(q.vertices.size()), starting_at(q.vertices.size());
  for (const auto& p : paths) {
    ending_at[end(p)].push_back(p);
    starting_at[start(p)].push_back(p);
  }
  for (const auto& rel : pres.relations) {
    int s = start(rel.terms[0].path), t = end(rel.terms[0].path);
    std::vector<Path> lefts{{}}, rights{{}};
    lefts.insert(lefts.end(), ending_at[s].begin(), ending_at[s].end());
    rights.insert(rights.end(), starting_at[t].begin(), starting_at[t].end());
    for (const auto& l : lefts)
      for (const auto& r : rights) {
        SparseVec v;
        for (const auto& term : rel.terms) {
          Path w = l;
          w.insert(w.end(), term.path.begin(), term.path.end());
          w.insert(w.end(), r.begin(), r.end());
          if (int(w.size()) > nil) continue;
          v[path_index.at(w)] += term.coeff;
        }
        for (auto it = v.begin(); it != v.end();) it = is_zero(it->second) ? v.erase(it) : std::next(it);
        if (!v.empty()) ideal.push_back(std::move(v));
      }
  }
  Echelon span;
  for (const auto& v : ideal) span.insert(v);
  for (int k : by_length[nil])
    if (span.insert({{k, Rational(1)}}))
      throw Error("NotFiniteDimensional", "path " + spelling(q, paths[k]) + " of length " + std::to_string(nil) +
                                              " survives the nilpotency bound",
                  {{"path", spelling(q, paths[k])}});

  // Radical basis, layer by layer from the deepest.
  std::vector<Path> hint = pres.basis;
  std::vector<std::pair<int, int>> chosen;  // (path index, layer)
  for (int layer = nil - 1; layer >= 1; --layer) {
    std::vector<int> cands;
    if (hint.empty()) {
      cands = by_length[layer];
      std::sort(cands.begin(), cands.end(), [&](int a, int b) {
        auto ka = std::make_tuple(start(paths[a]), end(paths[a]), spelling(q, paths[a]));
        auto kb = std::make_tuple(start(paths[b]), end(paths[b]), spelling(q, paths[b]));
        return ka > kb;
      });
    } else {
      for (const auto& h : hint)
        if (int(h.size()) == layer) {
          if (!path_index.count(h)) throw Error("NotAdmissible", "basis path " + spelling(q, h) + " is too long");
          cands.push_back(path_index.at(h));
        }
    }
    for (int k : cands)
      if (span.insert({{k, Rational(1)}}))
        chosen.push_back({k, layer});
      else if (!hint.empty())
        throw Error("NotAdmissible", "basis path " + spelling(q, paths[k]) + " is dependent");
    for (int k : by_length[layer])
      if (span.insert({{k, Rational(1)}}))
        throw Error("NotAdmissible", "basis list misses a direction in layer " + std::to_string(layer));
  }
  if (!hint.empty() && chosen.size() != hint.size())
    throw Error("NotAdmissible", "basis list contains paths outside the radical layers");

  BasedAlgebra alg;
  alg.quiver = q;
  for (const auto& [k, layer] : chosen)
    alg.basis.push_back({spelling(q, paths[k]), paths[k], -1, start(paths[k]), end(paths[k]), layer});
  int nrad = int(alg.basis.size());
  for (std::size_t v = 0; v < q.vertices.size(); ++v) {
    std::string lab = q.vertices.size() == 1 ? "e" : "e" + q.vertices[v];
    alg.basis.push_back({lab, {}, int(v), int(v), int(v), 0});
  }

  // Normal forms: reduce with non-basis columns first so remainders live on the basis.
  std::vector<int> column(paths.size());
  std::vector<int> basis_of_col;
  std::vector<bool> is_basis(paths.size(), false);
  for (const auto& [k, layer] : chosen) is_basis[k] = true;
  int next = 0;
  for (std::size_t k = 0; k < paths.size(); ++k)
    if (!is_basis[k]) column[k] = next++;
  std::map<int, int> col_to_basis;
  for (int b = 0; b < nrad; ++b) {
    column[chosen[b].first] = next;
    col_to_basis[next++] = b;
  }
  Echelon nf;
  for (const auto& v : ideal) {
    SparseVec w;
    for (const auto& [k, c] : v) w[column[k]] = c;
    nf.insert(std::move(w));
  }
  auto normal_form = [&](const Path& p) -> SparseVec {
    if (int(p.size()) >= nil) return {};
    SparseVec r = nf.reduce({{column[path_index.at(p)], Rational(1)}});
    SparseVec out;
    for (const auto& [c, v] : r) {
      auto it = col_to_basis.find(c);
      if (it == col_to_basis.end()) throw Error("InternalError", "normal form left the chosen basis");
      out[it->second] = v;
    }
    return out;
  };

  int n = alg.dim();
  alg.product.assign(n, std::vector<SparseVec>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& a = alg.basis[i];
      const auto& b = alg.basis[j];
      if (a.target != b.source) continue;
      if (a.vertex >= 0 && b.vertex >= 0)
        alg.product[i][j][i] = 1;
      else if (a.vertex >= 0)
        alg.product[i][j][j] = 1;
      else if (b.vertex >= 0)
        alg.product[i][j][i] = 1;
      else {
        Path w = a.path;
        w.insert(w.end(), b.path.begin(), b.path.end());
        alg.product[i][j] = normal_form(w);
      }
    }
  return alg;
}

}  // namespace

BasedAlgebra build_based_algebra(const AlgebraPresentation& pres) {
  if (pres.nilpotency > 0) return build_with_bound(pres, pres.nilpotency);
  int longest = 0;
  if (acyclic_longest(pres.quiver, longest)) return build_with_bound(pres, longest + 1);
  // Oriented cycles without a stated bound: the least N with J^N inside the ideal.
  constexpr int kMaxBound = 12;
  for (int nil = 2; nil <= kMaxBound; ++nil) {
    try {
      return build_with_bound(pres, nil);
    } catch (const Error& e) {
      if (e.code() != "NotFiniteDimensional" || !e.payload().contains("path")) throw;
    }
  }
  throw Error("NotFiniteDimensional", "no nilpotency bound up to " + std::to_string(kMaxBound) + " kills all long paths",
              {{"bound", kMaxBound}});
}

RatMatrix left_multiplication(const BasedAlgebra& a, int k) {
  int n = a.dim();
  RatMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (const auto& [i, c] : a.product[k][j]) m(i, j) = c;
  return m;
}

LabelMatrix regular_representation(const BasedAlgebra& a) {
  int n = a.dim();
  LabelMatrix out(n, std::vector<SparseVec>(n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (const auto& [i, c] : a.product[k][j]) out[i][j][k] += c;
  return out;
}

std::string render_label_matrix(const BasedAlgebra& a, const LabelMatrix& m) {
  std::ostringstream os;
  for (const auto& row : m) {
    bool first = true;
    for (const auto& e : row) {
      os << (first ? "" : " ") << a.label(e);
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

namespace {

std::string solid_label(int k) {
  if (k < 26) return std::string(1, char('a' + k));
  return "s" + std::to_string(k + 1);
}

}  // namespace

Problem build_bipartite_problem(const BasedAlgebra& a) {
  int n = a.dim();
  int h = int(a.quiver.vertices.size());
  Problem p;
  for (int copy = 0; copy < 2; ++copy)
    for (int v = 0; v < h; ++v) {
      std::string base = copy == 0 ? "X" : "Y";
      p.classes.push_back({h == 1 ? base : base + a.quiver.vertices[v], false, {}, ""});
    }
  p.class_of.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    p.class_of[i] = a.basis[i].source;
    p.class_of[n + i] = h + a.basis[i].source;
  }
  reset_origin(p);

  std::vector<int> radical;
  for (int k = 0; k < n; ++k)
    if (a.basis[k].layer > 0) radical.push_back(k);
  std::vector<RatMatrix> span;
  for (int k : radical) {
    RatMatrix big(2 * n, 2 * n);
    big.set_block(0, n, left_multiplication(a, k));
    span.push_back(std::move(big));
  }
  auto nb = normalized_basis(span);
  for (std::size_t i = 0; i < nb.size(); ++i) {
    SolidElement s;
    s.name = solid_label(int(i));
    s.lead = nb[i].lead;
    s.source = p.class_of[s.lead.row];
    s.target = p.class_of[s.lead.col];
    for (int r = 0; r < 2 * n; ++r)
      for (int c = 0; c < 2 * n; ++c)
        if (!is_zero(nb[i].matrix(r, c))) s.entries.push_back({r, c, nb[i].matrix(r, c)});
    p.solid.push_back(std::move(s));
  }

  // Dotted elements in the order of the leading entries of their multiplication matrices.
  std::vector<std::pair<Pos, int>> order;
  for (int k : radical) order.push_back({leading_entry(left_multiplication(a, k))->first, k});
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& x, const auto& y) { return position_less(x.first, y.first); });
  for (int copy = 0; copy < 2; ++copy)
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
      int k = order[idx].second;
      RatMatrix l = left_multiplication(a, k);
      DottedElement d;
      d.name = (copy == 0 ? "u" : "v") + std::to_string(idx + 1);
      d.source = copy * h + a.basis[k].source;
      d.target = copy * h + a.basis[k].target;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          if (!is_zero(l(r, c))) d.entries.push_back({copy * n + r, copy * n + c, LocalizedElem::constant(2, l(r, c))});
      p.dotted.push_back(std::move(d));
    }
  canonicalize(p);
  return p;
}

RdccReport check_rdcc(const Problem& p) {
  RdccReport rep;
  std::set<int> rows;
  for (const auto& a : p.solid) {
    if (!rows.insert(a.lead.row).second) {
      rep.distinct_rows = false;
      rep.messages.push_back("two leading positions share row " + std::to_string(a.lead.row + 1));
    }
    auto idx = p.indices_of(a.target);
    if (idx.empty() || a.lead.col != idx.back()) {
      rep.concentrated = false;
      rep.messages.push_back("lead of " + a.name + " is off the main column of its target class");
    }
  }
  return rep;
}

Problem quiver_problem(const Quiver& q) {
  Problem p;
  for (const auto& v : q.vertices) p.classes.push_back({v, false, {}, ""});
  std::vector<bool> touched(q.vertices.size(), false);
  for (const auto& a : q.arrows) {
    int r = p.size();
    p.class_of.push_back(a.source);
    p.class_of.push_back(a.target);
    touched[a.source] = touched[a.target] = true;
    p.solid.push_back({a.name, a.source, a.target, {{r, r + 1, Rational(1)}}, {r, r + 1}});
  }
  for (std::size_t v = 0; v < q.vertices.size(); ++v)
    if (!touched[v]) p.class_of.push_back(int(v));
  reset_origin(p);
  canonicalize(p);
  return p;
}

}  // namespace mbp
