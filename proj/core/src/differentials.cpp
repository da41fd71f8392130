#include "mbp/error.hpp"
#include "mbp/problem.hpp"

#include <sstream>

namespace mbp {

FormalProducts formal_products(const Problem& p) {
  FormalProducts fp;
  for (int i = 0; i < p.size(); ++i) fp.upsilon[{i, i}].push_back({'e', p.class_of[i], LocalizedElem::constant(2, 1)});
  for (std::size_t j = 0; j < p.dotted.size(); ++j)
    for (const auto& e : p.dotted[j].entries) fp.pi[{e.row, e.col}].push_back({'v', int(j), e.value});
  for (std::size_t i = 0; i < p.solid.size(); ++i)
    for (const auto& e : p.solid[i].entries)
      fp.theta[{e.row, e.col}].push_back({'a', int(i), LocalizedElem::constant(2, e.value)});
  return fp;
}

namespace {

struct Index {
  struct VRef {
    int j;
    int other;
    const LocalizedElem* value;
  };
  struct ARef {
    int i;
    int other;
    Rational value;
  };
  struct HRef {
    int other;
    const Poly* value;
  };
  std::vector<std::vector<VRef>> v_row, v_col;
  std::vector<std::vector<ARef>> a_row, a_col;
  std::vector<std::vector<HRef>> h_row, h_col;

  explicit Index(const Problem& p)
      : v_row(p.size()), v_col(p.size()), a_row(p.size()), a_col(p.size()), h_row(p.size()), h_col(p.size()) {
    for (std::size_t j = 0; j < p.dotted.size(); ++j)
      for (const auto& e : p.dotted[j].entries) {
        v_row[e.row].push_back({int(j), e.col, &e.value});
        v_col[e.col].push_back({int(j), e.row, &e.value});
      }
    for (std::size_t i = 0; i < p.solid.size(); ++i)
      for (const auto& e : p.solid[i].entries) {
        a_row[e.row].push_back({int(i), e.col, e.value});
        a_col[e.col].push_back({int(i), e.row, e.value});
      }
    for (const auto& e : p.h) {
      h_row[e.row].push_back({e.col, &e.value});
      h_col[e.col].push_back({e.row, &e.value});
    }
  }
};

Differential extract(const Problem& p, const Index& ix, int l) {
  int pr = p.solid.at(l).lead.row, qc = p.solid.at(l).lead.col;
  std::map<int, LocalizedElem> lin;
  std::map<std::pair<int, int>, LocalizedElem> left, right;
  auto acc2 = [](auto& m, const auto& key, const LocalizedElem& v) {
    auto it = m.find(key);
    if (it == m.end())
      m.emplace(key, v);
    else
      it->second += v;
  };
  // Pi Theta: v at (pr, r), a at (r, qc).
  for (const auto& v : ix.v_row[pr])
    for (const auto& a : ix.a_col[qc])
      if (a.other == v.other) acc2(left, std::make_pair(v.j, a.i), v.value->embed(3, {0, 1}) * a.value);
  // Theta Pi: a at (pr, r), v at (r, qc).
  for (const auto& a : ix.a_row[pr])
    for (const auto& v : ix.v_col[qc])
      if (a.other == v.other) acc2(right, std::make_pair(v.j, a.i), v.value->embed(3, {1, 2}) * a.value);
  // Pi H - H Pi.
  for (const auto& v : ix.v_row[pr])
    for (const auto& h : ix.h_col[qc])
      if (h.other == v.other) acc2(lin, v.j, *v.value * LocalizedElem(MultiPoly::from_poly(2, 1, *h.value)));
  for (const auto& h : ix.h_row[pr])
    for (const auto& v : ix.v_col[qc])
      if (h.other == v.other) acc2(lin, v.j, -(LocalizedElem(MultiPoly::from_poly(2, 0, *h.value)) * *v.value));

  Differential d;
  for (auto& [j, c] : lin)
    if (!c.is_zero()) d.linear.push_back({j, c});
  for (auto& [key, c] : left)
    if (!c.is_zero()) d.left.push_back({key.first, key.second, c});
  for (auto& [key, c] : right)
    if (!c.is_zero()) d.right.push_back({key.first, key.second, c});
  return d;
}

// One rendered monomial: interleaves slot variables with symbols.
struct Piece {
  Rational coeff;
  std::string body;
};

std::string power(const std::string& var, int e) { return e == 1 ? var : var + "^" + std::to_string(e); }

void expand(std::vector<Piece>& out, const LocalizedElem& c, const std::vector<std::string>& vars,
            const std::vector<std::string>& symbols, const Rational& sign) {
  auto glue = [](std::string& body, const std::string& tok) {
    if (tok.empty()) return;
    if (!body.empty()) body += " ";
    body += tok;
  };
  if (!c.is_polynomial()) {
    std::string body = "(" + c.to_string(vars) + ")";
    for (const auto& s : symbols) glue(body, s);
    out.push_back({sign, body});
    return;
  }
  const auto& terms = c.num().terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    std::string body;
    for (int s = 0; s < c.arity(); ++s) {
      if (it->first[s] > 0) glue(body, power(vars[s], it->first[s]));
      if (s < int(symbols.size())) glue(body, symbols[s]);
    }
    out.push_back({sign * it->second, body});
  }
}

}  // namespace

Differential differential(const Problem& p, int solid_index) {
  Index ix(p);
  return extract(p, ix, solid_index);
}

DifferentialTable differentials(const Problem& p) {
  Index ix(p);
  DifferentialTable t;
  for (std::size_t l = 0; l < p.solid.size(); ++l) t.push_back(extract(p, ix, int(l)));
  return t;
}

namespace {

std::string join_pieces(const std::vector<Piece>& pieces) {
  if (pieces.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& pc : pieces) {
    Rational a = abs(pc.coeff);
    if (first)
      os << (sgn(pc.coeff) < 0 ? "-" : "");
    else
      os << (sgn(pc.coeff) < 0 ? " - " : " + ");
    if (a != 1) os << to_string(a) << " ";
    os << pc.body;
    first = false;
  }
  return os.str();
}

}  // namespace

std::string render_linear(const Problem& p, const std::vector<LinearTerm>& terms) {
  std::vector<Piece> pieces;
  for (const auto& t : terms) {
    const auto& v = p.dotted[t.dotted];
    expand(pieces, t.coeff, p.slot_names({v.source, v.target}), {v.name}, 1);
  }
  return join_pieces(pieces);
}

std::string render_differential(const Problem& p, const Differential& d) {
  std::vector<Piece> pieces;
  for (const auto& t : d.left) {
    const auto& v = p.dotted[t.dotted];
    const auto& a = p.solid[t.solid];
    expand(pieces, t.coeff, p.slot_names({v.source, v.target, a.target}), {v.name, a.name}, 1);
  }
  for (const auto& t : d.right) {
    const auto& v = p.dotted[t.dotted];
    const auto& a = p.solid[t.solid];
    expand(pieces, t.coeff, p.slot_names({a.source, a.target, v.target}), {a.name, v.name}, -1);
  }
  for (const auto& t : d.linear) {
    const auto& v = p.dotted[t.dotted];
    expand(pieces, t.coeff, p.slot_names({v.source, v.target}), {v.name}, 1);
  }
  return join_pieces(pieces);
}

}  // namespace mbp
