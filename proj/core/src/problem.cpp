#include "mbp/problem.hpp"

#include "mbp/error.hpp"

#include <algorithm>
#include <tuple>

namespace mbp {

std::vector<int> Problem::indices_of(int cls) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (class_of[i] == cls) out.push_back(i);
  return out;
}

bool Problem::all_trivial() const {
  return std::none_of(classes.begin(), classes.end(), [](const VertexClass& c) { return c.nontrivial; });
}

int Problem::find_solid(const std::string& name) const {
  for (std::size_t i = 0; i < solid.size(); ++i)
    if (solid[i].name == name) return int(i);
  return -1;
}

int Problem::find_dotted(const std::string& name) const {
  for (std::size_t i = 0; i < dotted.size(); ++i)
    if (dotted[i].name == name) return int(i);
  return -1;
}

SlotRings Problem::rings(const std::vector<int>& cls) const {
  SlotRings r;
  for (int c : cls) r.push_back(classes.at(c).forbidden);
  return r;
}

std::vector<std::string> Problem::slot_names(const std::vector<int>& cls) const {
  std::vector<std::string> out;
  for (int c : cls) out.push_back(classes.at(c).nontrivial ? classes.at(c).param : "1");
  return out;
}

std::vector<std::string> Problem::coefficient_names(int source, int target) const {
  auto out = slot_names({source, target});
  if (source == target && classes.at(source).nontrivial) out[1] += "\u0304";
  return out;
}

void canonicalize(Problem& p) {
  auto by_pos = [](const auto& a, const auto& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); };
  for (auto& v : p.dotted) std::sort(v.entries.begin(), v.entries.end(), by_pos);
  for (auto& a : p.solid) {
    std::sort(a.entries.begin(), a.entries.end(), by_pos);
    bool found = false;
    for (const auto& e : a.entries)
      if (!found || position_less({e.row, e.col}, a.lead)) {
        a.lead = {e.row, e.col};
        found = true;
      }
  }
  std::stable_sort(p.solid.begin(), p.solid.end(),
                   [](const SolidElement& a, const SolidElement& b) { return position_less(a.lead, b.lead); });
  std::sort(p.h.begin(), p.h.end(), by_pos);
}

void reset_origin(Problem& p) {
  p.origin.resize(p.size());
  for (int i = 0; i < p.size(); ++i) p.origin[i] = i;
}

namespace {

using Sparse = std::map<std::pair<int, int>, Rational>;

// Splits a localized element into independent monomials over a common key.
struct MonoKey {
  std::vector<LocalizedElem::Denominator> den;
  MultiPoly::Exponents exps;
  bool operator<(const MonoKey& o) const { return std::tie(den, exps) < std::tie(o.den, o.exps); }
};

void add_monomials(std::map<MonoKey, Sparse>& acc, const LocalizedElem& e, int row, int col, const Rational& s) {
  for (const auto& [ex, c] : e.num().terms()) {
    Rational& slot = acc[MonoKey{e.den(), ex}][{row, col}];
    slot += c * s;
  }
}

void prune(Sparse& m) {
  for (auto it = m.begin(); it != m.end();) it = is_zero(it->second) ? m.erase(it) : std::next(it);
}

// Expresses m over the solid basis; returns false when a residue remains. Coefficients land in coeffs.
bool expand_over_solid(const Problem& p, Sparse m, std::map<int, Rational>& coeffs) {
  prune(m);
  for (std::size_t l = 0; l < p.solid.size() && !m.empty(); ++l) {
    const auto& a = p.solid[l];
    auto it = m.find({a.lead.row, a.lead.col});
    if (it == m.end()) continue;
    Rational c = it->second;
    coeffs[int(l)] += c;
    for (const auto& e : a.entries) m[{e.row, e.col}] -= c * e.value;
    prune(m);
  }
  return m.empty();
}

std::string name_of(const Problem& p, int cls) { return p.classes.at(cls).name; }

}  // namespace

std::vector<Diagnostic> validate(const Problem& p) {
  std::vector<Diagnostic> out;
  auto fail = [&](const std::string& axiom, const std::string& msg) { out.push_back({axiom, msg}); };
  int t = p.size();
  int nc = int(p.classes.size());
  if (int(p.origin.size()) != t) fail("partition", "origin map length differs from index count");
  std::vector<int> class_count(nc, 0);
  for (int i = 0; i < t; ++i) {
    if (p.class_of[i] < 0 || p.class_of[i] >= nc) {
      fail("partition", "index " + std::to_string(i + 1) + " has no class");
      return out;
    }
    ++class_count[p.class_of[i]];
  }
  for (int c = 0; c < nc; ++c) {
    const auto& vc = p.classes[c];
    if (class_count[c] == 0) fail("partition", "class " + vc.name + " is empty");
    if (!vc.nontrivial && !vc.forbidden.empty()) fail("minimal-algebra", "trivial class " + vc.name + " has forbidden factors");
    for (const auto& f : vc.forbidden)
      if (f.degree() < 1 || f.leading() != 1) fail("minimal-algebra", "forbidden factor of " + vc.name + " is not monic");
    if (vc.nontrivial && vc.param.empty()) fail("minimal-algebra", "class " + vc.name + " lacks a parameter name");
  }

  auto check_value = [&](const LocalizedElem& v, int cr, int cc, const std::string& who) {
    std::vector<int> cls{cr, cc};
    for (int s = 0; s < 2; ++s) {
      const auto& vc = p.classes[cls[s]];
      if (!vc.nontrivial) {
        auto sup = v.num().support_slots();
        if (std::find(sup.begin(), sup.end(), s) != sup.end() || !v.den()[s].empty())
          fail("ring", who + " uses a parameter on trivial class " + vc.name);
      }
      for (const auto& [f, k] : v.den()[s])
        if (std::find(vc.forbidden.begin(), vc.forbidden.end(), f) == vc.forbidden.end())
          fail("ring", who + " divides by a factor not inverted in " + vc.name);
    }
  };

  for (std::size_t j = 0; j < p.dotted.size(); ++j) {
    const auto& v = p.dotted[j];
    std::string who = "dotted " + v.name;
    if (v.entries.empty()) fail("dotted-basis", who + " is zero");
    for (const auto& e : v.entries) {
      if (e.row < 0 || e.col >= t || e.row >= e.col) {
        fail("strictly-upper", who + " has entry (" + std::to_string(e.row + 1) + "," + std::to_string(e.col + 1) + ")");
        continue;
      }
      if (p.class_of[e.row] != v.source || p.class_of[e.col] != v.target)
        fail("class-homogeneous", who + " leaves E_" + name_of(p, v.source) + " N E_" + name_of(p, v.target));
      if (e.value.is_zero()) fail("dotted-basis", who + " stores a zero entry");
      check_value(e.value, p.class_of[e.row], p.class_of[e.col], who);
    }
  }

  for (std::size_t i = 0; i < p.solid.size(); ++i) {
    const auto& a = p.solid[i];
    std::string who = "solid " + a.name;
    if (a.entries.empty()) {
      fail("normalized-basis", who + " is zero");
      continue;
    }
    bool lead_ok = false;
    for (const auto& e : a.entries) {
      if (e.row < 0 || e.row >= t || e.col < 0 || e.col >= t) {
        fail("shape", who + " has an entry outside the matrix");
        continue;
      }
      if (p.class_of[e.row] != a.source || p.class_of[e.col] != a.target)
        fail("class-homogeneous", who + " leaves E_" + name_of(p, a.source) + " M E_" + name_of(p, a.target));
      if (is_zero(e.value)) fail("normalized-basis", who + " stores a zero entry");
      if (position_less({e.row, e.col}, a.lead)) fail("normalized-basis", who + " has an entry before its lead");
      if (Pos{e.row, e.col} == a.lead) lead_ok = e.value == 1;
    }
    if (!lead_ok) fail("normalized-basis", who + " lead entry is not 1");
    if (i > 0 && !position_less(p.solid[i - 1].lead, a.lead))
      fail("normalized-basis", "leads of " + p.solid[i - 1].name + " and " + a.name + " are not increasing");
    for (std::size_t k = 0; k < p.solid.size(); ++k) {
      if (k == i) continue;
      for (const auto& e : p.solid[k].entries)
        if (Pos{e.row, e.col} == a.lead)
          fail("normalized-basis", p.solid[k].name + " is nonzero at the lead of " + a.name);
    }
  }

  for (const auto& e : p.h) {
    if (p.class_of[e.row] != p.class_of[e.col]) {
      fail("h-block-diagonal", "H entry (" + std::to_string(e.row + 1) + "," + std::to_string(e.col + 1) + ") joins two classes");
      continue;
    }
    if (e.value.degree() > 1) fail("h-degree", "H entry exceeds degree one");
    if (!p.classes[p.class_of[e.row]].nontrivial && e.value.degree() > 0)
      fail("ring", "H uses a parameter on a trivial class");
  }
  if (!out.empty()) return out;

  // Triangularity: V A_i and A_i V expand over A_l with l > i.
  for (std::size_t i = 0; i < p.solid.size(); ++i) {
    const auto& a = p.solid[i];
    for (std::size_t j = 0; j < p.dotted.size(); ++j) {
      const auto& v = p.dotted[j];
      std::map<MonoKey, Sparse> right_prod, left_prod;
      for (const auto& ve : v.entries)
        for (const auto& ae : a.entries) {
          if (ve.col == ae.row) add_monomials(right_prod, ve.value, ve.row, ae.col, ae.value);
          if (ae.col == ve.row) add_monomials(left_prod, ve.value, ae.row, ve.col, ae.value);
        }
      for (auto* prod : {&right_prod, &left_prod})
        for (auto& [key, m] : *prod) {
          std::map<int, Rational> coeffs;
          bool ok = expand_over_solid(p, m, coeffs);
          bool early = std::any_of(coeffs.begin(), coeffs.end(),
                                   [&](const auto& kv) { return kv.first <= int(i) && !is_zero(kv.second); });
          if (!ok || early)
            fail("triangularity", "product of " + v.name + " and " + a.name +
                                      (ok ? " involves an earlier solid element" : " leaves the span of M_1"));
        }
    }
  }

  // Derivation: V H - H V lies in M_1.
  std::vector<std::vector<const HEntry*>> h_row(t), h_col(t);
  for (const auto& e : p.h) {
    h_row[e.row].push_back(&e);
    h_col[e.col].push_back(&e);
  }
  for (const auto& v : p.dotted) {
    std::map<MonoKey, Sparse> d;
    for (const auto& ve : v.entries) {
      for (const HEntry* he : h_row[ve.col])
        add_monomials(d, ve.value * LocalizedElem(MultiPoly::from_poly(2, 1, he->value)), ve.row, he->col, 1);
      for (const HEntry* he : h_col[ve.row])
        add_monomials(d, LocalizedElem(MultiPoly::from_poly(2, 0, he->value)) * ve.value, he->row, ve.col, -1);
    }
    for (auto& [key, m] : d) {
      std::map<int, Rational> coeffs;
      if (!expand_over_solid(p, m, coeffs)) fail("derivation", "d(" + v.name + ") = " + v.name + "H - H" + v.name + " leaves M_1");
    }
  }
  return out;
}

std::vector<StructureConstant> mu11(const Problem& p) {
  for (const auto& v : p.dotted)
    for (const auto& e : v.entries)
      if (!e.value.is_constant())
        throw Error("Unsupported", "structure constants need scalar dotted entries");
  int t = p.size();
  std::vector<std::pair<int, int>> positions;
  std::map<std::pair<int, int>, int> pos_index;
  for (int r = 0; r < t; ++r)
    for (int c = r + 1; c < t; ++c) {
      pos_index[{r, c}] = int(positions.size());
      positions.push_back({r, c});
    }
  int m = int(p.dotted.size());
  RatMatrix basis(int(positions.size()), m);
  for (int j = 0; j < m; ++j)
    for (const auto& e : p.dotted[j].entries) basis(pos_index[{e.row, e.col}], j) = e.value.constant_term();
  RrefResult rr = rref(basis);
  std::vector<StructureConstant> out;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      RatMatrix prod(int(positions.size()), 1);
      bool nonzero = false;
      for (const auto& a : p.dotted[i].entries)
        for (const auto& b : p.dotted[j].entries)
          if (a.col == b.row) {
            prod(pos_index[{a.row, b.col}], 0) += a.value.constant_term() * b.value.constant_term();
            nonzero = true;
          }
      if (!nonzero || prod.is_zero()) continue;
      RatMatrix y = rr.transform * prod;
      for (int r = int(rr.pivots.size()); r < y.rows(); ++r)
        if (!is_zero(y(r, 0)))
          throw Error("ClosureFailure", "V" + std::to_string(i + 1) + "V" + std::to_string(j + 1) + " leaves K_1");
      for (std::size_t r = 0; r < rr.pivots.size(); ++r)
        if (!is_zero(y(int(r), 0))) out.push_back({i, j, rr.pivots[r], y(int(r), 0)});
    }
  return out;
}

}  // namespace mbp
