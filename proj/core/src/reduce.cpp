#include "mbp/reduce.hpp"

#include "mbp/error.hpp"

#include <algorithm>
#include <set>

namespace mbp {

namespace {

std::string fresh_name(const std::set<std::string>& used, const std::string& base) {
  std::string n = base;
  while (used.count(n)) n += "'";
  return n;
}

std::set<std::string> class_names(const Problem& p, const std::vector<int>& skip = {}) {
  std::set<std::string> s;
  for (std::size_t c = 0; c < p.classes.size(); ++c)
    if (std::find(skip.begin(), skip.end(), int(c)) == skip.end()) s.insert(p.classes[c].name);
  return s;
}

std::string fresh_param(const Problem& p) {
  std::set<std::string> used;
  for (const auto& c : p.classes)
    if (c.nontrivial) used.insert(c.param);
  for (const char* n : {"x", "y", "z", "w"})
    if (!used.count(n)) return n;
  for (int k = 1;; ++k)
    if (!used.count("x" + std::to_string(k))) return "x" + std::to_string(k);
}

std::string pair_suffix(int p, int q) {
  if (p < 9 && q < 9) return std::to_string(p + 1) + std::to_string(q + 1);
  return std::to_string(p + 1) + "," + std::to_string(q + 1);
}

SlotAction identity_action(int cls, bool nontrivial) {
  SlotAction a;
  a.slots = {cls};
  a.param = {nontrivial};
  a.scalar = RatMatrix(1, 1);
  return a;
}

Induction identity_induction(const Problem& p) {
  Induction ind;
  ind.classes = p.classes;
  for (std::size_t c = 0; c < p.classes.size(); ++c) ind.action.push_back(identity_action(int(c), p.classes[c].nontrivial));
  return ind;
}

// Powers of the slot action: (W^a D(W)^{-1}) restricted to scalar slots.
RatMatrix scalar_factor(const SlotAction& act, int a, const LocalizedElem::Denominator& den) {
  int n = int(act.slots.size());
  std::vector<int> sc;
  for (int s = 0; s < n; ++s)
    if (!act.param[s]) sc.push_back(s);
  int k = int(sc.size());
  RatMatrix g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = act.scalar(sc[i], sc[j]);
  RatMatrix m = g.power(a);
  RatMatrix d = RatMatrix::identity(k);
  for (const auto& [f, e] : den) d = d * f.eval(g).power(e);
  auto di = inverse(d);
  if (!di) throw Error("NonRegular", "a forbidden factor vanishes on the scalar slots");
  m = m * *di;
  RatMatrix out(n, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(sc[i], sc[j]) = m(i, j);
  return out;
}

// Factor contributed by one tensor slot, as an element in slot `slot` of a two-slot tensor.
LocalizedElem slot_value(const SlotAction& act, bool old_nontrivial, int slot, int a,
                         const LocalizedElem::Denominator& den, int row, int col, const RatMatrix& scalar) {
  if (!old_nontrivial) {
    if (a != 0 || !den.empty()) throw Error("InvalidInduction", "parameter on a trivial class");
    return row == col ? LocalizedElem::constant(2, 1) : LocalizedElem(2);
  }
  if (act.param[row] != act.param[col]) return LocalizedElem(2);
  if (act.param[row]) {
    if (row != col) return LocalizedElem(2);
    MultiPoly m(2);
    MultiPoly::Exponents e(2, 0);
    e[slot] = a;
    m.add_term(e, 1);
    std::vector<LocalizedElem::Denominator> d(2);
    d[slot] = den;
    return LocalizedElem(std::move(m), std::move(d));
  }
  return LocalizedElem::constant(2, scalar(row, col));
}

struct Induced {
  Problem problem;
  Induction induction;  // slots refer to the classes of `problem`
};

Induced induce(const Problem& p, const Induction& ind) {
  int nc_old = int(p.classes.size());
  if (int(ind.action.size()) != nc_old) throw Error("InvalidInduction", "one slot action per class is required");
  for (const auto& act : ind.action) {
    int n = int(act.slots.size());
    if (int(act.param.size()) != n) throw Error("InvalidInduction", "parameter flags do not match the slots");
    if (n > 0 && (act.scalar.rows() != n || act.scalar.cols() != n))
      throw Error("InvalidInduction", "slot action has the wrong size");
    for (int s : act.slots)
      if (s < 0 || s >= int(ind.classes.size())) throw Error("InvalidInduction", "slot class out of range");
    for (int s = 0; s < n; ++s)
      if (act.param[s] && !ind.classes[act.slots[s]].nontrivial)
        throw Error("InvalidInduction", "parameter slot in a trivial class");
  }

  // New indices, i-major.
  std::vector<std::vector<int>> idx(p.size());
  std::vector<int> class_of, origin;
  for (int i = 0; i < p.size(); ++i) {
    const auto& act = ind.action[p.class_of[i]];
    for (int s : act.slots) {
      idx[i].push_back(int(class_of.size()));
      class_of.push_back(s);
      origin.push_back(p.origin.empty() ? i : p.origin[i]);
    }
  }

  Problem q;
  q.classes = ind.classes;
  q.class_of = class_of;
  q.origin = origin;

  std::set<std::string> names;
  for (const auto& v : p.dotted) names.insert(v.name);

  // F part.
  for (int c = 0; c < nc_old; ++c) {
    const auto& act = ind.action[c];
    int n = int(act.slots.size());
    for (const auto& f : act.radical) {
      if (f.rows() != n || f.cols() != n) throw Error("InvalidInduction", "radical element has the wrong size");
      DottedElement d;
      d.name = fresh_name(names, ind.radical_name);
      names.insert(d.name);
      d.source = d.target = -1;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (is_zero(f(a, b))) continue;
          if (a >= b) throw Error("InvalidInduction", "radical element is not strictly upper");
          if (d.source < 0) {
            d.source = act.slots[a];
            d.target = act.slots[b];
          } else if (d.source != act.slots[a] || d.target != act.slots[b]) {
            throw Error("InvalidInduction", "radical element mixes class pairs");
          }
        }
      if (d.source < 0) continue;
      for (int i : p.indices_of(c))
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            if (!is_zero(f(a, b))) d.entries.push_back({idx[i][a], idx[i][b], LocalizedElem::constant(2, f(a, b))});
      q.dotted.push_back(std::move(d));
    }
  }

  // U' part: splits of the old dotted elements.
  for (const auto& v : p.dotted) {
    const auto& ax = ind.action[v.source];
    const auto& ay = ind.action[v.target];
    bool ntx = p.classes[v.source].nontrivial, nty = p.classes[v.target].nontrivial;
    int nx = int(ax.slots.size()), ny = int(ay.slots.size());
    for (int pp = 0; pp < nx; ++pp)
      for (int qq = 0; qq < ny; ++qq) {
        DottedElement d;
        d.name = nx * ny > 1 ? v.name + "_" + pair_suffix(pp, qq) : v.name;
        d.source = ax.slots[pp];
        d.target = ay.slots[qq];
        for (const auto& e : v.entries) {
          const auto& den = e.value.den();
          for (int p2 = 0; p2 < nx; ++p2)
            for (int q2 = 0; q2 < ny; ++q2) {
              LocalizedElem val(2);
              for (const auto& [ex, cf] : e.value.num().terms()) {
                RatMatrix ls = ntx ? scalar_factor(ax, ex[0], den[0]) : RatMatrix();
                RatMatrix rs = nty ? scalar_factor(ay, ex[1], den[1]) : RatMatrix();
                LocalizedElem l = slot_value(ax, ntx, 0, ex[0], den[0], p2, pp, ls);
                if (l.is_zero()) continue;
                LocalizedElem r = slot_value(ay, nty, 1, ex[1], den[1], qq, q2, rs);
                if (r.is_zero()) continue;
                val += l * r * cf;
              }
              if (!val.is_zero()) d.entries.push_back({idx[e.row][p2], idx[e.col][q2], val});
            }
        }
        if (!d.entries.empty()) q.dotted.push_back(std::move(d));
      }
  }

  // M' part.
  for (std::size_t i = ind.absorb_first ? 1 : 0; i < p.solid.size(); ++i) {
    const auto& a = p.solid[i];
    const auto& ax = ind.action[a.source];
    const auto& ay = ind.action[a.target];
    int nx = int(ax.slots.size()), ny = int(ay.slots.size());
    for (int pp = 0; pp < nx; ++pp)
      for (int qq = 0; qq < ny; ++qq) {
        SolidElement s;
        s.name = nx * ny > 1 ? a.name + "_" + pair_suffix(pp, qq) : a.name;
        s.source = ax.slots[pp];
        s.target = ay.slots[qq];
        for (const auto& e : a.entries) s.entries.push_back({idx[e.row][pp], idx[e.col][qq], e.value});
        q.solid.push_back(std::move(s));
      }
  }

  // H'.
  std::map<std::pair<int, int>, Poly> h;
  for (const auto& e : p.h) {
    int c = p.class_of[e.row];
    const auto& act = ind.action[c];
    int n = int(act.slots.size());
    Rational h0 = e.value.coeff(0), h1 = e.value.coeff(1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Poly val;
        if (act.param[a] || act.param[b]) {
          if (a == b) val = Poly::linear(h0, h1);
        } else {
          Rational s = (a == b ? h0 : Rational(0)) + h1 * act.scalar(a, b);
          val = Poly(s);
        }
        if (!val.is_zero()) h[{idx[e.row][a], idx[e.col][b]}] += val;
      }
  }
  if (ind.absorb_first) {
    if (p.solid.empty()) throw Error("InvalidInduction", "no first solid element to absorb");
    const auto& a = p.solid[0];
    const auto& ax = ind.action[a.source];
    const auto& ay = ind.action[a.target];
    int nx = int(ax.slots.size()), ny = int(ay.slots.size());
    if (nx > 0 && ny > 0 &&
        (int(ind.first_value.size()) != nx || std::any_of(ind.first_value.begin(), ind.first_value.end(),
                                                          [&](const auto& r) { return int(r.size()) != ny; })))
      throw Error("InvalidInduction", "value of the first solid element has the wrong shape");
    for (int pp = 0; pp < nx; ++pp)
      for (int qq = 0; qq < ny; ++qq) {
        const Poly& f = ind.first_value[pp][qq];
        if (f.is_zero()) continue;
        if (ax.slots[pp] != ay.slots[qq]) throw Error("InvalidInduction", "value of the first solid element joins two classes");
        for (const auto& e : a.entries) h[{idx[e.row][pp], idx[e.col][qq]}] += f * e.value;
      }
  }
  for (auto& [pos, val] : h)
    if (!val.is_zero()) q.h.push_back({pos.first, pos.second, val});

  // Drop linearly dependent scalar dotted splits.
  bool scalar = std::all_of(q.dotted.begin(), q.dotted.end(), [](const DottedElement& d) {
    return std::all_of(d.entries.begin(), d.entries.end(), [](const DottedEntry& e) { return e.value.is_constant(); });
  });
  if (scalar && !q.dotted.empty()) {
    int t = q.size();
    std::vector<DottedElement> kept;
    RatMatrix acc(0, t * t);
    for (auto& d : q.dotted) {
      RatMatrix row(1, t * t);
      for (const auto& e : d.entries) row(0, e.row * t + e.col) = e.value.constant_term();
      RatMatrix trial(acc.rows() + 1, t * t);
      trial.set_block(0, 0, acc);
      trial.set_block(acc.rows(), 0, row);
      if (rank(trial) > acc.rows()) {
        acc = trial;
        kept.push_back(std::move(d));
      }
    }
    q.dotted = std::move(kept);
  }

  // Compact classes without indices.
  std::vector<int> used(q.classes.size(), 0);
  for (int c : q.class_of) used[c] = 1;
  std::vector<int> remap(q.classes.size(), -1);
  std::vector<VertexClass> classes;
  for (std::size_t c = 0; c < q.classes.size(); ++c)
    if (used[c]) {
      remap[c] = int(classes.size());
      classes.push_back(q.classes[c]);
    }
  q.classes = classes;
  for (int& c : q.class_of) c = remap[c];
  for (auto& d : q.dotted) d.source = remap[d.source], d.target = remap[d.target];
  for (auto& s : q.solid) s.source = remap[s.source], s.target = remap[s.target];
  canonicalize(q);

  Induced out{std::move(q), ind};
  out.induction.classes = out.problem.classes;
  for (auto& act : out.induction.action)
    for (int& s : act.slots) s = remap[s];
  auto diag = validate(out.problem);
  if (!diag.empty())
    throw Error("InvalidInduction", "induced problem violates " + diag.front().axiom + ": " + diag.front().message);
  return out;
}

void require_first(const Problem& p) {
  if (p.solid.empty()) throw Error("PreconditionFailed", "the problem has no solid element");
}

void require_delta_zero(const Problem& p) {
  require_first(p);
  if (!differential(p, 0).is_zero())
    throw Error("PreconditionFailed", "delta(" + p.solid[0].name + ") is not zero",
                {{"arrow", p.solid[0].name}, {"delta", render_differential(p, differential(p, 0))}});
}

StepResult make_step(const Problem& p, const std::string& kind, const Induction& ind) {
  Induced r = induce(p, ind);
  StepResult out{ReductionStep{}, r.problem};
  out.step.kind = kind;
  out.step.induction = r.induction;
  out.step.info = nlohmann::json::object();
  out.step.before = std::make_shared<const Problem>(p);
  out.step.after = std::make_shared<const Problem>(r.problem);
  return out;
}

// Basis of {F strictly upper : F G = G F} split by class pairs of the slots.
std::vector<RatMatrix> strict_centralizer(const RatMatrix& g, const std::vector<int>& slot_class) {
  int n = g.rows();
  std::map<std::pair<int, int>, std::vector<Pos>> groups;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) groups[{slot_class[a], slot_class[b]}].push_back({a, b});
  std::vector<RatMatrix> out;
  for (const auto& [key, cells] : groups) {
    int k = int(cells.size());
    RatMatrix eq(n * n, k);
    for (int u = 0; u < k; ++u) {
      RatMatrix f(n, n);
      f(cells[u].row, cells[u].col) = 1;
      RatMatrix c = f * g - g * f;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) eq(i * n + j, u) = c(i, j);
    }
    RatMatrix ns = nullspace(eq);
    std::vector<RatMatrix> span;
    for (int col = 0; col < ns.cols(); ++col) {
      RatMatrix f(n, n);
      for (int u = 0; u < k; ++u) f(cells[u].row, cells[u].col) = ns(u, col);
      span.push_back(f);
    }
    for (auto& nb : normalized_basis(span)) out.push_back(nb.matrix);
  }
  std::stable_sort(out.begin(), out.end(), [](const RatMatrix& a, const RatMatrix& b) {
    return position_less(leading_entry(a)->first, leading_entry(b)->first);
  });
  return out;
}

}  // namespace

Problem admissible_induce(const Problem& p, const Induction& ind) { return induce(p, ind).problem; }

StepResult regularization(const Problem& p) {
  require_first(p);
  const auto& a1 = p.solid[0];
  Differential d = differential(p, 0);
  if (!d.linear_only()) throw Error("Internal", "delta of the first solid element has bilinear terms");
  SlotRings rings = p.rings({a1.source, a1.target});
  auto payload = [&]() {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : d.linear)
      terms.push_back({{"dotted", p.dotted[t.dotted].name},
                       {"coeff", t.coeff.to_string(p.coefficient_names(a1.source, a1.target))}});
    return nlohmann::json{{"arrow", a1.name}, {"delta", render_differential(p, d)}, {"terms", terms}};
  };
  if (d.linear.empty()) throw Error("NotRegularizable", "delta(" + a1.name + ") = 0", payload());
  int piv = -1;
  std::optional<LocalizedElem> inv;
  for (std::size_t k = 0; k < d.linear.size() && piv < 0; ++k)
    if ((inv = unit_inverse(d.linear[k].coeff, rings))) piv = int(k);
  if (piv < 0)
    throw Error("NotRegularizable", "no linear coefficient of delta(" + a1.name + ") is invertible", payload());

  int vp = d.linear[piv].dotted;
  Problem q = p;
  std::vector<LinearTerm> subst;
  for (std::size_t k = 0; k < d.linear.size(); ++k) {
    if (int(k) == piv) continue;
    const auto& t = d.linear[k];
    LocalizedElem c = t.coeff * *inv;
    subst.push_back({t.dotted, -c});
    std::map<std::pair<int, int>, LocalizedElem> acc;
    for (const auto& e : q.dotted[t.dotted].entries) acc.emplace(std::make_pair(e.row, e.col), e.value);
    for (const auto& e : p.dotted[vp].entries) {
      LocalizedElem delta = -(c * e.value);
      auto it = acc.find({e.row, e.col});
      if (it == acc.end())
        acc.emplace(std::make_pair(e.row, e.col), delta);
      else
        it->second += delta;
    }
    auto& entries = q.dotted[t.dotted].entries;
    entries.clear();
    for (auto& [pos, val] : acc)
      if (!val.is_zero()) entries.push_back({pos.first, pos.second, val});
    if (entries.empty()) throw Error("Internal", "base change annihilated " + q.dotted[t.dotted].name);
  }
  q.dotted.erase(q.dotted.begin() + vp);
  q.solid.erase(q.solid.begin());
  canonicalize(q);
  auto diag = validate(q);
  if (!diag.empty()) throw Error("Internal", "regularization broke " + diag.front().axiom + ": " + diag.front().message);

  StepResult out{ReductionStep{}, q};
  out.step.kind = "regularization";
  out.step.arrow = a1.name;
  out.step.induction = identity_induction(p);
  std::string sub = p.dotted[vp].name + " = " + render_linear(p, subst);
  out.step.info = {{"pivot", p.dotted[vp].name},
                   {"coefficient", d.linear[piv].coeff.to_string(p.coefficient_names(a1.source, a1.target))},
                   {"substitution", sub},
                   {"localized_factors", nlohmann::json::array()}};
  out.step.before = std::make_shared<const Problem>(p);
  out.step.after = std::make_shared<const Problem>(q);
  return out;
}

Problem base_change_dotted(const Problem& p, const RatMatrix& f) {
  int m = int(p.dotted.size());
  if (f.rows() != m || f.cols() != m) throw Error("ShapeError", "base change has the wrong size");
  auto fi = inverse(f);
  if (!fi) throw Error("NotInvertible", "base change is singular");
  RatMatrix g = fi->transpose();
  Problem q = p;
  for (int k = 0; k < m; ++k) {
    std::map<std::pair<int, int>, LocalizedElem> acc;
    for (int j = 0; j < m; ++j) {
      if (is_zero(g(j, k))) continue;
      if (p.dotted[j].source != p.dotted[k].source || p.dotted[j].target != p.dotted[k].target)
        throw Error("NotHomogeneous", "base change mixes " + p.dotted[j].name + " and " + p.dotted[k].name);
      for (const auto& e : p.dotted[j].entries) {
        LocalizedElem v = e.value * g(j, k);
        auto it = acc.find({e.row, e.col});
        if (it == acc.end())
          acc.emplace(std::make_pair(e.row, e.col), v);
        else
          it->second += v;
      }
    }
    auto& entries = q.dotted[k].entries;
    entries.clear();
    for (auto& [pos, val] : acc)
      if (!val.is_zero()) entries.push_back({pos.first, pos.second, val});
  }
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      if (!is_zero(f(j, k)) &&
          (p.dotted[j].source != p.dotted[k].source || p.dotted[j].target != p.dotted[k].target))
        throw Error("NotHomogeneous", "base change mixes " + p.dotted[j].name + " and " + p.dotted[k].name);
  return q;
}

namespace {

StepResult edge_impl(const Problem& p, bool z1, bool z2, bool z3) {
  require_delta_zero(p);
  const auto& a1 = p.solid[0];
  int x = a1.source, y = a1.target;
  if (x == y) throw Error("PreconditionFailed", "edge reduction needs two distinct classes");
  if (p.classes[x].nontrivial || p.classes[y].nontrivial)
    throw Error("PreconditionFailed", "edge reduction needs trivial classes");
  Induction ind;
  ind.classes = p.classes;
  auto used = class_names(p, {x, y});
  int count = int(z1) + int(z2) + int(z3);
  auto add = [&](const std::string& base) {
    std::string n = fresh_name(used, count == 1 ? std::string("Z") : base);
    used.insert(n);
    ind.classes.push_back({n, false, {}, ""});
    return int(ind.classes.size()) - 1;
  };
  int c1 = -1, c2 = -1, c3 = -1;
  if (z1) c1 = add("Z1");
  if (z2) c2 = add("Z2");
  if (z3) c3 = add("Z3");
  for (std::size_t c = 0; c < p.classes.size(); ++c) ind.action.push_back(identity_action(int(c), p.classes[c].nontrivial));
  auto build = [](std::vector<int> slots) {
    SlotAction a;
    a.slots = slots;
    a.param.assign(slots.size(), false);
    a.scalar = RatMatrix(int(slots.size()), int(slots.size()));
    if (slots.size() == 2) {
      RatMatrix f(2, 2);
      f(0, 1) = 1;
      a.radical.push_back(f);
    }
    return a;
  };
  std::vector<int> sx, sy;
  if (z2) sx.push_back(c2);
  if (z1) sx.push_back(c1);
  if (z3) sy.push_back(c3);
  if (z2) sy.push_back(c2);
  ind.action[x] = build(sx);
  ind.action[y] = build(sy);
  ind.absorb_first = true;
  ind.first_value.assign(sx.size(), std::vector<Poly>(sy.size()));
  if (z2) ind.first_value[0][sy.size() - 1] = Poly(Rational(1));
  StepResult r = make_step(p, "edge", ind);
  r.step.arrow = a1.name;
  return r;
}

}  // namespace

StepResult edge_reduction(const Problem& p) {
  StepResult r = edge_impl(p, true, true, true);
  r.step.info["full"] = true;
  return r;
}

StepResult edge_reduction(const Problem& p, int rk, int m_x, int m_y) {
  if (rk < 0 || rk > std::min(m_x, m_y)) throw Error("PreconditionFailed", "rank out of range");
  StepResult r = edge_impl(p, m_x - rk > 0, rk > 0, m_y - rk > 0);
  RatMatrix b(m_x, m_y);
  for (int i = 0; i < rk; ++i) b(i, m_y - rk + i) = 1;
  r.step.b = b;
  r.step.links = rk;
  r.step.info["rank"] = rk;
  r.step.info["sizes"] = {m_x, m_y};
  return r;
}

StepResult loop_reduction(const Problem& p, const JordanData& jd) {
  require_delta_zero(p);
  const auto& a1 = p.solid[0];
  int x = a1.source;
  if (a1.target != x) throw Error("PreconditionFailed", "loop reduction needs a loop");
  if (p.classes[x].nontrivial) throw Error("PreconditionFailed", "loop reduction needs a trivial class");
  if (jd.eigen.empty()) throw Error("PreconditionFailed", "empty Jordan data");
  Induction ind;
  ind.classes = p.classes;
  for (std::size_t c = 0; c < p.classes.size(); ++c) ind.action.push_back(identity_action(int(c), p.classes[c].nontrivial));
  std::vector<std::pair<int, int>> present;  // (i, j) with e_ij > 0
  for (std::size_t i = 0; i < jd.eigen.size(); ++i)
    for (std::size_t j = 1; j <= jd.eigen[i].blocks.size(); ++j)
      if (jd.eigen[i].blocks[j - 1] > 0) present.push_back({int(i), int(j)});
  auto used = class_names(p, {x});
  std::map<std::pair<int, int>, int> cls;
  for (auto [i, j] : present) {
    std::string base = present.size() == 1 ? p.classes[x].name : p.classes[x].name + "_" + pair_suffix(i, j - 1);
    std::string n = fresh_name(used, base);
    used.insert(n);
    ind.classes.push_back({n, false, {}, ""});
    cls[{i, j}] = int(ind.classes.size()) - 1;
  }
  // Slots (i, j, l) ordered by i, then l, then j descending.
  struct Slot {
    int i, j, l;
  };
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < jd.eigen.size(); ++i) {
    int r = jd.eigen[i].max_block();
    for (int l = 1; l <= r; ++l)
      for (int j = r; j >= l; --j)
        if (cls.count({int(i), j})) slots.push_back({int(i), j, l});
  }
  int n = int(slots.size());
  SlotAction act;
  act.scalar = RatMatrix(n, n);
  for (int s = 0; s < n; ++s) {
    act.slots.push_back(cls[{slots[s].i, slots[s].j}]);
    act.param.push_back(false);
    act.scalar(s, s) = jd.eigen[slots[s].i].lambda;
    for (int u = 0; u < n; ++u)
      if (slots[u].i == slots[s].i && slots[u].j == slots[s].j && slots[u].l == slots[s].l + 1) act.scalar(s, u) = 1;
  }
  act.radical = strict_centralizer(act.scalar, act.slots);
  nlohmann::json slot_sizes = nlohmann::json::array();
  for (const auto& sl : slots) slot_sizes.push_back(jd.eigen[sl.i].blocks[sl.j - 1]);
  ind.action[x] = act;
  ind.absorb_first = true;
  ind.first_value.assign(n, std::vector<Poly>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ind.first_value[a][b] = Poly(act.scalar(a, b));
  StepResult r = make_step(p, "loop", ind);
  r.step.arrow = a1.name;
  r.step.b = weyr_matrix(jd).matrix;
  int links = 0;
  nlohmann::json jj = nlohmann::json::array();
  for (const auto& e : jd.eigen) {
    for (std::size_t j = 1; j <= e.blocks.size(); ++j) links += int(j - 1) * e.blocks[j - 1];
    jj.push_back({{"lambda", to_string(e.lambda)}, {"blocks", e.blocks}});
  }
  r.step.links = links;
  r.step.info["jordan"] = jj;
  r.step.info["slot_sizes"] = slot_sizes;
  return r;
}

StepResult loop_mutation(const Problem& p) {
  require_delta_zero(p);
  const auto& a1 = p.solid[0];
  int x = a1.source;
  if (a1.target != x) throw Error("PreconditionFailed", "loop mutation needs a loop");
  if (p.classes[x].nontrivial) throw Error("PreconditionFailed", "loop mutation needs a trivial class");
  Induction ind = identity_induction(p);
  ind.classes[x].nontrivial = true;
  ind.classes[x].param = fresh_param(p);
  ind.action[x].param = {true};
  ind.absorb_first = true;
  ind.first_value = {{Poly::x()}};
  StepResult r = make_step(p, "loop-mutation", ind);
  r.step.arrow = a1.name;
  r.step.info["param"] = ind.classes[x].param;
  return r;
}

StepResult localization(const Problem& p, int cls, const Poly& factor) {
  if (cls < 0 || cls >= int(p.classes.size())) throw Error("PreconditionFailed", "class out of range");
  if (!p.classes[cls].nontrivial) throw Error("PreconditionFailed", "localization needs a nontrivial class");
  if (factor.degree() < 1) throw Error("PreconditionFailed", "localization needs a nonconstant factor");
  Poly f = factor.monic();
  Induction ind = identity_induction(p);
  auto& fb = ind.classes[cls].forbidden;
  if (std::find(fb.begin(), fb.end(), f) == fb.end()) fb.push_back(f);
  StepResult r = make_step(p, "localization", ind);
  r.step.info["class"] = p.classes[cls].name;
  r.step.info["class_index"] = cls;
  r.step.info["localized_factors"] = {f.to_string(p.classes[cls].param)};
  nlohmann::json fc = nlohmann::json::array();
  for (const auto& c : f.coeffs()) fc.push_back(to_string(c));
  r.step.info["factor"] = fc;
  return r;
}

StepResult deletion(const Problem& p, const std::vector<int>& kept) {
  Induction ind = identity_induction(p);
  nlohmann::json deleted = nlohmann::json::array();
  for (std::size_t c = 0; c < p.classes.size(); ++c)
    if (std::find(kept.begin(), kept.end(), int(c)) == kept.end()) {
      ind.action[c].slots.clear();
      ind.action[c].param.clear();
      ind.action[c].scalar = RatMatrix();
      deleted.push_back(p.classes[c].name);
    }
  StepResult r = make_step(p, "deletion", ind);
  r.step.info["deleted"] = deleted;
  return r;
}

StepResult unraveling(const Problem& p, int cls, const std::vector<Rational>& lambdas, int depth, bool keep_parameter) {
  if (cls < 0 || cls >= int(p.classes.size())) throw Error("PreconditionFailed", "class out of range");
  const auto& vc = p.classes[cls];
  if (!vc.nontrivial) throw Error("PreconditionFailed", "unraveling needs a nontrivial class");
  if (depth < 1 || lambdas.empty()) throw Error("PreconditionFailed", "unraveling needs eigenvalues and a positive depth");
  std::vector<Rational> ls = lambdas;
  std::sort(ls.begin(), ls.end());
  if (std::adjacent_find(ls.begin(), ls.end()) != ls.end()) throw Error("PreconditionFailed", "eigenvalues repeat");
  for (const auto& l : ls)
    for (const auto& f : vc.forbidden)
      if (is_zero(f.eval(l)))
        throw Error("NonRegular", "eigenvalue " + to_string(l) + " is a root of a forbidden factor",
                    {{"class", vc.name}, {"lambda", to_string(l)}});
  Induction ind = identity_induction(p);
  auto used = class_names(p, {cls});
  std::map<std::pair<int, int>, int> zc;
  for (int i = 0; i < int(ls.size()); ++i)
    for (int j = 1; j <= depth; ++j) {
      std::string n = fresh_name(used, vc.name + "_" + pair_suffix(i, j - 1));
      used.insert(n);
      ind.classes.push_back({n, false, {}, ""});
      zc[{i, j}] = int(ind.classes.size()) - 1;
    }
  int z0 = -1;
  if (keep_parameter) {
    VertexClass c = vc;
    for (const auto& l : ls) c.forbidden.push_back(Poly::linear(-l, 1));
    c.name = fresh_name(used, vc.name);
    ind.classes.push_back(c);
    z0 = int(ind.classes.size()) - 1;
  }
  struct Slot {
    int i, j, l;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < int(ls.size()); ++i)
    for (int l = 1; l <= depth; ++l)
      for (int j = depth; j >= l; --j) slots.push_back({i, j, l});
  int n = int(slots.size()) + (keep_parameter ? 1 : 0);
  SlotAction act;
  act.scalar = RatMatrix(n, n);
  for (int s = 0; s < int(slots.size()); ++s) {
    act.slots.push_back(zc[{slots[s].i, slots[s].j}]);
    act.param.push_back(false);
    act.scalar(s, s) = ls[slots[s].i];
    for (int u = 0; u < int(slots.size()); ++u)
      if (slots[u].i == slots[s].i && slots[u].j == slots[s].j && slots[u].l == slots[s].l + 1) act.scalar(s, u) = 1;
  }
  if (keep_parameter) {
    act.slots.push_back(z0);
    act.param.push_back(true);
  }
  {
    int k = int(slots.size());
    RatMatrix g = act.scalar.block(0, 0, k, k);
    std::vector<int> sc(act.slots.begin(), act.slots.begin() + k);
    for (const auto& f : strict_centralizer(g, sc)) {
      RatMatrix big(n, n);
      big.set_block(0, 0, f);
      act.radical.push_back(big);
    }
  }
  ind.action[cls] = act;
  StepResult r = make_step(p, "unraveling", ind);
  nlohmann::json lj = nlohmann::json::array();
  for (const auto& l : ls) lj.push_back(to_string(l));
  r.step.info["class"] = vc.name;
  r.step.info["class_index"] = cls;
  r.step.info["lambdas"] = lj;
  r.step.info["depth"] = depth;
  r.step.info["keep_parameter"] = keep_parameter;
  return r;
}

StepResult prop226_zero(const Problem& p) {
  require_delta_zero(p);
  const auto& a1 = p.solid[0];
  if (a1.source == a1.target) throw Error("PreconditionFailed", "the first solid element is a loop");
  Induction ind = identity_induction(p);
  ind.absorb_first = true;
  ind.first_value = {{Poly()}};
  StepResult r = make_step(p, "prop226", ind);
  r.step.arrow = a1.name;
  return r;
}

StepResult prop227_identity(const Problem& p, bool experimental) {
  require_delta_zero(p);
  const auto& a1 = p.solid[0];
  int x = a1.source, y = a1.target;
  if (x == y) throw Error("PreconditionFailed", "the first solid element is a loop");
  const auto& cx = p.classes[x];
  const auto& cy = p.classes[y];
  if (cx.nontrivial && cy.nontrivial && !experimental)
    throw Error("Unsupported", "merging two nontrivial classes is experimental");
  Induction ind = identity_induction(p);
  VertexClass z;
  auto used = class_names(p, {x, y});
  z.name = fresh_name(used, "Z");
  z.nontrivial = cx.nontrivial || cy.nontrivial;
  if (z.nontrivial) {
    z.param = cx.nontrivial ? cx.param : cy.param;
    z.forbidden = cx.nontrivial ? cx.forbidden : cy.forbidden;
    if (cx.nontrivial && cy.nontrivial)
      for (const auto& f : cy.forbidden)
        if (std::find(z.forbidden.begin(), z.forbidden.end(), f) == z.forbidden.end()) z.forbidden.push_back(f);
  }
  ind.classes.push_back(z);
  int zc = int(ind.classes.size()) - 1;
  ind.action[x] = identity_action(zc, cx.nontrivial);
  ind.action[y] = identity_action(zc, cy.nontrivial);
  ind.absorb_first = true;
  ind.first_value = {{Poly(Rational(1))}};
  StepResult r = make_step(p, "prop227", ind);
  r.step.arrow = a1.name;
  r.step.info["experimental"] = cx.nontrivial && cy.nontrivial;
  return r;
}

std::vector<int> induced_sizes(const ReductionStep& step, const std::vector<int>& sizes) {
  const auto& ind = step.induction;
  if (sizes.size() != ind.action.size()) throw Error("ShapeError", "size vector does not match the problem");
  std::vector<int> out(ind.classes.size(), 0);
  const auto& info = step.info;
  int x = -1, y = -1;
  if ((step.kind == "edge" || step.kind == "loop") && step.before) {
    x = step.before->solid.at(0).source;
    y = step.before->solid.at(0).target;
  }
  for (std::size_t c = 0; c < ind.action.size(); ++c) {
    const auto& sl = ind.action[c].slots;
    if (int(c) == x || int(c) == y) continue;
    if (sl.size() > 1) throw Error("Unsupported", "sizes after " + step.kind + " depend on more than the size vector");
    if (!sl.empty()) out[sl[0]] = sizes[c];
  }
  if (step.kind == "edge") {
    if (!info.contains("rank")) throw Error("Unsupported", "sizes after a full edge reduction are not determined");
    int rk = info["rank"].get<int>(), mx = sizes[x], my = sizes[y];
    if (mx != info["sizes"][0].get<int>() || my != info["sizes"][1].get<int>())
      throw Error("ShapeError", "edge reduction was taken at other sizes");
    const auto& sx = ind.action[x].slots;
    const auto& sy = ind.action[y].slots;
    if (rk > 0) out[sx.front()] = rk, out[sy.back()] = rk;
    if (mx - rk > 0) out[sx.back()] = mx - rk;
    if (my - rk > 0) out[sy.front()] = my - rk;
  } else if (step.kind == "loop") {
    const auto& ss = info["slot_sizes"];
    int total = 0;
    for (std::size_t k = 0; k < ind.action[x].slots.size(); ++k) {
      out[ind.action[x].slots[k]] = ss[k].get<int>();
      total += ss[k].get<int>();
    }
    if (total != sizes[x]) throw Error("ShapeError", "Jordan data does not match the size");
  }
  return out;
}

std::vector<int> transport_size(const ReductionStep& step, const std::vector<int>& sizes) {
  const auto& ind = step.induction;
  if (sizes.size() != ind.classes.size()) throw Error("ShapeError", "size vector does not match the induced problem");
  std::vector<int> out;
  for (const auto& act : ind.action) {
    int m = 0;
    for (int s : act.slots) m += sizes[s];
    out.push_back(m);
  }
  return out;
}

Representation transport_rep(const ReductionStep& step, const Representation& rep) {
  if (!step.before || !step.after) throw Error("ShapeError", "step lacks its problems");
  const Problem& before = *step.before;
  const Problem& after = *step.after;
  check_representation(after, rep);
  std::vector<int> sizes = transport_size(step, rep.sizes);
  std::vector<RatMatrix> weyr(before.classes.size());
  for (std::size_t c = 0; c < before.classes.size(); ++c) {
    if (!before.classes[c].nontrivial) continue;
    const auto& act = step.induction.action[c];
    int n = int(act.slots.size());
    std::vector<int> off(n + 1, 0);
    for (int s = 0; s < n; ++s) off[s + 1] = off[s] + rep.sizes[act.slots[s]];
    RatMatrix w(off[n], off[n]);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (act.param[a] || act.param[b]) {
          if (a == b) w.set_block(off[a], off[a], rep.weyr[act.slots[a]]);
          continue;
        }
        if (is_zero(act.scalar(a, b))) continue;
        if (rep.sizes[act.slots[a]] != rep.sizes[act.slots[b]])
          throw Error("ShapeError", "scalar slot action joins blocks of different sizes");
        w.set_block(off[a], off[b], RatMatrix::identity(rep.sizes[act.slots[a]]) * act.scalar(a, b));
      }
    weyr[c] = w;
  }
  RatMatrix big = rep_matrix(after, rep);
  Representation out = rep_from_matrix(before, sizes, weyr, big);
  if (!(rep_matrix(before, out) == big))
    throw Error("TransportFailure", "transported representation does not reproduce the matrix");
  return out;
}

std::vector<int> unit_root_sizes(const Problem& root, const Problem& current) {
  std::vector<int> count(root.size(), 0);
  for (int o : current.origin) {
    if (o < 0 || o >= root.size()) throw Error("ShapeError", "origin map does not refer to the root problem");
    ++count[o];
  }
  std::vector<int> m(root.classes.size(), -1);
  for (int i = 0; i < root.size(); ++i) {
    int& s = m[root.class_of[i]];
    if (s >= 0 && s != count[i]) throw Error("ShapeError", "origin counts differ inside a class");
    s = count[i];
  }
  for (int& s : m) s = std::max(s, 0);
  return m;
}

DefiningSystem solve_defining_system(const Problem& root, const Problem& current) {
  if (!root.all_trivial() || !current.all_trivial())
    throw Error("Unsupported", "defining systems are built for trivial classes only");
  for (const auto& v : root.dotted)
    for (const auto& e : v.entries)
      if (!e.value.is_constant()) throw Error("Unsupported", "root dotted entries must be scalars");
  for (int j = 1; j < current.size(); ++j)
    if (current.origin[j] < current.origin[j - 1]) throw Error("ShapeError", "current indices are not grouped by origin");
  std::vector<int> m = unit_root_sizes(root, current);
  auto off = block_offsets(root, m);
  int t = off.back();
  if (t != current.size()) throw Error("ShapeError", "size vector does not match the current problem");

  // Phi as linear forms: phi[r][c] maps variable -> coefficient.
  using Form = std::map<int, Rational>;
  std::vector<std::vector<Form>> phi(t, std::vector<Form>(t));
  int nv = 0;
  for (std::size_t c = 0; c < root.classes.size(); ++c) {
    int mc = m[c];
    for (int a = 0; a < mc; ++a)
      for (int b = 0; b < mc; ++b) {
        int var = nv++;
        for (int i : root.indices_of(int(c))) phi[off[i] + a][off[i] + b][var] += 1;
      }
  }
  for (const auto& v : root.dotted) {
    int ms = m[v.source], mt = m[v.target];
    for (int a = 0; a < ms; ++a)
      for (int b = 0; b < mt; ++b) {
        int var = nv++;
        for (const auto& e : v.entries) phi[off[e.row] + a][off[e.col] + b][var] += e.value.constant_term();
      }
  }
  RatMatrix h(t, t);
  for (const auto& e : current.h) h(e.row, e.col) = e.value.coeff(0);

  auto equation = [&](int r, int c) {
    RatMatrix row(1, nv);
    for (int k = 0; k < t; ++k) {
      if (!is_zero(h(k, c)))
        for (const auto& [var, cf] : phi[r][k]) row(0, var) += cf * h(k, c);
      if (!is_zero(h(r, k)))
        for (const auto& [var, cf] : phi[k][c]) row(0, var) -= h(r, k) * cf;
    }
    return row;
  };
  std::optional<Pos> lead;
  if (!current.solid.empty()) lead = current.solid[0].lead;
  // Positions after the lead are still constrained when no remaining solid reaches them.
  std::set<std::pair<int, int>> open;
  for (const auto& a : current.solid)
    for (const auto& e : a.entries) open.insert({e.row, e.col});
  std::vector<RatMatrix> rows;
  for (const Pos& pos : ordered_positions(t, t)) {
    if (lead && !position_less(pos, *lead) && open.count({pos.row, pos.col})) continue;
    RatMatrix r = equation(pos.row, pos.col);
    if (!r.is_zero()) rows.push_back(r);
  }
  auto stack = [&](const std::vector<RatMatrix>& rs) {
    RatMatrix a(int(rs.size()), nv);
    for (std::size_t i = 0; i < rs.size(); ++i) a.set_block(int(i), 0, rs[i]);
    return a;
  };
  DefiningSystem ds;
  ds.variables = nv;
  RatMatrix a = stack(rows);
  ds.rank_before = rank(a);
  ds.basis = nullspace(a);
  if (lead) {
    rows.push_back(equation(lead->row, lead->col));
    ds.rank_with = rank(stack(rows));
  } else {
    ds.rank_with = ds.rank_before;
  }
  return ds;
}

}  // namespace mbp
