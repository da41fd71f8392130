#include "mbp/serialize.hpp"

#include "mbp/error.hpp"

#include <algorithm>

namespace mbp {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error("ParseError", what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) bad(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<int> int_list(const Json& j) {
  if (!j.is_array()) bad("expected an array of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) bad("expected an array of integers");
    out.push_back(v.get<int>());
  }
  return out;
}

int class_index(const Problem& p, const Json& j) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string())
    for (std::size_t c = 0; c < p.classes.size(); ++c)
      if (p.classes[c].name == j.get<std::string>()) return int(c);
  bad("unknown class " + j.dump());
}

}  // namespace

Json rational_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  bad("expected a rational, got " + j.dump());
}

Json matrix_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rational_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

RatMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) bad("a matrix is an array of rows");
  int r = int(j.size());
  int c = r ? int(j[0].size()) : 0;
  RatMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j[i].is_array() || int(j[i].size()) != c) bad("matrix rows differ in length");
    for (int k = 0; k < c; ++k) m(i, k) = rational_from_json(j[i][k]);
  }
  return m;
}

Json poly_json(const Poly& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(rational_json(c));
  return out;
}

Poly poly_from_json(const Json& j) {
  if (!j.is_array()) bad("a polynomial is an array of coefficients");
  std::vector<Rational> cs;
  for (const auto& c : j) cs.push_back(rational_from_json(c));
  return Poly(cs);
}

Json localized_json(const LocalizedElem& e) {
  Json num = Json::array();
  for (const auto& [exp, c] : e.num().terms()) num.push_back({{"exp", exp}, {"c", rational_json(c)}});
  Json out = {{"arity", e.arity()}, {"num", num}};
  if (!e.is_polynomial()) {
    Json den = Json::array();
    for (const auto& d : e.den()) {
      Json slot = Json::array();
      for (const auto& [f, k] : d) slot.push_back({{"factor", poly_json(f)}, {"power", k}});
      den.push_back(slot);
    }
    out["den"] = den;
  }
  return out;
}

LocalizedElem localized_from_json(const Json& j) {
  int arity = int_field(j, "arity");
  MultiPoly num(arity);
  for (const auto& t : field(j, "num")) {
    auto exp = int_list(field(t, "exp"));
    if (int(exp.size()) != arity) bad("exponent length differs from the arity");
    num.add_term(exp, rational_from_json(field(t, "c")));
  }
  if (!j.contains("den")) return LocalizedElem(num);
  std::vector<LocalizedElem::Denominator> den;
  for (const auto& slot : j.at("den")) {
    LocalizedElem::Denominator d;
    for (const auto& f : slot) d[poly_from_json(field(f, "factor"))] += int_field(f, "power");
    den.push_back(d);
  }
  if (int(den.size()) != arity) bad("denominator slots differ from the arity");
  return LocalizedElem(num, den);
}

Json problem_json(const Problem& p) {
  Json classes = Json::array();
  for (const auto& c : p.classes) {
    Json fb = Json::array();
    for (const auto& f : c.forbidden) fb.push_back(poly_json(f));
    Json cj = {{"name", c.name}, {"nontrivial", c.nontrivial}};
    if (c.nontrivial) {
      cj["param"] = c.param;
      cj["forbidden"] = fb;
    }
    classes.push_back(cj);
  }
  Json dotted = Json::array();
  for (const auto& v : p.dotted) {
    Json es = Json::array();
    for (const auto& e : v.entries) es.push_back({{"row", e.row}, {"col", e.col}, {"value", localized_json(e.value)}});
    dotted.push_back({{"name", v.name}, {"source", v.source}, {"target", v.target}, {"entries", es}});
  }
  Json solid = Json::array();
  for (const auto& a : p.solid) {
    Json es = Json::array();
    for (const auto& e : a.entries) es.push_back({{"row", e.row}, {"col", e.col}, {"value", rational_json(e.value)}});
    solid.push_back({{"name", a.name}, {"source", a.source}, {"target", a.target}, {"entries", es}});
  }
  Json h = Json::array();
  for (const auto& e : p.h) h.push_back({{"row", e.row}, {"col", e.col}, {"value", poly_json(e.value)}});
  return {{"format", kProblemFormat}, {"classes", classes}, {"class_of", p.class_of}, {"origin", p.origin},
          {"dotted", dotted}, {"solid", solid}, {"h", h}};
}

Problem problem_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != kProblemFormat)
    bad(std::string("expected a document with format ") + kProblemFormat);
  Problem p;
  for (const auto& c : field(j, "classes")) {
    VertexClass vc;
    vc.name = string_field(c, "name");
    vc.nontrivial = c.value("nontrivial", false);
    if (vc.nontrivial) {
      vc.param = c.value("param", "x");
      for (const auto& f : c.value("forbidden", Json::array())) vc.forbidden.push_back(poly_from_json(f).monic());
    }
    p.classes.push_back(vc);
  }
  p.class_of = int_list(field(j, "class_of"));
  p.origin = j.contains("origin") ? int_list(j.at("origin")) : std::vector<int>{};
  if (p.origin.empty()) reset_origin(p);
  if (p.origin.size() != p.class_of.size()) bad("origin and class_of differ in length");
  int nc = int(p.classes.size());
  auto check_class = [&](int c) {
    if (c < 0 || c >= nc) bad("class index out of range");
    return c;
  };
  for (int c : p.class_of) check_class(c);
  for (const auto& v : field(j, "dotted")) {
    DottedElement d;
    d.name = string_field(v, "name");
    d.source = check_class(int_field(v, "source"));
    d.target = check_class(int_field(v, "target"));
    for (const auto& e : field(v, "entries"))
      d.entries.push_back({int_field(e, "row"), int_field(e, "col"), localized_from_json(field(e, "value"))});
    p.dotted.push_back(d);
  }
  for (const auto& a : field(j, "solid")) {
    SolidElement s;
    s.name = string_field(a, "name");
    s.source = check_class(int_field(a, "source"));
    s.target = check_class(int_field(a, "target"));
    for (const auto& e : field(a, "entries"))
      s.entries.push_back({int_field(e, "row"), int_field(e, "col"), rational_from_json(field(e, "value"))});
    p.solid.push_back(s);
  }
  for (const auto& e : j.value("h", Json::array()))
    p.h.push_back({int_field(e, "row"), int_field(e, "col"), poly_from_json(field(e, "value"))});
  int n = p.size();
  auto in_range = [&](int r, int c) {
    if (r < 0 || r >= n || c < 0 || c >= n) bad("entry position out of range");
  };
  for (const auto& d : p.dotted)
    for (const auto& e : d.entries) in_range(e.row, e.col);
  for (const auto& s : p.solid)
    for (const auto& e : s.entries) in_range(e.row, e.col);
  for (const auto& e : p.h) in_range(e.row, e.col);
  canonicalize(p);
  auto diag = validate(p);
  if (!diag.empty()) {
    Json dj = Json::array();
    for (const auto& d : diag) dj.push_back({{"axiom", d.axiom}, {"message", d.message}});
    throw Error("InvalidProblem", diag.front().axiom + ": " + diag.front().message, {{"diagnostics", dj}});
  }
  return p;
}

Json representation_json(const Problem& p, const Representation& r) {
  Json values = Json::object();
  for (std::size_t i = 0; i < p.solid.size(); ++i) values[p.solid[i].name] = matrix_json(r.values[i]);
  Json weyr = Json::object();
  for (std::size_t c = 0; c < p.classes.size(); ++c)
    if (p.classes[c].nontrivial && c < r.weyr.size()) weyr[p.classes[c].name] = matrix_json(r.weyr[c]);
  Json out = {{"format", kRepFormat}, {"sizes", r.sizes}, {"values", values}};
  if (!weyr.empty()) out["weyr"] = weyr;
  return out;
}

Representation representation_from_json(const Problem& p, const Json& j) {
  if (!j.is_object() || j.value("format", "") != kRepFormat)
    bad(std::string("expected a document with format ") + kRepFormat);
  std::vector<int> sizes = int_list(field(j, "sizes"));
  if (sizes.size() != p.classes.size()) throw Error("ShapeError", "size vector does not match the classes");
  for (int m : sizes)
    if (m < 0) throw Error("ShapeError", "negative size");
  std::vector<RatMatrix> weyr(p.classes.size());
  if (j.contains("weyr"))
    for (const auto& [name, m] : j.at("weyr").items()) weyr.at(class_index(p, Json(name))) = matrix_from_json(m);
  Representation r = zero_representation(p, sizes, weyr);
  for (const auto& [name, m] : field(j, "values").items()) {
    int i = p.find_solid(name);
    if (i < 0) bad("unknown solid element " + name);
    RatMatrix v = matrix_from_json(m);
    if (v.rows() == 0 && r.values[i].rows() * r.values[i].cols() == 0) continue;
    r.values[i] = v;
  }
  check_representation(p, r);
  return r;
}

Json weyr_json(const RatMatrix& a) {
  auto [w, s] = weyr_canonical(a);
  Json eig = Json::array();
  Json ms = Json::object();
  for (const auto& b : w.blocks) {
    eig.push_back(rational_json(b.lambda));
    ms[to_string(b.lambda)] = b.m;
  }
  return {{"eigenvalues", eig}, {"m_sequences", ms}, {"weyr", matrix_json(w.matrix)}, {"transform", matrix_json(s)}};
}

Json step_spec(const ReductionStep& step) {
  const auto& info = step.info;
  Json spec = {{"kind", step.kind}};
  if (step.kind == "edge") {
    if (info.value("full", false))
      spec["full"] = true;
    else {
      spec["rank"] = info["rank"];
      spec["sizes"] = info["sizes"];
    }
  } else if (step.kind == "loop") {
    spec["jordan"] = info["jordan"];
  } else if (step.kind == "deletion") {
    Json kept = Json::array();
    for (std::size_t c = 0; c < step.induction.action.size(); ++c)
      if (!step.induction.action[c].slots.empty()) kept.push_back(c);
    spec["kept"] = kept;
  } else if (step.kind == "localization") {
    spec["class"] = info["class_index"];
    spec["factor"] = info["factor"];
  } else if (step.kind == "unraveling") {
    spec["class"] = info["class_index"];
    spec["lambdas"] = info["lambdas"];
    spec["depth"] = info["depth"];
    spec["keep_parameter"] = info["keep_parameter"];
  } else if (step.kind == "prop227") {
    spec["experimental"] = info.value("experimental", false);
  }
  return spec;
}

StepResult apply_step(const Problem& p, const Json& spec) {
  std::string kind = string_field(spec, "kind");
  if (kind == "regularization") return regularization(p);
  if (kind == "loop-mutation") return loop_mutation(p);
  if (kind == "prop226") return prop226_zero(p);
  if (kind == "prop227") return prop227_identity(p, spec.value("experimental", false));
  if (kind == "edge") {
    if (spec.value("full", false)) return edge_reduction(p);
    auto sz = int_list(field(spec, "sizes"));
    if (sz.size() != 2) bad("edge sizes need two entries");
    return edge_reduction(p, int_field(spec, "rank"), sz[0], sz[1]);
  }
  if (kind == "loop") {
    JordanData jd;
    for (const auto& e : field(spec, "jordan"))
      jd.eigen.push_back({rational_from_json(field(e, "lambda")), int_list(field(e, "blocks"))});
    return loop_reduction(p, jd);
  }
  if (kind == "deletion") return deletion(p, int_list(field(spec, "kept")));
  if (kind == "localization") return localization(p, class_index(p, field(spec, "class")), poly_from_json(field(spec, "factor")));
  if (kind == "unraveling") {
    std::vector<Rational> ls;
    for (const auto& l : field(spec, "lambdas")) ls.push_back(rational_from_json(l));
    return unraveling(p, class_index(p, field(spec, "class")), ls, int_field(spec, "depth"),
                      spec.value("keep_parameter", false));
  }
  bad("unknown step kind " + kind);
}

Json trace_json(const ReductionTrace& trace) {
  Json steps = Json::array();
  for (const auto& s : trace) {
    Json size_map = Json::array();
    for (const auto& a : s.induction.action) size_map.push_back(a.slots);
    Json g = nullptr;
    if ((s.kind == "loop" || s.kind == "unraveling") && s.before) {
      int c = s.kind == "loop" ? s.before->solid.at(0).source : s.info["class_index"].get<int>();
      g = matrix_json(s.induction.action[c].scalar);
    }
    Json b = nullptr;
    if (s.kind == "edge" || s.kind == "loop") b = matrix_json(s.b);
    steps.push_back({{"kind", s.kind},
                     {"arrow", s.arrow},
                     {"B", b},
                     {"G", g},
                     {"size_map", size_map},
                     {"localized_factors", s.info.value("localized_factors", Json::array())},
                     {"links", s.links},
                     {"spec", step_spec(s)},
                     {"info", s.info}});
  }
  return {{"format", kTraceFormat}, {"steps", steps}};
}

ReductionTrace replay_trace(const Problem& p, const Json& trace) {
  const Json& steps = trace.is_array() ? trace : field(trace, "steps");
  ReductionTrace out;
  Problem cur = p;
  for (const auto& s : steps) {
    StepResult r = apply_step(cur, s.contains("spec") ? s.at("spec") : s);
    out.push_back(std::move(r.step));
    cur = std::move(r.problem);
  }
  return out;
}

Json canonical_json(const Problem& p, const CanonicalForm& cf) {
  Json names = Json::array();
  for (const auto& c : p.classes) names.push_back(c.name);
  Json tnames = Json::array();
  for (const auto& c : cf.terminal.classes) tnames.push_back(c.name);
  int dim = 0;
  for (int m : cf.sizes) dim += m;
  Json out = {{"format", "mbp-canon-1"},
              {"classes", names},
              {"sizes", cf.sizes},
              {"dimension", dim},
              {"links", cf.links},
              {"matrix", matrix_json(cf.matrix)},
              {"terminal", {{"classes", tnames}, {"sizes", cf.terminal_sizes}}},
              {"trace", trace_json(cf.trace)}};
  if (dim > 0) out["indecomposable"] = cf.links == dim - 1;
  return out;
}

}  // namespace mbp
