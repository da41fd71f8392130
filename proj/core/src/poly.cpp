#include "mbp/poly.hpp"

#include "mbp/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace mbp {

// ---- Poly -------------------------------------------------------------------

Poly::Poly(const Rational& c) {
  if (!mbp::is_zero(c)) c_.push_back(c);
}

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && mbp::is_zero(c_.back())) c_.pop_back();
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  for (auto& v : c_) v *= s;
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Poly(std::move(r));
}

bool operator<(const Poly& a, const Poly& b) {
  if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
  for (std::size_t i = a.c_.size(); i-- > 0;)
    if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
  return false;
}

Rational Poly::eval(const Rational& v) const {
  Rational r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * v + c_[i];
  return r;
}

RatMatrix Poly::eval(const RatMatrix& m) const {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = c_.size(); i-- > 0;) {
    r = r * m;
    for (int k = 0; k < m.rows(); ++k) r(k, k) += c_[i];
  }
  return r;
}

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  return *this * (1 / c_.back());
}

namespace {

std::string power_name(const std::string& var, int e) {
  if (e == 1) return var;
  return var + "^" + std::to_string(e);
}

// Appends coefficient c applied to a monomial string (possibly empty) with sign handling.
void append_term(std::ostringstream& os, bool first, const Rational& c, const std::string& mono) {
  Rational a = abs(c);
  if (first) {
    if (sgn(c) < 0) os << "-";
  } else {
    os << (sgn(c) < 0 ? " - " : " + ");
  }
  if (mono.empty()) {
    os << to_string(a);
  } else {
    if (a != 1) os << to_string(a);
    os << mono;
  }
}

}  // namespace

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (mbp::is_zero(c_[i])) continue;
    append_term(os, first, c_[i], i == 0 ? "" : power_name(var, int(i)));
    first = false;
  }
  return os.str();
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error("DivisionByZero", "polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  int db = b.degree();
  if (a.degree() < db) return {Poly(), a};
  std::vector<Rational> q(a.degree() - db + 1);
  Rational lead_inv = 1 / b.leading();
  for (int i = a.degree(); i >= db; --i) {
    if (mbp::is_zero(rem[i])) continue;
    Rational f = rem[i] * lead_inv;
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.coeff(j);
  }
  rem.resize(db);
  return {Poly(std::move(q)), Poly(std::move(rem))};
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

namespace {

Poly derivative(const Poly& p) {
  std::vector<Rational> d;
  for (int i = 1; i <= p.degree(); ++i) d.push_back(p.coeff(i) * i);
  return Poly(std::move(d));
}

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> primes;
  std::vector<int> exps;
  for (mpz_class d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) { n /= d; ++e; }
    primes.push_back(d);
    exps.push_back(e);
  }
  if (n > 1) { primes.push_back(n); exps.push_back(1); }
  std::vector<mpz_class> out{1};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    std::size_t base = out.size();
    mpz_class pw = 1;
    for (int e = 1; e <= exps[i]; ++e) {
      pw *= primes[i];
      for (std::size_t k = 0; k < base; ++k) out.push_back(out[k] * pw);
    }
  }
  return out;
}

}  // namespace

RootSplit rational_roots(const Poly& p) {
  RootSplit out;
  out.cofactor = p;
  if (p.degree() <= 0) return out;
  Poly sq = divmod(p, gcd(p, derivative(p))).first.monic();
  std::set<Rational> found;
  if (mbp::is_zero(sq.coeff(0))) found.insert(0);
  // Integer primitive multiple of sq with zero roots stripped.
  std::vector<Rational> c = sq.coeffs();
  while (!c.empty() && mbp::is_zero(c.front())) c.erase(c.begin());
  mpz_class l = 1;
  for (const auto& v : c) l = lcm(l, v.get_den());
  mpz_class a0 = Rational(c.front() * l).get_num();
  mpz_class an = Rational(c.back() * l).get_num();
  if (c.size() > 1) {
    Poly stripped(c);
    for (const auto& d : divisors(a0))
      for (const auto& e : divisors(an))
        for (int s : {1, -1}) {
          Rational cand(d * s, e);
          cand.canonicalize();
          if (!found.count(cand) && mbp::is_zero(stripped.eval(cand))) found.insert(cand);
        }
  }
  for (const auto& r : found) {
    Poly lin = Poly::linear(-r, 1);
    int mult = 0;
    for (;;) {
      auto [q, rem] = divmod(out.cofactor, lin);
      if (!rem.is_zero()) break;
      out.cofactor = q;
      ++mult;
    }
    out.roots.push_back({r, mult});
  }
  return out;
}

Poly characteristic_polynomial(const RatMatrix& a) {
  if (!a.square()) throw Error("ShapeError", "characteristic polynomial needs a square matrix");
  int n = a.rows();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  RatMatrix m(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m;
    for (int i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    RatMatrix am = a * m;
    Rational tr = 0;
    for (int i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / k;
  }
  return Poly(std::move(c));
}

// ---- MultiPoly --------------------------------------------------------------

MultiPoly MultiPoly::constant(int arity, const Rational& c) {
  MultiPoly p(arity);
  p.add_term(Exponents(arity, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int arity, int slot) {
  MultiPoly p(arity);
  Exponents e(arity, 0);
  e[slot] = 1;
  p.add_term(e, 1);
  return p;
}

MultiPoly MultiPoly::from_poly(int arity, int slot, const Poly& f) {
  MultiPoly p(arity);
  for (int i = 0; i <= f.degree(); ++i) {
    Exponents e(arity, 0);
    e[slot] = i;
    p.add_term(e, f.coeff(i));
  }
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
}

Rational MultiPoly::constant_term() const {
  auto it = terms_.find(Exponents(arity_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<int> MultiPoly::support_slots() const {
  std::vector<int> out;
  for (int s = 0; s < arity_; ++s)
    for (const auto& [e, c] : terms_)
      if (e[s] > 0) { out.push_back(s); break; }
  return out;
}

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
  if (mbp::is_zero(c)) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (mbp::is_zero(it->second)) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (o.arity_ != arity_) throw Error("ShapeError", "tensor arity mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (o.arity_ != arity_) throw Error("ShapeError", "tensor arity mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& s) {
  if (mbp::is_zero(s)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.arity_ != b.arity_) throw Error("ShapeError", "tensor arity mismatch");
  MultiPoly r(a.arity_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      MultiPoly::Exponents e(a.arity_);
      for (int s = 0; s < a.arity_; ++s) e[s] = ea[s] + eb[s];
      r.add_term(e, ca * cb);
    }
  return r;
}

bool operator<(const MultiPoly& a, const MultiPoly& b) {
  if (a.arity_ != b.arity_) return a.arity_ < b.arity_;
  return a.terms_ < b.terms_;
}

MultiPoly MultiPoly::embed(int new_arity, const std::vector<int>& slot_map) const {
  MultiPoly r(new_arity);
  for (const auto& [e, c] : terms_) {
    Exponents ne(new_arity, 0);
    for (int s = 0; s < arity_; ++s) ne[slot_map[s]] += e[s];
    r.add_term(ne, c);
  }
  return r;
}

std::optional<MultiPoly> MultiPoly::divide(int slot, const Poly& f) const {
  std::map<Exponents, std::vector<Rational>> groups;
  for (const auto& [e, c] : terms_) {
    Exponents key = e;
    key[slot] = 0;
    auto& v = groups[key];
    if (int(v.size()) <= e[slot]) v.resize(e[slot] + 1);
    v[e[slot]] = c;
  }
  MultiPoly q(arity_);
  for (auto& [key, coeffs] : groups) {
    auto [quo, rem] = divmod(Poly(coeffs), f);
    if (!rem.is_zero()) return std::nullopt;
    for (int i = 0; i <= quo.degree(); ++i) {
      Exponents e = key;
      e[slot] = i;
      q.add_term(e, quo.coeff(i));
    }
  }
  return q;
}

Rational MultiPoly::eval(const std::vector<Rational>& point) const {
  Rational r = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int s = 0; s < arity_; ++s)
      for (int k = 0; k < e[s]; ++k) t *= point[s];
    r += t;
  }
  return r;
}

std::string MultiPoly::to_string(const std::vector<std::string>& vars) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    std::string mono;
    for (int s = 0; s < arity_; ++s)
      if (it->first[s] > 0) mono += power_name(vars.at(s), it->first[s]);
    append_term(os, first, it->second, mono);
    first = false;
  }
  return os.str();
}

Poly bipoly_eval_left(const BiPoly& f, const Rational& v) {
  Poly r;
  for (const auto& [e, c] : f.terms()) {
    Rational t = c;
    for (int k = 0; k < e[0]; ++k) t *= v;
    std::vector<Rational> mono(e[1] + 1);
    mono[e[1]] = t;
    r += Poly(std::move(mono));
  }
  return r;
}

Poly bipoly_eval_right(const BiPoly& f, const Rational& v) {
  Poly r;
  for (const auto& [e, c] : f.terms()) {
    Rational t = c;
    for (int k = 0; k < e[1]; ++k) t *= v;
    std::vector<Rational> mono(e[0] + 1);
    mono[e[0]] = t;
    r += Poly(std::move(mono));
  }
  return r;
}

Rational bipoly_eval(const BiPoly& f, const Rational& left, const Rational& right) {
  return f.eval({left, right});
}

RatMatrix bipoly_apply(const BiPoly& f, const RatMatrix& left, const RatMatrix& v, const RatMatrix& right) {
  if (!left.square() || !right.square() || left.rows() != v.rows() || right.rows() != v.cols())
    throw Error("ShapeError", "bipoly_apply dimension mismatch");
  RatMatrix r(v.rows(), v.cols());
  for (const auto& [e, c] : f.terms()) r += c * (left.power(e[0]) * v * right.power(e[1]));
  return r;
}

// ---- LocalizedElem ----------------------------------------------------------

LocalizedElem::LocalizedElem(int arity) : num_(arity), den_(arity) {}

LocalizedElem::LocalizedElem(MultiPoly num) : num_(std::move(num)), den_(num_.arity()) {}

LocalizedElem::LocalizedElem(MultiPoly num, std::vector<Denominator> den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (int(den_.size()) != num_.arity()) throw Error("ShapeError", "denominator arity mismatch");
  // Make every factor monic, moving scalars into the numerator.
  for (auto& d : den_) {
    Denominator fixed;
    for (const auto& [f, k] : d) {
      if (f.degree() < 1) throw Error("InvalidDenominator", "denominator factors must be nonconstant");
      Rational lead = f.leading();
      for (int i = 0; i < k; ++i) num_ *= 1 / lead;
      fixed[f.monic()] += k;
    }
    d = std::move(fixed);
  }
  normalize();
}

LocalizedElem LocalizedElem::constant(int arity, const Rational& c) {
  return LocalizedElem(MultiPoly::constant(arity, c));
}

bool LocalizedElem::is_polynomial() const {
  return std::all_of(den_.begin(), den_.end(), [](const Denominator& d) { return d.empty(); });
}

void LocalizedElem::normalize() {
  if (num_.is_zero()) {
    for (auto& d : den_) d.clear();
    return;
  }
  for (int s = 0; s < arity(); ++s) {
    for (auto it = den_[s].begin(); it != den_[s].end();) {
      while (it->second > 0) {
        auto q = num_.divide(s, it->first);
        if (!q) break;
        num_ = std::move(*q);
        --it->second;
      }
      it = it->second == 0 ? den_[s].erase(it) : std::next(it);
    }
  }
}

namespace {

MultiPoly power_product(int arity, int slot, const Poly& f, int k) {
  MultiPoly r = MultiPoly::constant(arity, 1);
  MultiPoly fp = MultiPoly::from_poly(arity, slot, f);
  for (int i = 0; i < k; ++i) r = r * fp;
  return r;
}

}  // namespace

LocalizedElem& LocalizedElem::operator+=(const LocalizedElem& o) {
  if (o.arity() != arity()) throw Error("ShapeError", "tensor arity mismatch");
  if (is_polynomial() && o.is_polynomial()) {
    num_ += o.num_;
    return *this;
  }
  MultiPoly a = num_, b = o.num_;
  std::vector<Denominator> common(arity());
  for (int s = 0; s < arity(); ++s) {
    common[s] = den_[s];
    for (const auto& [f, k] : o.den_[s]) common[s][f] = std::max(common[s][f], k);
    for (const auto& [f, k] : common[s]) {
      auto ia = den_[s].find(f);
      auto ib = o.den_[s].find(f);
      int ka = ia == den_[s].end() ? 0 : ia->second;
      int kb = ib == o.den_[s].end() ? 0 : ib->second;
      if (k > ka) a = a * power_product(arity(), s, f, k - ka);
      if (k > kb) b = b * power_product(arity(), s, f, k - kb);
    }
  }
  num_ = a + b;
  den_ = std::move(common);
  normalize();
  return *this;
}

LocalizedElem& LocalizedElem::operator-=(const LocalizedElem& o) { return *this += -o; }

LocalizedElem& LocalizedElem::operator*=(const Rational& s) {
  num_ *= s;
  normalize();
  return *this;
}

LocalizedElem operator*(const LocalizedElem& a, const LocalizedElem& b) {
  if (a.arity() != b.arity()) throw Error("ShapeError", "tensor arity mismatch");
  LocalizedElem r(a.num_ * b.num_);
  r.den_ = a.den_;
  for (int s = 0; s < a.arity(); ++s)
    for (const auto& [f, k] : b.den_[s]) r.den_[s][f] += k;
  r.normalize();
  return r;
}

bool operator<(const LocalizedElem& a, const LocalizedElem& b) {
  if (!(a.num_ == b.num_)) return a.num_ < b.num_;
  return a.den_ < b.den_;
}

LocalizedElem LocalizedElem::embed(int new_arity, const std::vector<int>& slot_map) const {
  LocalizedElem r(num_.embed(new_arity, slot_map));
  for (int s = 0; s < arity(); ++s)
    for (const auto& [f, k] : den_[s]) r.den_[slot_map[s]][f] += k;
  r.normalize();
  return r;
}

std::string LocalizedElem::to_string(const std::vector<std::string>& vars) const {
  std::string n = num_.to_string(vars);
  if (is_polynomial()) return n;
  std::string d;
  for (int s = 0; s < arity(); ++s)
    for (const auto& [f, k] : den_[s]) {
      if (!d.empty()) d += "*";
      d += "(" + f.to_string(vars.at(s)) + ")";
      if (k > 1) d += "^" + std::to_string(k);
    }
  return "(" + n + ")/" + d;
}

namespace {

// Strips forbidden factors from the numerator; returns the stripped factor counts per slot.
std::optional<std::pair<Rational, std::vector<LocalizedElem::Denominator>>> split_unit(
    const LocalizedElem& e, const SlotRings& forbidden) {
  if (e.is_zero()) return std::nullopt;
  MultiPoly n = e.num();
  std::vector<LocalizedElem::Denominator> stripped(e.arity());
  for (int s = 0; s < e.arity(); ++s) {
    if (s >= int(forbidden.size())) break;
    for (const auto& f : forbidden[s]) {
      Poly m = f.monic();
      while (auto q = n.divide(s, m)) {
        if (q->is_zero()) break;
        n = std::move(*q);
        ++stripped[s][m];
      }
    }
  }
  if (!n.is_constant() || n.is_zero()) return std::nullopt;
  return std::make_pair(n.constant_term(), std::move(stripped));
}

}  // namespace

bool is_unit(const LocalizedElem& e, const SlotRings& forbidden) {
  return split_unit(e, forbidden).has_value();
}

std::optional<LocalizedElem> unit_inverse(const LocalizedElem& e, const SlotRings& forbidden) {
  auto split = split_unit(e, forbidden);
  if (!split) return std::nullopt;
  int ar = e.arity();
  MultiPoly num = MultiPoly::constant(ar, 1 / split->first);
  for (int s = 0; s < ar; ++s)
    for (const auto& [f, k] : e.den()[s]) num = num * power_product(ar, s, f, k);
  return LocalizedElem(std::move(num), std::move(split->second));
}

RatMatrix localized_apply(const LocalizedElem& f, const RatMatrix& left, const RatMatrix& v, const RatMatrix& right) {
  if (f.arity() != 2) throw Error("ShapeError", "localized_apply needs a two-slot element");
  RatMatrix r = bipoly_apply(f.num(), left, v, right);
  RatMatrix dl = RatMatrix::identity(left.rows());
  for (const auto& [p, k] : f.den()[0]) dl = dl * p.eval(left).power(k);
  RatMatrix dr = RatMatrix::identity(right.rows());
  for (const auto& [p, k] : f.den()[1]) dr = dr * p.eval(right).power(k);
  auto il = inverse(dl);
  auto ir = inverse(dr);
  if (!il || !ir) throw Error("NonRegular", "denominator is singular at the given parameter value");
  return *il * r * *ir;
}

}  // namespace mbp
