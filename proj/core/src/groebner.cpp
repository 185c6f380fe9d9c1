#include "mlv/groebner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <climits>
#include <ostream>

namespace mlv {

namespace {

std::atomic<std::uint64_t> g_step_budget{2'000'000};
std::atomic<std::uint64_t> g_bit_budget{10'000};

struct FpArith {
  using T = std::uint64_t;
  static constexpr bool kFractionFree = false;
  std::uint64_t p;

  T from(const Scalar& s) const { return s.residue(); }
  Scalar to(T v) const { return Scalar::make(FieldId::prime(p), mpz_class(static_cast<unsigned long>(v)), 1); }
  bool is_zero(T v) const { return v == 0; }
  T mul(T a, T b) const { return modp::mul(a, b, p); }
  T inv(T a) const { return modp::inv(a, p); }
  /// a - c * b
  T sub_mul(T a, T c, T b) const { return modp::sub(a, modp::mul(c, b, p), p); }
  T neg(T a) const { return a == 0 ? 0 : p - a; }
  std::size_t bits(const T&) const { return 0; }
};

struct QArith {
  using T = mpq_class;
  static constexpr bool kFractionFree = false;

  T from(const Scalar& s) const { return s.rational(); }
  Scalar to(const T& v) const { return Scalar::from_rational(FieldId::rationals(), v); }
  bool is_zero(const T& v) const { return sgn(v) == 0; }
  T mul(const T& a, const T& b) const { return a * b; }
  T inv(const T& a) const { return 1 / a; }
  T sub_mul(const T& a, const T& c, const T& b) const { return a - c * b; }
  T neg(const T& a) const { return -a; }
  std::size_t bits(const T& v) const {
    return mpz_sizeinbase(v.get_num_mpz_t(), 2) + mpz_sizeinbase(v.get_den_mpz_t(), 2);
  }
};

/// Q through primitive integer polynomials; made monic only on output.
struct ZArith {
  using T = mpz_class;
  static constexpr bool kFractionFree = true;

  bool is_zero(const T& v) const { return sgn(v) == 0; }
  std::size_t bits(const T& v) const { return mpz_sizeinbase(v.get_mpz_t(), 2); }
};

template <class A>
struct Elt {
  Monomial m;
  typename A::T c;
};

template <class A>
using Poly = std::vector<Elt<A>>;  // descending under the active order

template <class A>
class Engine {
public:
  Engine(A arith, MonomialOrder order, std::size_t nvars, const GroebnerOptions& opts)
      : a_(arith), ord_(order), nvars_(nvars), opts_(opts) {}

  using T = typename A::T;

  Poly<A> convert(const MultiPoly& p) const {
    Poly<A> out;
    out.reserve(p.size());
    if constexpr (A::kFractionFree) {
      mpz_class den = 1;
      for (const auto& t : p.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.rational().get_den_mpz_t());
      for (const auto& t : p.terms()) {
        const mpq_class& q = t.coef.rational();
        out.push_back({t.mono, mpz_class(q.get_num() * (den / q.get_den()))});
      }
    } else {
      for (const auto& t : p.terms()) out.push_back({t.mono, a_.from(t.coef)});
    }
    std::sort(out.begin(), out.end(), [&](const Elt<A>& x, const Elt<A>& y) { return ord_.less(y.m, x.m); });
    return out;
  }

  MultiPoly back(const Poly<A>& p, FieldId field, const VarBlocks& blocks) const {
    std::vector<Term> terms;
    terms.reserve(p.size());
    if constexpr (A::kFractionFree) {
      for (const auto& e : p) {
        mpq_class q(e.c, p.front().c);
        q.canonicalize();
        terms.push_back({e.m, Scalar::from_rational(field, q)});
      }
    } else {
      for (const auto& e : p) terms.push_back({e.m, a_.to(e.c)});
    }
    return MultiPoly::from_terms(field, blocks, std::move(terms));
  }

  /// Monic over a field; primitive with positive leading coefficient over Z.
  void normalize(Poly<A>& p) const {
    if (p.empty()) return;
    if constexpr (A::kFractionFree) {
      mpz_class g = 0;
      for (const auto& e : p) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.c.get_mpz_t());
        if (g == 1) break;
      }
      if (sgn(p.front().c) < 0) g = -g;
      if (g != 1)
        for (auto& e : p) mpz_divexact(e.c.get_mpz_t(), e.c.get_mpz_t(), g.get_mpz_t());
    } else {
      const auto inv = a_.inv(p.front().c);
      for (auto& e : p) e.c = a_.mul(e.c, inv);
    }
  }

  /// s * a - c * b
  T combine(const T& s, const T& a, const T& c, const T& b) const {
    if constexpr (A::kFractionFree) return T(s * a - c * b);
    else return a_.sub_mul(a, c, b);
  }
  T scaled(const T& s, const T& a) const {
    if constexpr (A::kFractionFree) return T(s * a);
    else return a;
  }

  /// s * p - c * m * g, skipping the leading terms of both (they cancel).
  /// Over a field s is always one.
  Poly<A> sub_shifted(const Poly<A>& p, std::size_t p_start, const T& s, const T& c, const Monomial& m,
                      const Poly<A>& g) const {
    const bool scale = A::kFractionFree && s != T(1);
    Poly<A> out;
    out.reserve(p.size() - p_start + g.size());
    std::size_t i = p_start + 1, j = 1;
    while (i < p.size() || j < g.size()) {
      if (j == g.size()) {
        out.push_back(scale ? Elt<A>{p[i].m, scaled(s, p[i].c)} : p[i]);
        ++i;
        continue;
      }
      Monomial gm = g[j].m * m;
      int cmp = i == p.size() ? -1 : ord_.compare(p[i].m, gm);
      if (cmp > 0) {
        out.push_back(scale ? Elt<A>{p[i].m, scaled(s, p[i].c)} : p[i]);
        ++i;
      } else if (cmp < 0) {
        out.push_back({gm, combine(s, T(0), c, g[j].c)});
        ++j;
      } else {
        auto v = combine(s, p[i].c, c, g[j].c);
        if (!a_.is_zero(v)) out.push_back({gm, std::move(v)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  void count_step() {
    if (++steps_ > opts_.step_budget)
      fail(ErrorCode::ResourceLimit, "Groebner step budget of " + std::to_string(opts_.step_budget) + " exceeded");
  }

  void check_bits(const typename A::T& c) const {
    if (a_.bits(c) > opts_.bit_budget)
      fail(ErrorCode::ResourceLimit,
           "coefficient size exceeds bit budget of " + std::to_string(opts_.bit_budget));
  }

  const Poly<A>* find_reducer(const Monomial& m, const std::vector<std::size_t>& active, std::size_t skip) const {
    for (auto idx : active) {
      if (idx == skip) continue;
      const auto& g = polys_[idx];
      if (g.front().m.divides(m)) return &g;
    }
    return nullptr;
  }

  /// Full reduction by the elements listed in `active` (all normalized).
  /// Over Z the result is a nonzero integer multiple of the remainder.
  Poly<A> reduce(Poly<A> p, const std::vector<std::size_t>& active, std::size_t skip = SIZE_MAX) {
    Poly<A> rem;
    std::size_t start = 0;
    while (start < p.size()) {
      const Elt<A>& lt = p[start];
      const Poly<A>* g = find_reducer(lt.m, active, skip);
      if (g == nullptr) {
        rem.push_back(std::move(p[start]));
        ++start;
        continue;
      }
      count_step();
      check_bits(lt.c);
      const Monomial q = lt.m / g->front().m;
      if constexpr (A::kFractionFree) {
        T gg;
        mpz_gcd(gg.get_mpz_t(), lt.c.get_mpz_t(), g->front().c.get_mpz_t());
        const T s = g->front().c / gg;
        const T c = lt.c / gg;
        p = sub_shifted(p, start, s, c, q, *g);
        if (s != 1)
          for (auto& e : rem) e.c *= s;
        remove_content(rem, p);
      } else {
        const T c = lt.c;
        p = sub_shifted(p, start, T(1), c, q, *g);
      }
      start = 0;
    }
    return rem;
  }

  /// Divides rem and p by the gcd of all their coefficients.
  void remove_content(Poly<A>& rem, Poly<A>& p) const {
    mpz_class g = 0;
    for (const auto* part : {&rem, &p})
      for (const auto& e : *part) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.c.get_mpz_t());
        if (g == 1) return;
      }
    if (g == 0) return;
    for (auto* part : {&rem, &p})
      for (auto& e : *part) mpz_divexact(e.c.get_mpz_t(), e.c.get_mpz_t(), g.get_mpz_t());
  }

  struct Pair {
    std::size_t i, j;
    Monomial lcm;
    std::uint64_t serial;
  };

  Poly<A> spoly(const Pair& pr) const {
    const auto& f = polys_[pr.i];
    const auto& g = polys_[pr.j];
    const Monomial mf = pr.lcm / f.front().m;
    const Monomial mg = pr.lcm / g.front().m;
    Poly<A> fs;
    fs.reserve(f.size());
    if constexpr (A::kFractionFree) {
      T gg;
      mpz_gcd(gg.get_mpz_t(), f.front().c.get_mpz_t(), g.front().c.get_mpz_t());
      const T sf = g.front().c / gg;
      for (const auto& e : f) fs.push_back({e.m * mf, T(e.c * sf)});
      return sub_shifted(fs, 0, T(1), T(f.front().c / gg), mg, g);
    } else {
      for (const auto& e : f) fs.push_back({e.m * mf, e.c});
      // Both are monic; subtract mg * g from mf * f.
      return sub_shifted(fs, 0, T(1), T(1), mg, g);
    }
  }

  void update(std::size_t h) {
    const Monomial& lh = polys_[h].front().m;
    std::vector<Pair> c;
    for (auto g : active_) c.push_back({g, h, lcm(polys_[g].front().m, lh), 0});
    std::vector<Pair> d;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const Pair& p1 = c[k];
      bool keep = polys_[p1.i].front().m.coprime(lh);
      if (!keep) {
        keep = true;
        for (std::size_t l = k + 1; l < c.size() && keep; ++l)
          if (c[l].lcm.divides(p1.lcm)) keep = false;
        for (const auto& p2 : d)
          if (keep && p2.lcm.divides(p1.lcm)) keep = false;
      }
      if (keep) d.push_back(p1);
    }
    std::vector<Pair> kept;
    for (auto& pr : pairs_) {
      const bool drop = lh.divides(pr.lcm) && lcm(polys_[pr.i].front().m, lh) != pr.lcm &&
                        lcm(polys_[pr.j].front().m, lh) != pr.lcm;
      if (!drop) kept.push_back(std::move(pr));
    }
    for (auto& pr : d) {
      if (polys_[pr.i].front().m.coprime(lh)) continue;
      pr.serial = serial_++;
      kept.push_back(std::move(pr));
    }
    pairs_ = std::move(kept);
    std::vector<std::size_t> next;
    for (auto g : active_)
      if (!lh.divides(polys_[g].front().m)) next.push_back(g);
    next.push_back(h);
    active_ = std::move(next);
  }

  std::size_t pick_pair() const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs_.size(); ++k) {
      const Pair& a = pairs_[k];
      const Pair& b = pairs_[best];
      if (a.lcm.degree() != b.lcm.degree()) {
        if (a.lcm.degree() < b.lcm.degree()) best = k;
        continue;
      }
      int c = ord_.compare(a.lcm, b.lcm);
      if (c < 0 || (c == 0 && a.serial < b.serial)) best = k;
    }
    return best;
  }

  /// Adds h (already reduced, nonzero); returns true for a unit.
  bool insert(Poly<A> h) {
    normalize(h);
    polys_.push_back(std::move(h));
    const std::size_t idx = polys_.size() - 1;
    if (polys_[idx].front().m.is_one()) {
      active_ = {idx};
      pairs_.clear();
      return true;
    }
    update(idx);
    return false;
  }

  std::vector<Poly<A>> run(const std::vector<Poly<A>>& gens) {
    for (const auto& f : gens) {
      Poly<A> h = reduce(f, active_);
      if (h.empty()) continue;
      if (insert(std::move(h))) return finish();
    }
    std::uint64_t pair_no = 0;
    while (!pairs_.empty()) {
      const std::size_t k = pick_pair();
      Pair pr = pairs_[k];
      pairs_.erase(pairs_.begin() + static_cast<std::ptrdiff_t>(k));
      Poly<A> h = reduce(spoly(pr), active_);
      if (opts_.trace != nullptr)
        *opts_.trace << "pair " << pair_no << " (" << pr.i << "," << pr.j << ") lcm=" << pr.lcm.to_string()
                     << (h.empty() ? " -> 0" : " -> new, lm=" + h.front().m.to_string()) << "\n";
      ++pair_no;
      if (h.empty()) continue;
      if (insert(std::move(h))) return finish();
    }
    return finish();
  }

  std::vector<Poly<A>> finish() {
    std::vector<Poly<A>> out;
    for (auto idx : active_) {
      Poly<A> r = reduce(polys_[idx], active_, idx);
      // The leading term survives because the active set is minimal.
      normalize(r);
      out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(),
              [&](const Poly<A>& x, const Poly<A>& y) { return ord_.less(x.front().m, y.front().m); });
    return out;
  }

  /// Loads an existing reduced basis so reduce() can be used as a normal form.
  void load(std::vector<Poly<A>> basis) {
    polys_ = std::move(basis);
    active_.clear();
    for (std::size_t i = 0; i < polys_.size(); ++i) active_.push_back(i);
  }
  const std::vector<std::size_t>& active() const { return active_; }

private:
  A a_;
  MonomialOrder ord_;
  std::size_t nvars_;
  GroebnerOptions opts_;
  std::uint64_t steps_ = 0;
  std::uint64_t serial_ = 0;
  std::vector<Poly<A>> polys_;
  std::vector<std::size_t> active_;
  std::vector<Pair> pairs_;
};

template <class A>
GroebnerBasis run_buchberger(A arith, const IdealPresentation& ideal, const GroebnerOptions& opts) {
  Engine<A> eng(arith, ideal.order, ideal.blocks.total(), opts);
  std::vector<Poly<A>> gens;
  for (const auto& g : ideal.generators) {
    if (g.is_zero()) continue;
    gens.push_back(eng.convert(g));
  }
  auto basis = eng.run(gens);
  GroebnerBasis out;
  out.order = ideal.order;
  out.field = ideal.field;
  out.blocks = ideal.blocks;
  out.reduced = true;
  for (const auto& b : basis) out.basis.push_back(eng.back(b, ideal.field, ideal.blocks));
  return out;
}

template <class A>
MultiPoly run_normal_form(A arith, const MultiPoly& p, const GroebnerBasis& g) {
  Engine<A> eng(arith, g.order, g.blocks.total(), default_groebner_options());
  std::vector<Poly<A>> basis;
  for (const auto& b : g.basis) {
    auto c = eng.convert(b);
    eng.normalize(c);
    basis.push_back(std::move(c));
  }
  eng.load(std::move(basis));
  return eng.back(eng.reduce(eng.convert(p), eng.active()), g.field, g.blocks);
}

void check_ring(const IdealPresentation& ideal) {
  for (const auto& g : ideal.generators) {
    if (g.field() != ideal.field) fail(ErrorCode::FieldMismatch, "generator over a different field");
    if (g.blocks() != ideal.blocks) fail(ErrorCode::BlockMismatch, "generator in a different ring");
  }
}

}  // namespace

IdealPresentation IdealPresentation::of(std::vector<MultiPoly> gens, MonomialOrder order) {
  MLV_REQUIRE(!gens.empty(), ErrorCode::BadParams, "ring of an empty generator list is unknown");
  IdealPresentation ip;
  ip.field = gens.front().field();
  ip.blocks = gens.front().blocks();
  ip.order = order;
  ip.generators = std::move(gens);
  return ip;
}

GroebnerOptions default_groebner_options() {
  GroebnerOptions o;
  o.step_budget = g_step_budget.load();
  o.bit_budget = g_bit_budget.load();
  return o;
}

void set_default_groebner_options(const GroebnerOptions& opts) {
  g_step_budget.store(opts.step_budget);
  g_bit_budget.store(opts.bit_budget);
}

GroebnerBasis buchberger(const IdealPresentation& ideal) { return buchberger(ideal, default_groebner_options()); }

GroebnerBasis buchberger(const IdealPresentation& ideal, const GroebnerOptions& opts) {
  check_ring(ideal);
  if (ideal.field.is_prime_field()) return run_buchberger(FpArith{ideal.field.modulus()}, ideal, opts);
  return run_buchberger(ZArith{}, ideal, opts);
}

MultiPoly normal_form(const MultiPoly& p, const GroebnerBasis& g) {
  if (p.field() != g.field) fail(ErrorCode::FieldMismatch, "polynomial and basis over different fields");
  if (p.blocks() != g.blocks) fail(ErrorCode::BlockMismatch, "polynomial and basis in different rings");
  if (g.field.is_prime_field()) return run_normal_form(FpArith{g.field.modulus()}, p, g);
  return run_normal_form(QArith{}, p, g);
}

bool is_trivial_ideal(const GroebnerBasis& g) {
  for (const auto& b : g.basis)
    if (b.is_constant() && !b.is_zero()) return true;
  return false;
}

int min_hitting_set(std::vector<std::uint64_t> masks) {
  for (auto m : masks)
    if (m == 0) return -1;
  // Keep only inclusion-minimal sets.
  std::sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<std::uint64_t> minimal;
  for (auto m : masks) {
    bool dominated = false;
    for (auto k : minimal)
      if ((k & m) == k) {
        dominated = true;
        break;
      }
    if (!dominated) minimal.push_back(m);
  }
  int best = 65;
  auto rec = [&](auto&& self, std::uint64_t chosen, int count) -> void {
    if (count >= best) return;
    const std::uint64_t* target = nullptr;
    int unhit = 0;
    for (const auto& m : minimal) {
      if ((m & chosen) != 0) continue;
      ++unhit;
      if (target == nullptr || std::popcount(m) < std::popcount(*target)) target = &m;
    }
    if (target == nullptr) {
      best = count;
      return;
    }
    // Disjoint unhit sets give a lower bound; a cheap greedy packing suffices.
    std::uint64_t used = 0;
    int packing = 0;
    for (const auto& m : minimal) {
      if ((m & chosen) != 0 || (m & used) != 0) continue;
      used |= m;
      ++packing;
    }
    if (count + packing >= best) return;
    std::uint64_t branch = *target;
    while (branch != 0) {
      const std::uint64_t bit = branch & (~branch + 1);
      branch &= branch - 1;
      self(self, chosen | bit, count + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

int ideal_dimension(const GroebnerBasis& g) {
  MLV_REQUIRE(g.order.kind() == MonomialOrder::Kind::DegRevLex, ErrorCode::WrongOrder,
              "dimension needs a degrevlex basis, got " + g.order.to_string());
  const int n = static_cast<int>(g.blocks.total());
  std::vector<std::uint64_t> masks;
  for (const auto& b : g.basis) {
    if (b.is_zero()) continue;
    masks.push_back(leading_term(b, g.order).first.support());
  }
  const int h = min_hitting_set(std::move(masks));
  return h < 0 ? -1 : n - h;
}

GroebnerBasis saturate_basis(const IdealPresentation& ideal, const MultiPoly& g) {
  return saturate_basis(ideal, g, default_groebner_options());
}

namespace {

/// <I, t g - 1> in K[t, x] with t first.
IdealPresentation rabinowitsch(const IdealPresentation& ideal, const MultiPoly& g, MonomialOrder order) {
  MLV_REQUIRE(!g.is_zero(), ErrorCode::ZeroPolynomial, "saturation by the zero polynomial");
  check_ring(ideal);
  if (g.field() != ideal.field) fail(ErrorCode::FieldMismatch, "saturating polynomial over a different field");
  if (g.blocks() != ideal.blocks) fail(ErrorCode::BlockMismatch, "saturating polynomial in a different ring");
  const std::size_t n = ideal.blocks.total();
  MLV_REQUIRE(n + 1 <= kMaxVars, ErrorCode::SizeError, "saturation needs one extra variable beyond the limit");
  const VarBlocks ext = VarBlocks::single(n + 1);
  auto lift = [&](const MultiPoly& p) {
    std::vector<Term> terms;
    for (const auto& t : p.terms()) {
      Monomial m(n + 1);
      for (std::size_t i = 0; i < n; ++i)
        if (t.mono[i] != 0) m.set(i + 1, t.mono[i]);
      terms.push_back({m, t.coef});
    }
    return MultiPoly::from_terms(p.field(), ext, std::move(terms));
  };
  IdealPresentation lifted;
  lifted.field = ideal.field;
  lifted.blocks = ext;
  lifted.order = order;
  for (const auto& f : ideal.generators)
    if (!f.is_zero()) lifted.generators.push_back(lift(f));
  const MultiPoly t = MultiPoly::variable(ideal.field, ext, 0);
  lifted.generators.push_back(t * lift(g) - MultiPoly::constant(ideal.field, ext, Scalar::one(ideal.field)));
  return lifted;
}

}  // namespace

int saturation_dimension(const IdealPresentation& ideal, const MultiPoly& g) {
  return saturation_dimension(ideal, g, default_groebner_options());
}

int saturation_dimension(const IdealPresentation& ideal, const MultiPoly& g, const GroebnerOptions& opts) {
  bool homogeneous = g.is_homogeneous();
  for (const auto& f : ideal.generators) homogeneous = homogeneous && f.is_homogeneous();
  if (!homogeneous || g.is_constant()) {
    // V(I, tg - 1) is isomorphic to V(I) minus V(g), which is dense in V(I : g^infinity).
    return ideal_dimension(buchberger(rabinowitsch(ideal, g, MonomialOrder::degrevlex()), opts));
  }
  // J = I + (z^e - g) with z last, so J stays homogeneous. Off z = 0, V(J) covers V(I) minus V(g)
  // with finite fibres, and a degrevlex basis of J : z^infinity is G with z-powers divided out.
  check_ring(ideal);
  if (g.field() != ideal.field) fail(ErrorCode::FieldMismatch, "saturating polynomial over a different field");
  if (g.blocks() != ideal.blocks) fail(ErrorCode::BlockMismatch, "saturating polynomial in a different ring");
  const std::size_t n = ideal.blocks.total();
  MLV_REQUIRE(n + 1 <= kMaxVars, ErrorCode::SizeError, "saturation needs one extra variable beyond the limit");
  const VarBlocks ext = VarBlocks::single(n + 1);
  IdealPresentation j;
  j.field = ideal.field;
  j.blocks = ext;
  j.order = MonomialOrder::degrevlex();
  auto extend = [&](const MultiPoly& p) {
    std::vector<Term> terms;
    for (const auto& t : p.terms()) {
      Monomial m(n + 1);
      for (std::size_t i = 0; i < n; ++i)
        if (t.mono[i] != 0) m.set(i, t.mono[i]);
      terms.push_back({m, t.coef});
    }
    return MultiPoly::from_terms(p.field(), ext, std::move(terms));
  };
  for (const auto& f : ideal.generators)
    if (!f.is_zero()) j.generators.push_back(extend(f));
  const MultiPoly z = MultiPoly::variable(ideal.field, ext, n);
  j.generators.push_back(z.pow(g.total_degree()) - extend(g));
  const GroebnerBasis big = buchberger(j, opts);
  std::vector<std::uint64_t> masks;
  for (const auto& b : big.basis) {
    unsigned k = UINT_MAX;
    for (const auto& t : b.terms()) k = std::min(k, t.mono[n]);
    if (k == UINT_MAX) continue;
    Monomial lm = leading_term(b, j.order).first;
    lm.set(n, lm[n] - k);
    masks.push_back(lm.support());
  }
  const int h = min_hitting_set(std::move(masks));
  return h < 0 ? -1 : static_cast<int>(n + 1) - h;
}

GroebnerBasis saturate_basis(const IdealPresentation& ideal, const MultiPoly& g, const GroebnerOptions& opts) {
  const std::size_t n = ideal.blocks.total();
  const IdealPresentation lifted = rabinowitsch(ideal, g, MonomialOrder::block_elim(1));
  const GroebnerBasis big = buchberger(lifted, opts);

  GroebnerBasis out;
  out.order = MonomialOrder::degrevlex();
  out.field = ideal.field;
  out.blocks = ideal.blocks;
  out.reduced = true;
  for (const auto& b : big.basis) {
    if ((b.support() & 1u) != 0) continue;
    std::vector<Term> terms;
    for (const auto& tm : b.terms()) {
      Monomial m(n);
      for (std::size_t i = 0; i < n; ++i)
        if (tm.mono[i + 1] != 0) m.set(i, tm.mono[i + 1]);
      terms.push_back({m, tm.coef});
    }
    out.basis.push_back(MultiPoly::from_terms(ideal.field, ideal.blocks, std::move(terms)));
  }
  return out;
}

IdealPresentation saturate(const IdealPresentation& ideal, const MultiPoly& g) {
  GroebnerBasis b = saturate_basis(ideal, g);
  IdealPresentation out;
  out.generators = std::move(b.basis);
  out.order = MonomialOrder::degrevlex();
  out.field = ideal.field;
  out.blocks = ideal.blocks;
  return out;
}

}  // namespace mlv
