#pragma once

#include <memory>
#include <vector>

#include "optwist/multilinear.hpp"

namespace optwist {

// The three cooperads whose convolution algebras we use. The variant fixes
// the degree offset of the arity-n component and the sign rule of the
// infinitesimal coproduct.
//   uas_dual      unsigned ns coproduct, offset 0   (shifted A-infinity)
//   endc_shifted  signed ns coproduct,   offset n-1 (classical A-infinity)
//   ucom_dual     symmetric components,  offset 0   (shifted L-infinity)
enum class CooperadVariant { uas_dual, endc_shifted, ucom_dual };

inline int variant_offset(CooperadVariant v, int n) {
  return v == CooperadVariant::endc_shifted ? n - 1 : 0;
}
inline bool variant_symmetric(CooperadVariant v) {
  return v == CooperadVariant::ucom_dual;
}

// Truncated sequence (f_0, f_1, ..., f_cap) of multilinear maps. Components
// beyond the stored cap are zero; an element whose true support lies within
// the cap is represented exactly, and all operations below are then exact
// through whatever cap the caller requests.
struct ConvolutionElement {
  std::shared_ptr<const FilteredGradedModule> mod;
  CooperadVariant variant = CooperadVariant::uas_dual;
  int degree = 0;
  std::vector<MultilinearMap> components;  // index by arity

  ConvolutionElement() = default;
  ConvolutionElement(std::shared_ptr<const FilteredGradedModule> m, CooperadVariant v, int deg,
                     int cap)
      : mod(std::move(m)), variant(v), degree(deg) {
    components.reserve(cap + 1);
    for (int n = 0; n <= cap; ++n)
      components.emplace_back(n, deg + variant_offset(v, n), variant_symmetric(v));
  }

  int cap() const { return static_cast<int>(components.size()) - 1; }

  const MultilinearMap& comp(int n) const {
    static thread_local MultilinearMap zero;
    if (n < 0 || n > cap()) {
      zero = MultilinearMap(n, degree + variant_offset(variant, n), variant_symmetric(variant));
      return zero;
    }
    return components[n];
  }
  MultilinearMap& comp_mut(int n) {
    if (n < 0) throw IndexOutOfRange("negative arity");
    while (cap() < n)
      components.emplace_back(cap() + 1, degree + variant_offset(variant, cap() + 1),
                              variant_symmetric(variant));
    return components[n];
  }

  bool is_zero() const {
    for (const auto& c : components)
      if (!c.is_zero()) return false;
    return true;
  }
  // arity-0 part as a module element
  Element constant_term() const {
    if (cap() < 0 || components[0].entries.empty()) return {};
    return components[0].entries.begin()->second;
  }
  void set_constant_term(const Element& e) {
    comp_mut(0).entries.clear();
    if (!e.is_zero()) comp_mut(0).entries.emplace(std::vector<int>{}, e);
  }

  ConvolutionElement truncated(int new_cap) const {
    ConvolutionElement r(mod, variant, degree, new_cap);
    for (int n = 0; n <= std::min(new_cap, cap()); ++n) r.components[n] = components[n];
    return r;
  }

  ConvolutionElement& operator+=(const ConvolutionElement& o) {
    if (variant != o.variant || mod.get() != o.mod.get())
      throw VariantMismatch("adding convolution elements of different variants");
    if (degree != o.degree && !is_zero() && !o.is_zero())
      throw DegreeMismatch("adding convolution elements of different degrees");
    if (is_zero()) degree = o.degree;
    for (int n = 0; n <= o.cap(); ++n) {
      if (o.components[n].is_zero()) continue;
      comp_mut(n) += o.components[n];
    }
    return *this;
  }
  friend ConvolutionElement operator+(ConvolutionElement a, const ConvolutionElement& b) {
    return a += b;
  }
  friend ConvolutionElement operator*(const ConvolutionElement& a, const Rational& s) {
    ConvolutionElement r = a;
    for (auto& c : r.components) c = c * s;
    return r;
  }
  friend ConvolutionElement operator-(const ConvolutionElement& a, const ConvolutionElement& b) {
    return a + b * Rational(-1);
  }
  bool equals_up_to(const ConvolutionElement& o, int through_cap) const {
    for (int n = 0; n <= through_cap; ++n)
      if (!(comp(n) == o.comp(n))) return false;
    return true;
  }
};

// Left unit: identity in arity 1.
inline ConvolutionElement convolution_unit(std::shared_ptr<const FilteredGradedModule> mod,
                                           CooperadVariant v) {
  ConvolutionElement one(mod, v, 0, 1);
  for (int i = 0; i < mod->dim(); ++i)
    one.components[1].add_entry({i}, Element::basis_vector(i), *mod);
  return one;
}

// Validity of a gauge-group direction (Lie side): degree 0, arity-0 part in
// F_1, arity-1 part filtration-raising.
inline void validate_gauge_direction(const ConvolutionElement& x) {
  if (x.degree != 0 && !x.is_zero())
    throw FiltrationViolation("gauge directions must have degree 0");
  Element c = x.constant_term();
  if (!c.is_zero() && c.filtration(*x.mod) < 1)
    throw FiltrationViolation("gauge direction: arity-0 part not in F_1");
  if (!x.comp(1).filtration_preserving(*x.mod, 1))
    throw FiltrationViolation("gauge direction: arity-1 part not filtration-raising");
}

// Validity of a group-like element 1 + b.
inline void validate_grouplike(const ConvolutionElement& g) {
  ConvolutionElement b = g - convolution_unit(g.mod, g.variant);
  validate_gauge_direction(b);
}

using GaugeElement = ConvolutionElement;

namespace detail {

// signed coefficient of nu_{p+1+r} o_{p+1} nu_q in the infinitesimal coproduct
inline int coproduct_sign(CooperadVariant v, int p, int q, int r) {
  if (v == CooperadVariant::endc_shifted) return (p * (q + 1)) % 2 ? -1 : 1;
  return 1;
}

}  // namespace detail

// Convolution pre-Lie product. Exact through out_cap for exactly-supported
// inputs: the q = 0 terms read f at arity n+1, which is available (possibly
// zero) by the support convention.
inline ConvolutionElement star(const ConvolutionElement& f, const ConvolutionElement& g,
                               int out_cap) {
  if (f.variant != g.variant || f.mod.get() != g.mod.get())
    throw VariantMismatch("star: incompatible elements");
  const auto& mod = *f.mod;
  ConvolutionElement out(f.mod, f.variant, f.degree + g.degree, out_cap);
  if (!variant_symmetric(f.variant)) {
    for (int n = 0; n <= out_cap; ++n) {
      for (int q = 0; q <= g.cap(); ++q) {
        int m = n - q + 1;  // arity of the f component
        if (m < 1 || m > f.cap()) continue;
        const auto& fm = f.comp(m);
        const auto& gq = g.comp(q);
        if (fm.is_zero() || gq.is_zero()) continue;
        for (int p = 0; p + 1 <= m; ++p) {
          int r = m - 1 - p;
          int sign = detail::coproduct_sign(f.variant, p, q, r);
          if (f.variant == CooperadVariant::endc_shifted && (g.degree & 1) && ((p + r) & 1))
            sign = -sign;  // Koszul: g passes nu_{p+1+r}
          MultilinearMap term = compose_at(fm, p + 1, gq, mod);
          out.comp_mut(n) += term * Rational(sign);
        }
      }
    }
    return out;
  }
  // Symmetric case: (f*g)(x_1..x_n) summed over the inverses of the
  // (q,n-q)-shuffles, i.e. over the q-subsets S feeding g, with the Koszul
  // sign of rearranging the inputs into (x_S, x_{S^c}) order. Structure
  // constants are computed on sorted tuples directly; tuples whose input
  // filtrations already sum to >= nilpotency are skipped (their value lies
  // in F_N = 0 for the filtration-preserving maps we handle).
  const int dim = mod.dim();
  const int filt_budget = mod.nilpotency;
  for (int n = 0; n <= out_cap; ++n) {
    bool any = false;
    for (int q = 0; q <= std::min(n, g.cap()); ++q) {
      int m = n - q + 1;
      if (m >= 1 && m <= f.cap() && !f.comp(m).is_zero() && !g.comp(q).is_zero()) any = true;
    }
    if (!any) continue;
    auto& target = out.comp_mut(n);
    // iterate sorted basis tuples of length n
    std::vector<int> w(n, 0);
    while (true) {
      int fsum = 0;
      for (int j = 0; j < n; ++j) fsum += mod.basis.filtration(w[j]);
      if (fsum >= filt_budget) {
        // advance as usual; the value is forced to zero
        int i = n - 1;
        while (i >= 0 && w[i] == dim - 1) --i;
        if (i < 0) break;
        ++w[i];
        for (int j = i + 1; j < n; ++j) w[j] = w[i];
        continue;
      }
      Element acc;
      for (int q = 0; q <= std::min(n, g.cap()); ++q) {
        int m = n - q + 1;
        if (m < 1 || m > f.cap()) continue;
        const auto& fm = f.comp(m);
        const auto& gq = g.comp(q);
        if (fm.is_zero() || gq.is_zero()) continue;
        std::vector<int> S(q);
        for (int i = 0; i < q; ++i) S[i] = i;
        while (true) {
          std::vector<int> gkey(q), fkey_rest;
          std::vector<bool> taken(n, false);
          for (int i = 0; i < q; ++i) {
            gkey[i] = w[S[i]];
            taken[S[i]] = true;
          }
          Element gval = gq.evaluate(gkey, mod);
          if (!gval.is_zero()) {
            fkey_rest.clear();
            Permutation perm(n);
            std::vector<int> degs(n);
            for (int i = 0; i < q; ++i) perm[S[i]] = i;
            int t = q;
            for (int pos = 0; pos < n; ++pos)
              if (!taken[pos]) {
                perm[pos] = t++;
                fkey_rest.push_back(w[pos]);
              }
            for (int pos = 0; pos < n; ++pos) degs[pos] = mod.basis.degree(w[pos]);
            int sign = koszul_sign(degs, perm);
            for (const auto& [gb, gc] : gval.coeffs) {
              std::vector<int> fkey;
              fkey.reserve(m);
              fkey.push_back(gb);
              fkey.insert(fkey.end(), fkey_rest.begin(), fkey_rest.end());
              acc += fm.evaluate(std::move(fkey), mod) * (gc * sign);
            }
          }
          if (q == 0) break;
          int i = q - 1;
          while (i >= 0 && S[i] == n - q + i) --i;
          if (i < 0) break;
          ++S[i];
          for (int j = i + 1; j < q; ++j) S[j] = S[j - 1] + 1;
        }
      }
      if (!acc.is_zero()) target.add_entry(w, acc, mod);
      // next sorted tuple
      if (n == 0) break;
      int i = n - 1;
      while (i >= 0 && w[i] == dim - 1) --i;
      if (i < 0) break;
      ++w[i];
      for (int j = i + 1; j < n; ++j) w[j] = w[i];
    }
  }
  return out;
}

namespace detail {

// Symmetric-brace recursion with a hard cap on intermediate arities. An
// intermediate component above hard_cap can only flow back below out_cap
// through arity-0 insertions, each of which raises the filtration, so a hard
// cap of out_cap + nilpotency keeps every retained component exact.
inline ConvolutionElement brace_clamped(const ConvolutionElement& a,
                                        std::vector<ConvolutionElement> bs, int out_cap,
                                        int hard_cap) {
  if (bs.empty()) return a.truncated(std::min(out_cap, hard_cap));
  if (bs.size() == 1) return star(a, bs[0], std::min(out_cap, hard_cap));
  int inner = std::min(out_cap + 1, hard_cap);
  ConvolutionElement last = bs.back();
  bs.pop_back();
  ConvolutionElement r =
      star(brace_clamped(a, bs, inner, hard_cap), last, std::min(out_cap, hard_cap));
  for (size_t i = 0; i < bs.size(); ++i) {
    std::vector<ConvolutionElement> rest = bs;
    rest[i] = star(bs[i], last, inner);
    r = r - brace_clamped(a, rest, std::min(out_cap, hard_cap), hard_cap);
  }
  return r;
}

}  // namespace detail

// Symmetric braces {a; b_1, ..., b_k} by the defining recursion.
inline ConvolutionElement brace(const ConvolutionElement& a,
                                std::vector<ConvolutionElement> bs, int out_cap) {
  return detail::brace_clamped(a, std::move(bs), out_cap,
                               out_cap + a.mod->nilpotency);
}

// The brace series {a; b^k} vanishes once k exceeds this bound: every b
// insertion either adds a filtration level (arities 0, 1) or raises the
// arity, and both resources are capped.
inline int series_length(const FilteredGradedModule& mod, int out_cap) {
  return out_cap + 2 * mod.nilpotency + 2;
}

namespace detail {

// Evaluates the braces {a; w_1, ..., w_k} where every argument is a
// star-word in one degree-0 element b. Arguments are tracked by id in a
// growing pool, and results are memoised on the sorted id-multiset, which
// keeps the brace recursion polynomial. All arguments have degree 0, so the
// braces are plainly symmetric and the argument picked for the recursion
// step is irrelevant.
struct BracePowers {
  const ConvolutionElement& a;
  int cap;  // every intermediate is kept at this (clamped) cap
  std::vector<ConvolutionElement> pool;
  std::map<std::pair<int, int>, int> product_id;
  std::map<std::vector<int>, ConvolutionElement> memo;

  BracePowers(const ConvolutionElement& a_, const ConvolutionElement& b, int cap_)
      : a(a_), cap(cap_) {
    pool.push_back(b.truncated(cap + 1));
  }

  int product(int i, int j) {
    auto it = product_id.find({i, j});
    if (it != product_id.end()) return it->second;
    ConvolutionElement p = star(pool[i], pool[j], cap + 1);
    p.degree = 0;
    pool.push_back(std::move(p));
    int id = static_cast<int>(pool.size()) - 1;
    product_id[{i, j}] = id;
    return id;
  }

  const ConvolutionElement& eval(std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    auto it = memo.find(ids);
    if (it != memo.end()) return it->second;
    ConvolutionElement r(a.mod, a.variant, a.degree, cap);
    if (ids.empty()) {
      r = a.truncated(cap);
    } else {
      int c = ids.back();
      std::vector<int> rest(ids.begin(), ids.end() - 1);
      r = star(eval(rest), pool[c], cap);
      for (size_t i = 0; i < rest.size(); ++i) {
        if (i > 0 && rest[i] == rest[i - 1]) continue;  // same id: scale below
        int mult = 0;
        for (int id : rest)
          if (id == rest[i]) ++mult;
        int pid = product(rest[i], c);
        if (pool[pid].is_zero()) continue;
        std::vector<int> inner = rest;
        inner.erase(inner.begin() + i);
        inner.push_back(pid);
        r = r - eval(inner) * Rational(mult);
      }
    }
    return memo.emplace(std::move(ids), std::move(r)).first->second;
  }
};

}  // namespace detail

// Circle product a (x) (1+b): sum of 1/k! {a; b,...,b}.
inline ConvolutionElement circle(const ConvolutionElement& a, const ConvolutionElement& g,
                                 int out_cap) {
  ConvolutionElement b = g - convolution_unit(g.mod, g.variant);
  validate_gauge_direction(b);
  b.degree = 0;
  ConvolutionElement acc = a.truncated(out_cap);
  if (b.is_zero()) return acc;
  detail::BracePowers braces(a, b, out_cap + a.mod->nilpotency);
  Rational fact(1);
  std::vector<int> ids;
  const int kmax = series_length(*a.mod, out_cap);
  for (int k = 1; k <= kmax; ++k) {
    ids.push_back(0);
    fact *= k;
    const ConvolutionElement& term = braces.eval(ids);
    if (!term.is_zero()) acc += term.truncated(out_cap) * (Rational(1) / fact);
  }
  return acc;
}

// Pre-Lie exponential: 1 + lambda + lambda^{*2}/2! + ...  Intermediate powers
// are kept at cap out_cap + nilpotency: higher components can only re-enter
// the retained range through arity-0 insertions, which exhaust the
// filtration first.
inline GaugeElement prelie_exp(const ConvolutionElement& lam, int out_cap) {
  validate_gauge_direction(lam);
  ConvolutionElement acc = convolution_unit(lam.mod, lam.variant).truncated(out_cap);
  const int kmax = series_length(*lam.mod, out_cap);
  const int work = out_cap + lam.mod->nilpotency;
  ConvolutionElement pw = lam.truncated(work);
  Rational fact(1);
  for (int k = 1; k <= kmax; ++k) {
    fact *= k;
    if (pw.is_zero()) break;  // lambda^{*(k+1)} = lambda^{*k} * lambda
    acc += pw.truncated(out_cap) * (Rational(1) / fact);
    pw = star(pw, lam, work);
  }
  return acc;
}

// Pre-Lie logarithm (Magnus expansion), computed as the exact functional
// inverse of the exponential: the correction gains one filtration level per
// pass, so the loop terminates by nilpotency.
inline ConvolutionElement prelie_log(const GaugeElement& g, int out_cap) {
  validate_grouplike(g.truncated(out_cap));
  ConvolutionElement x = g.truncated(out_cap) - convolution_unit(g.mod, g.variant);
  const int passes = 2 * series_length(*g.mod, out_cap);
  for (int pass = 0; pass <= passes; ++pass) {
    ConvolutionElement err = g.truncated(out_cap) - prelie_exp(x, out_cap);
    if (err.is_zero()) return x;
    err.degree = 0;
    x += err;
  }
  throw Error("prelie_log: did not converge (nilpotency violated?)");
}

// Baker-Campbell-Hausdorff product via exp / circle / log.
inline ConvolutionElement bch(const ConvolutionElement& x, const ConvolutionElement& y,
                              int out_cap) {
  int work = out_cap + x.mod->nilpotency;
  GaugeElement gx = prelie_exp(x, work);
  GaugeElement gy = prelie_exp(y, work);
  return prelie_log(circle(gx, gy, work), out_cap);
}

// Checks the Maurer-Cartan equation through the given arity.
inline bool is_maurer_cartan(const ConvolutionElement& alpha, int through_arity) {
  ConvolutionElement sq = star(alpha, alpha, through_arity);
  return sq.is_zero();
}

// Gauge action  e^lambda . alpha = (e^lambda * alpha) (x) e^{-lambda}.
inline ConvolutionElement gauge_action(const ConvolutionElement& lam,
                                       const ConvolutionElement& alpha, int out_cap) {
  validate_gauge_direction(lam);
  if (!is_maurer_cartan(alpha, out_cap - 1))
    throw NotMaurerCartan("gauge_action: alpha * alpha != 0 within the cap");
  int work = out_cap + alpha.mod->nilpotency;
  GaugeElement epos = prelie_exp(lam, work);
  GaugeElement eneg = prelie_exp(lam * Rational(-1), work);
  return circle(star(epos, alpha, work), eneg, out_cap);
}

// Inverse of an infinity-isotopy in the group (group-likes, circle, 1).
inline GaugeElement isotopy_invert(const GaugeElement& f, int out_cap) {
  try {
    validate_grouplike(f);
  } catch (const FiltrationViolation& e) {
    throw NotIsotopy(std::string("isotopy_invert: ") + e.what());
  }
  int work = out_cap + f.mod->nilpotency;
  return prelie_exp(prelie_log(f, work) * Rational(-1), out_cap);
}

}  // namespace optwist
