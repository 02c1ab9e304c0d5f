#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optwist/convolution.hpp"

namespace optwist {

// One failed structure relation: the arity, the basis inputs, and the value.
struct RelationFailure {
  int arity = 0;
  std::vector<int> inputs;
  Element residual;
};

struct RelationReport {
  bool pass = true;
  std::vector<RelationFailure> failures;
};

namespace detail {

inline RelationReport report_from_square(const ConvolutionElement& sq, int through_arity) {
  RelationReport rep;
  for (int n = 0; n <= through_arity; ++n) {
    for (const auto& [k, out] : sq.comp(n).entries) {
      rep.pass = false;
      rep.failures.push_back({n, k, out});
    }
  }
  return rep;
}

}  // namespace detail

// Curved A-infinity structure on a finite filtered graded module.
// shifted: theta degree -1 and |m_n| = -1; classical: theta degree -2 and
// |m_n| = n-2. Maps are stored for arities 1..arity_cap and are genuinely
// zero above the cap.
struct CurvedAinftyStructure {
  std::shared_ptr<const FilteredGradedModule> mod;
  bool shifted = true;
  int arity_cap = 1;
  Element curvature;
  std::vector<MultilinearMap> maps;  // maps[n] for n >= 1; maps[0] unused

  CurvedAinftyStructure() = default;
  CurvedAinftyStructure(std::shared_ptr<const FilteredGradedModule> m, bool sh, int cap)
      : mod(std::move(m)), shifted(sh), arity_cap(cap) {
    maps.reserve(cap + 1);
    for (int n = 0; n <= cap; ++n) maps.emplace_back(n, map_degree(n), false);
  }

  int map_degree(int n) const { return shifted ? -1 : n - 2; }
  int curvature_degree() const { return shifted ? -1 : -2; }
  CooperadVariant variant() const {
    return shifted ? CooperadVariant::uas_dual : CooperadVariant::endc_shifted;
  }

  MultilinearMap& map(int n) {
    if (n < 1 || n > arity_cap) throw IndexOutOfRange("structure map arity out of cap");
    return maps[n];
  }
  const MultilinearMap& map(int n) const {
    if (n < 1 || n > arity_cap) throw IndexOutOfRange("structure map arity out of cap");
    return maps[n];
  }

  void validate() const {
    if (!curvature.is_zero() && curvature.degree(*mod) != curvature_degree())
      throw DegreeMismatch("curvature has the wrong degree");
    for (int n = 1; n <= arity_cap; ++n) {
      if (maps[n].map_degree != map_degree(n))
        throw DegreeMismatch("structure map m_" + std::to_string(n) + " has the wrong degree");
      maps[n].check_degrees(*mod);
      if (!maps[n].filtration_preserving(*mod))
        throw FiltrationViolation("m_" + std::to_string(n) + " is not filtration-preserving");
    }
  }

  // the Maurer-Cartan element (m_0, m_1, ...) in the convolution algebra
  ConvolutionElement to_maurer_cartan() const {
    ConvolutionElement alpha(mod, variant(), -1, arity_cap);
    alpha.set_constant_term(curvature);
    for (int n = 1; n <= arity_cap; ++n) alpha.components[n] = maps[n];
    return alpha;
  }
};

// Checks every structure relation of arity n <= arity_cap - 1 exactly (the
// arity-n relation reads m_{n+1} against the curvature).
inline RelationReport check_relations(const CurvedAinftyStructure& s) {
  s.validate();
  ConvolutionElement alpha = s.to_maurer_cartan();
  ConvolutionElement sq = star(alpha, alpha, s.arity_cap - 1);
  return detail::report_from_square(sq, s.arity_cap - 1);
}

// theta + d(a) + m_2(a,a) + ... ; a finite sum by nilpotency.
inline Element mc_residual(const CurvedAinftyStructure& s, const Element& a) {
  if (!a.is_zero() && a.filtration(*s.mod) < 1)
    throw FiltrationViolation("mc_residual: element not in F_1");
  Element r = s.curvature;
  for (int n = 1; n <= s.arity_cap; ++n) {
    std::vector<Element> args(n, a);
    r += s.maps[n].evaluate_elements(args, *s.mod);
  }
  return r;
}

// Twisting by an element of F_1: m_n^a plugs a into all slots, with the
// printed classical signs (-1)^{sum k r_k}; the shifted regime is unsigned.
inline CurvedAinftyStructure twist(const CurvedAinftyStructure& s, const Element& a) {
  if (!a.is_zero()) {
    if (a.filtration(*s.mod) < 1) throw FiltrationViolation("twist: element not in F_1");
    if (a.degree(*s.mod) != -1) throw DegreeMismatch("twist: element must have degree -1");
  }
  CurvedAinftyStructure out(s.mod, s.shifted, s.arity_cap);
  out.curvature = mc_residual(s, a);
  for (int n = 1; n <= s.arity_cap; ++n) {
    // patterns (r_0..r_n), total m = n + |r| <= arity_cap
    std::vector<int> pattern(n + 1, 0);
    std::function<void(int, int)> rec = [&](int pos, int total) {
      if (pos == n + 1) {
        int m = n + total;
        if (m < 1 || m > s.arity_cap) return;
        int esign = 1;
        if (!s.shifted) {
          int e = 0;
          for (int k = 0; k <= n; ++k) e += k * pattern[k];
          esign = (e & 1) ? -1 : 1;
        }
        // slots: r_0 a's, free, r_1 a's, free, ..., free, r_n a's
        const auto& mm = s.maps[m];
        for (const auto& [u, val] : mm.entries) {
          Rational coeff(esign);
          std::vector<int> key;
          key.reserve(n);
          int slot = 0;
          bool ok = true;
          for (int k = 0; k <= n && ok; ++k) {
            for (int j = 0; j < pattern[k] && ok; ++j) {
              auto it = a.coeffs.find(u[slot]);
              if (it == a.coeffs.end())
                ok = false;
              else
                coeff *= it->second;
              ++slot;
            }
            if (k < n) key.push_back(u[slot++]);
          }
          if (ok && coeff != 0) out.maps[n].add_entry(std::move(key), val * coeff, *s.mod);
        }
        return;
      }
      for (int v = 0; total + v + n <= s.arity_cap; ++v) {
        pattern[pos] = v;
        rec(pos + 1, total + v);
      }
      pattern[pos] = 0;
    };
    rec(0, 0);
  }
  return out;
}

// Shifted curved L-infinity structure: symmetric maps l_n of degree -1.
// The classical variant is reached through (de)suspension.
struct CurvedLinftyStructure {
  std::shared_ptr<const FilteredGradedModule> mod;
  int arity_cap = 1;
  Element curvature;                 // theta, degree -1
  std::vector<MultilinearMap> maps;  // symmetric, maps[n] for n >= 1

  CurvedLinftyStructure() = default;
  CurvedLinftyStructure(std::shared_ptr<const FilteredGradedModule> m, int cap)
      : mod(std::move(m)), arity_cap(cap) {
    maps.reserve(cap + 1);
    for (int n = 0; n <= cap; ++n) maps.emplace_back(n, -1, true);
  }

  MultilinearMap& map(int n) {
    if (n < 1 || n > arity_cap) throw IndexOutOfRange("structure map arity out of cap");
    return maps[n];
  }
  const MultilinearMap& map(int n) const {
    if (n < 1 || n > arity_cap) throw IndexOutOfRange("structure map arity out of cap");
    return maps[n];
  }

  void validate() const {
    if (!curvature.is_zero() && curvature.degree(*mod) != -1)
      throw DegreeMismatch("curvature has the wrong degree");
    for (int n = 1; n <= arity_cap; ++n) {
      maps[n].check_degrees(*mod);
      if (!maps[n].filtration_preserving(*mod))
        throw FiltrationViolation("l_" + std::to_string(n) + " is not filtration-preserving");
    }
  }

  ConvolutionElement to_maurer_cartan() const {
    ConvolutionElement alpha(mod, CooperadVariant::ucom_dual, -1, arity_cap);
    alpha.set_constant_term(curvature);
    for (int n = 1; n <= arity_cap; ++n) alpha.components[n] = maps[n];
    return alpha;
  }
};

inline RelationReport check_relations(const CurvedLinftyStructure& s) {
  s.validate();
  ConvolutionElement alpha = s.to_maurer_cartan();
  ConvolutionElement sq = star(alpha, alpha, s.arity_cap - 1);
  return detail::report_from_square(sq, s.arity_cap - 1);
}

// theta^a = sum 1/k! l_k(a^k)
inline Element mc_residual(const CurvedLinftyStructure& s, const Element& a) {
  if (!a.is_zero() && a.filtration(*s.mod) < 1)
    throw FiltrationViolation("mc_residual: element not in F_1");
  Element r = s.curvature;
  Rational fact(1);
  for (int k = 1; k <= s.arity_cap; ++k) {
    fact *= k;
    std::vector<Element> args(k, a);
    r += s.maps[k].evaluate_elements(args, *s.mod) * (Rational(1) / fact);
  }
  return r;
}

// l_n^a = sum_k 1/k! l_{k+n}(a^k, -, ..., -)
inline CurvedLinftyStructure twist_linfty(const CurvedLinftyStructure& s, const Element& a) {
  if (!a.is_zero()) {
    if (a.filtration(*s.mod) < 1)
      throw FiltrationViolation("twist_linfty: element not in F_1");
    if (a.degree(*s.mod) != 0) throw DegreeMismatch("twist_linfty: element must have degree 0");
  }
  CurvedLinftyStructure out(s.mod, s.arity_cap);
  out.curvature = mc_residual(s, a);
  const int dim = s.mod->dim();
  for (int n = 1; n <= s.arity_cap; ++n) {
    std::vector<int> w(n, 0);
    while (true) {
      Element acc;
      Rational fact(1);
      for (int k = 0; k + n <= s.arity_cap; ++k) {
        if (k > 0) fact *= k;
        std::vector<Element> args;
        args.reserve(k + n);
        for (int j = 0; j < k; ++j) args.push_back(a);
        for (int j = 0; j < n; ++j) args.push_back(Element::basis_vector(w[j]));
        acc += s.maps[k + n].evaluate_elements(args, *s.mod) * (Rational(1) / fact);
      }
      if (!acc.is_zero()) out.maps[n].add_entry(w, acc, *s.mod);
      int i = n - 1;
      while (i >= 0 && w[i] == dim - 1) --i;
      if (i < 0) break;
      ++w[i];
      for (int j = i + 1; j < n; ++j) w[j] = w[i];
    }
  }
  return out;
}

// Symmetrisation of a shifted curved A-infinity structure: l_n = sum over
// permutations of the Koszul-signed reindexings of m_n.
inline CurvedLinftyStructure symmetrize(const CurvedAinftyStructure& s) {
  if (!s.shifted)
    throw VariantMismatch("symmetrize: suspend the classical structure first");
  CurvedLinftyStructure out(s.mod, s.arity_cap);
  out.curvature = s.curvature;
  for (int n = 1; n <= s.arity_cap; ++n)
    out.maps[n] = symmetrize_map(s.maps[n], *s.mod, /*with_sgn=*/false);
  return out;
}

// Suspension: turns a classical curved A-infinity structure on A into a
// shifted one on sA (same names, degrees raised by one), and back. The two
// printed relation sets must agree through this map; any disagreement is a
// sign-convention bug and surfaces as a failed relation check.
inline CurvedAinftyStructure suspend(const CurvedAinftyStructure& s) {
  if (s.shifted) throw VariantMismatch("suspend expects a classical structure");
  GradedBasis nb;
  {
    std::vector<BasisElement> els = s.mod->basis.elements;
    for (auto& e : els) e.degree += 1;
    nb = GradedBasis(els);
  }
  auto nmod = std::make_shared<FilteredGradedModule>(nb, s.mod->nilpotency);
  CurvedAinftyStructure out(nmod, /*shifted=*/true, s.arity_cap);
  out.curvature = s.curvature;
  for (int n = 1; n <= s.arity_cap; ++n) {
    for (const auto& [u, val] : s.maps[n].entries) {
      // m'_n(s x_1, ..., s x_n) = (-1)^{sum_i (n-i) |x_i|} s m_n(x_1,...,x_n)
      int e = 0;
      for (int i = 0; i < n; ++i) e += (n - 1 - i) * s.mod->basis.degree(u[i]);
      int sign = (e & 1) ? -1 : 1;
      out.maps[n].add_entry(u, val * Rational(sign), *nmod);
    }
  }
  return out;
}

// Kontsevich-Positselski gauge: lambda with lambda_0 = lambda_1 = 0 and
// (1+lambda) * alpha = alpha_0 through the requested arity. Classical regime.
inline GaugeElement kp_gauge(const CurvedAinftyStructure& s,
                             const std::map<int, Rational>& theta_dual, int arity_cap) {
  if (s.curvature.is_zero()) throw NoCurvatureFunctional("kp_gauge: theta = 0");
  {
    Rational pair(0);
    for (const auto& [i, v] : s.curvature.coeffs) {
      auto it = theta_dual.find(i);
      if (it != theta_dual.end()) pair += v * it->second;
    }
    if (pair != 1) throw NoCurvatureFunctional("kp_gauge: theta_dual(theta) != 1");
  }
  ConvolutionElement alpha = s.to_maurer_cartan();
  if (!is_maurer_cartan(alpha, arity_cap))
    throw NotMaurerCartan("kp_gauge: structure relations fail");
  ConvolutionElement alpha0(s.mod, alpha.variant, -1, 0);
  alpha0.set_constant_term(s.curvature);

  GaugeElement g = convolution_unit(s.mod, alpha.variant);  // 1 + lambda
  g = g.truncated(arity_cap + 1);
  for (int n = 1; n <= arity_cap; ++n) {
    ConvolutionElement cur = star(g, alpha, n);
    const MultilinearMap& delta = cur.comp(n);
    if (delta.is_zero()) continue;
    // lambda_{n+1} := -h(delta_n), h(f)(x_0,...,x_n) = theta*(x_0) f(x_1..x_n)
    MultilinearMap lam(n + 1, delta.map_degree - s.curvature_degree(), false);
    for (const auto& [u, val] : delta.entries) {
      for (const auto& [i, c] : theta_dual) {
        std::vector<int> key;
        key.reserve(n + 1);
        key.push_back(i);
        key.insert(key.end(), u.begin(), u.end());
        lam.add_entry(std::move(key), val * (c * Rational(-1)), *s.mod);
      }
    }
    g.comp_mut(n + 1) += lam;
    // the new component must close the arity-n equation exactly
    ConvolutionElement check = star(g, alpha, n);
    if (!check.comp(n).is_zero()) throw Error("kp_gauge: homotopy step failed at arity " +
                                              std::to_string(n));
  }
  ConvolutionElement lambda = g - convolution_unit(s.mod, alpha.variant);
  lambda.degree = 0;
  return lambda;
}

}  // namespace optwist
