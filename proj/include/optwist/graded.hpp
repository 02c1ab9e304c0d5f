#pragma once

#include <map>
#include <string>
#include <vector>

#include "optwist/errors.hpp"
#include "optwist/rational.hpp"

namespace optwist {

struct BasisElement {
  std::string name;
  int degree = 0;
  int filtration = 0;  // non-negative; the element spans a piece of F_filtration
};

// Ordered graded basis; the element order is the canonical column order used
// by every matrix in the library.
struct GradedBasis {
  std::vector<BasisElement> elements;
  std::map<std::string, int> index_of;

  GradedBasis() = default;
  explicit GradedBasis(std::vector<BasisElement> els) : elements(std::move(els)) {
    for (int i = 0; i < static_cast<int>(elements.size()); ++i) {
      if (elements[i].filtration < 0)
        throw InputError("filtration must be non-negative: " + elements[i].name);
      auto [it, fresh] = index_of.emplace(elements[i].name, i);
      if (!fresh) throw InputError("duplicate basis name: " + elements[i].name);
    }
  }

  int size() const { return static_cast<int>(elements.size()); }
  int degree(int i) const { return elements.at(i).degree; }
  int filtration(int i) const { return elements.at(i).filtration; }
  int index(const std::string& name) const {
    auto it = index_of.find(name);
    if (it == index_of.end()) throw InputError("unknown basis element: " + name);
    return it->second;
  }
};

// Finite filtered graded module with F_N = 0: every basis element has
// filtration < nilpotency.
struct FilteredGradedModule {
  GradedBasis basis;
  int nilpotency = 1;

  FilteredGradedModule() = default;
  FilteredGradedModule(GradedBasis b, int n) : basis(std::move(b)), nilpotency(n) {
    if (n < 1) throw InputError("nilpotency must be >= 1");
    for (const auto& e : basis.elements)
      if (e.filtration >= n)
        throw InputError("basis element " + e.name + " has filtration >= nilpotency");
  }
  int dim() const { return basis.size(); }
};

// Element of a module: sparse coefficients over the basis.
struct Element {
  std::map<int, Rational> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  void add(int i, const Rational& v) {
    if (v == 0) return;
    auto it = coeffs.find(i);
    if (it == coeffs.end())
      coeffs[i] = v;
    else {
      it->second += v;
      if (it->second == 0) coeffs.erase(it);
    }
  }
  Element& operator+=(const Element& o) {
    for (const auto& [i, v] : o.coeffs) add(i, v);
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator*(const Element& a, const Rational& s) {
    Element r;
    if (s == 0) return r;
    for (const auto& [i, v] : a.coeffs) r.coeffs[i] = v * s;
    return r;
  }
  friend Element operator-(const Element& a, const Element& b) {
    return a + b * Rational(-1);
  }
  bool operator==(const Element& o) const { return coeffs == o.coeffs; }

  static Element basis_vector(int i) {
    Element e;
    e.coeffs[i] = 1;
    return e;
  }

  // minimal filtration among supported basis elements; module nilpotency if 0
  int filtration(const FilteredGradedModule& mod) const {
    int f = mod.nilpotency;
    for (const auto& [i, v] : coeffs) f = std::min(f, mod.basis.filtration(i));
    return f;
  }
  // homogeneous degree; throws if mixed
  int degree(const FilteredGradedModule& mod) const {
    bool first = true;
    int d = 0;
    for (const auto& [i, v] : coeffs) {
      if (first) {
        d = mod.basis.degree(i);
        first = false;
      } else if (mod.basis.degree(i) != d) {
        throw DegreeMismatch("element is not degree-homogeneous");
      }
    }
    return d;
  }
};

}  // namespace optwist
