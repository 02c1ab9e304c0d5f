#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "optwist/errors.hpp"

namespace optwist {

// A permutation on {0..n-1}: perm[i] is the target position of the symbol
// currently at position i.
using Permutation = std::vector<int>;

// Koszul sign of reordering a word of graded symbols: the product over
// inversions (i < j, perm[i] > perm[j]) of (-1)^(deg_i * deg_j).
inline int koszul_sign(const std::vector<int>& degrees, const Permutation& perm) {
  if (degrees.size() != perm.size())
    throw LengthMismatch("koszul_sign: |degrees| != |perm|");
  int sign = 1;
  const size_t n = perm.size();
  for (size_t i = 0; i < n; ++i) {
    if (!(degrees[i] & 1)) continue;
    for (size_t j = i + 1; j < n; ++j) {
      if ((degrees[j] & 1) && perm[i] > perm[j]) sign = -sign;
    }
  }
  return sign;
}

// Plain permutation sign.
inline int permutation_sign(const Permutation& perm) {
  std::vector<int> odd(perm.size(), 1);
  return koszul_sign(odd, perm);
}

struct SignedPermutation {
  Permutation perm;
  std::vector<int> degrees;

  int sign() const { return koszul_sign(degrees, perm); }
};

inline Permutation compose_permutations(const Permutation& second, const Permutation& first) {
  if (second.size() != first.size()) throw LengthMismatch("compose_permutations");
  Permutation r(first.size());
  for (size_t i = 0; i < first.size(); ++i) r[i] = second[first[i]];
  return r;
}

inline Permutation inverse_permutation(const Permutation& perm) {
  Permutation r(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) r[perm[i]] = static_cast<int>(i);
  return r;
}

// The inverses of (p,q)-shuffles, in lexicographic order of the defining
// p-subset. A (p,q)-shuffle s satisfies s(1)<...<s(p) and s(p+1)<...<s(p+q);
// we return the inverse permutations (0-based).
inline std::vector<Permutation> shuffle_inverses(int p, int q) {
  std::vector<Permutation> out;
  const int n = p + q;
  std::vector<int> subset(p);
  std::iota(subset.begin(), subset.end(), 0);
  auto emit = [&]() {
    // shuffle s: s maps 0..p-1 to subset (increasing), p..n-1 to complement.
    Permutation s(n);
    std::vector<bool> used(n, false);
    for (int i = 0; i < p; ++i) {
      s[i] = subset[i];
      used[subset[i]] = true;
    }
    int k = p;
    for (int v = 0; v < n; ++v)
      if (!used[v]) s[k++] = v;
    out.push_back(inverse_permutation(s));
  };
  if (p == 0 || q == 0) {
    Permutation id(n);
    std::iota(id.begin(), id.end(), 0);
    out.push_back(id);
    return out;
  }
  while (true) {
    emit();
    // next p-subset of {0..n-1} in lexicographic order
    int i = p - 1;
    while (i >= 0 && subset[i] == n - p + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < p; ++j) subset[j] = subset[j - 1] + 1;
  }
  return out;
}

}  // namespace optwist
