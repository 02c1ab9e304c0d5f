#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "optwist/errors.hpp"
#include "optwist/rational.hpp"

namespace optwist {

// Sparse vector: sorted (index, value) pairs, no stored zeros.
struct SparseVector {
  std::vector<std::pair<int, Rational>> entries;

  void add(int i, const Rational& v) {
    if (v == 0) return;
    auto it = std::lower_bound(entries.begin(), entries.end(), i,
                               [](const auto& e, int idx) { return e.first < idx; });
    if (it != entries.end() && it->first == i) {
      it->second += v;
      if (it->second == 0) entries.erase(it);
    } else {
      entries.insert(it, {i, v});
    }
  }
  Rational get(int i) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), i,
                               [](const auto& e, int idx) { return e.first < idx; });
    if (it != entries.end() && it->first == i) return it->second;
    return Rational(0);
  }
  bool empty() const { return entries.empty(); }
  bool operator==(const SparseVector& o) const { return entries == o.entries; }
};

struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::map<std::pair<int, int>, Rational> entries;  // (row, col) -> value

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c) {}

  void set(int r, int c, const Rational& v) {
    check_index(r, c);
    if (v == 0)
      entries.erase({r, c});
    else
      entries[{r, c}] = v;
  }
  void add(int r, int c, const Rational& v) {
    check_index(r, c);
    auto it = entries.find({r, c});
    if (it == entries.end()) {
      if (v != 0) entries[{r, c}] = v;
    } else {
      it->second += v;
      if (it->second == 0) entries.erase(it);
    }
  }
  Rational get(int r, int c) const {
    auto it = entries.find({r, c});
    return it == entries.end() ? Rational(0) : it->second;
  }

  SparseVector apply(const SparseVector& x) const {
    SparseVector y;
    std::map<int, Rational> acc;
    for (const auto& [rc, v] : entries) {
      Rational xv = x.get(rc.second);
      if (xv != 0) acc[rc.first] += v * xv;
    }
    for (auto& [i, v] : acc)
      if (v != 0) y.entries.emplace_back(i, v);
    return y;
  }

  static SparseMatrix identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.entries[{i, i}] = 1;
    return m;
  }

 private:
  void check_index(int r, int c) const {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw IndexOutOfRange("SparseMatrix index out of range");
  }
};

namespace detail {

// Column-list elimination on one connected block of columns. Returns the rank
// and appends kernel vectors (in the original column indexing).
struct EliminationBlock {
  // cols[j]: sorted (row, value); tracked combination in terms of original
  // columns for kernel extraction.
  std::vector<std::vector<std::pair<int, Rational>>> cols;
  std::vector<std::vector<std::pair<int, Rational>>> combo;  // col -> coefficients
  std::vector<int> orig;                                     // original column ids
};

inline void axpy_sparse(std::vector<std::pair<int, Rational>>& x, const Rational& f,
                        const std::vector<std::pair<int, Rational>>& y) {
  // x += f*y, both sorted
  std::vector<std::pair<int, Rational>> out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      Rational v = f * y[j].second;
      if (v != 0) out.emplace_back(y[j].first, std::move(v));
      ++j;
    } else {
      Rational v = x[i].second + f * y[j].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  x = std::move(out);
}

// Gaussian elimination with pivoting on the entry of smallest bit-size
// (ties broken by sparsity), which keeps rationals small in practice.
inline int eliminate_block(EliminationBlock& blk, std::vector<SparseVector>* kernel,
                           bool want_kernel) {
  int rank = 0;
  const int ncols = static_cast<int>(blk.cols.size());
  std::vector<bool> done(ncols, false);
  while (true) {
    // pick pivot: among all remaining nonzero columns, entry with the smallest
    // weight, tie-break on shorter column.
    int pc = -1, pr = -1;
    size_t best_w = ~size_t(0);
    size_t best_len = ~size_t(0);
    for (int j = 0; j < ncols; ++j) {
      if (done[j] || blk.cols[j].empty()) continue;
      for (const auto& [r, v] : blk.cols[j]) {
        size_t w = rational_weight(v);
        if (w < best_w || (w == best_w && blk.cols[j].size() < best_len)) {
          best_w = w;
          best_len = blk.cols[j].size();
          pc = j;
          pr = r;
        }
      }
    }
    if (pc < 0) break;
    ++rank;
    done[pc] = true;
    Rational pv = 0;
    for (const auto& [r, v] : blk.cols[pc])
      if (r == pr) pv = v;
    for (int j = 0; j < ncols; ++j) {
      if (j == pc || done[j] || blk.cols[j].empty()) continue;
      Rational v = 0;
      bool hit = false;
      for (const auto& [r, val] : blk.cols[j])
        if (r == pr) {
          v = val;
          hit = true;
          break;
        }
      if (!hit) continue;
      Rational f = -v / pv;
      axpy_sparse(blk.cols[j], f, blk.cols[pc]);
      if (want_kernel) axpy_sparse(blk.combo[j], f, blk.combo[pc]);
    }
  }
  if (want_kernel && kernel) {
    for (int j = 0; j < ncols; ++j) {
      if (blk.cols[j].empty()) {
        SparseVector k;
        k.entries = blk.combo[j];
        kernel->push_back(std::move(k));
      }
    }
  }
  return rank;
}

}  // namespace detail

struct RankKernel {
  int rank = 0;
  std::vector<SparseVector> kernel_basis;
};

// Exact rank and kernel basis over the rationals. Columns are split into
// connected blocks (columns sharing a row) first; blocks eliminate
// independently, which matters for the large graph-complex slices.
inline RankKernel rank_kernel(const SparseMatrix& m, bool want_kernel = true) {
  RankKernel out;
  if (m.cols == 0) return out;

  // union-find over columns through shared rows
  std::vector<int> parent(m.cols);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> row_col;  // first column seen per row
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<int, int> row_rep;
  for (const auto& [rc, v] : m.entries) {
    auto [it, fresh] = row_rep.try_emplace(rc.first, rc.second);
    if (!fresh) {
      int a = find(it->second), b = find(rc.second);
      if (a != b) parent[a] = b;
    }
  }
  std::map<int, detail::EliminationBlock> blocks;
  for (int c = 0; c < m.cols; ++c) blocks[find(c)].orig.push_back(c);
  for (auto& [root, blk] : blocks) {
    blk.cols.resize(blk.orig.size());
    blk.combo.resize(blk.orig.size());
  }
  std::map<int, int> col_slot;
  for (auto& [root, blk] : blocks)
    for (size_t s = 0; s < blk.orig.size(); ++s) col_slot[blk.orig[s]] = static_cast<int>(s);
  for (const auto& [rc, v] : m.entries) {
    auto& blk = blocks[find(rc.second)];
    blk.cols[col_slot[rc.second]].emplace_back(rc.first, v);
  }
  for (auto& [root, blk] : blocks) {
    for (auto& col : blk.cols)
      std::sort(col.begin(), col.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    if (want_kernel)
      for (size_t s = 0; s < blk.orig.size(); ++s) blk.combo[s] = {{blk.orig[s], Rational(1)}};
    out.rank += detail::eliminate_block(blk, want_kernel ? &out.kernel_basis : nullptr,
                                        want_kernel);
  }
  return out;
}

inline int rank(const SparseMatrix& m) { return rank_kernel(m, false).rank; }

// dim ker(d_out) - rank(d_in) for a three-term slice; checks d_out * d_in = 0.
inline int cohomology_dims(const SparseMatrix& d_in, const SparseMatrix& d_out) {
  if (d_in.cols > 0 && d_out.rows > 0) {
    if (d_in.rows != d_out.cols)
      throw LengthMismatch("cohomology_dims: middle dimensions disagree");
    // exact check of d_out . d_in = 0, column by column
    std::map<int, std::vector<std::pair<int, Rational>>> in_cols;
    for (const auto& [rc, v] : d_in.entries) in_cols[rc.second].emplace_back(rc.first, v);
    std::map<int, std::vector<std::pair<int, Rational>>> out_cols;
    for (const auto& [rc, v] : d_out.entries) out_cols[rc.second].emplace_back(rc.first, v);
    for (const auto& [c, col] : in_cols) {
      std::map<int, Rational> acc;
      for (const auto& [mid, v] : col) {
        auto it = out_cols.find(mid);
        if (it == out_cols.end()) continue;
        for (const auto& [r, w] : it->second) acc[r] += v * w;
      }
      for (const auto& [r, v] : acc)
        if (v != 0) throw CompositionNotZero("cohomology_dims: d_out . d_in != 0");
    }
  }
  int middle = d_out.cols > 0 ? d_out.cols : d_in.rows;
  int rk_out = d_out.rows > 0 ? rank(d_out) : 0;
  int rk_in = d_in.cols > 0 ? rank(d_in) : 0;
  int dim = middle - rk_out - rk_in;
  return dim;
}

}  // namespace optwist
