// Copyright 2026 The tcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tcv/vat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

namespace tcv
{

namespace
{

std::vector<std::size_t> labels_without(const VATResult & v, const std::vector<char> & removed)
{
  const std::size_t n = v.size();
  // Position in VAT order of each original index.
  std::vector<std::size_t> position(n);
  for (std::size_t p = 0; p < n; ++p) {
    position[v.permutation[p]] = p;
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t z = 0; z < v.mst_edges.size(); ++z) {
    if (removed[z]) {
      continue;
    }
    const std::size_t a = find(position[v.mst_edges[z].from]);
    const std::size_t b = find(position[v.mst_edges[z].to]);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::size_t> label_of_root(n, n);
  std::vector<std::size_t> labels(n);
  std::size_t next_label = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t root = find(p);
    if (label_of_root[root] == n) {
      label_of_root[root] = next_label++;
    }
    labels[v.permutation[p]] = label_of_root[root];
  }
  return labels;
}

}  // namespace

VATResult vat(const DistanceMatrix & d)
{
  const std::size_t n = d.size();
  if (n < 2) {
    throw DataError("VAT needs at least two objects");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(d(i, j) >= 0.0)) {
        throw DataError("VAT input has a negative or NaN entry");
      }
      if (d(i, j) != d(j, i)) {
        throw DataError("VAT input is not symmetric");
      }
    }
  }

  std::size_t start = 0;
  double largest = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d(i, j) > largest) {
        largest = d(i, j);
        start = i;
      }
    }
  }

  VATResult r;
  r.permutation.reserve(n);
  std::vector<char> visited(n, 0);
  std::vector<double> reach(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> via(n, start);
  auto visit = [&](std::size_t obj) {
    visited[obj] = 1;
    r.permutation.push_back(obj);
    for (std::size_t j = 0; j < n; ++j) {
      if (!visited[j] && d(obj, j) < reach[j]) {
        reach[j] = d(obj, j);
        via[j] = obj;
      }
    }
  };
  visit(start);
  while (r.permutation.size() < n) {
    std::size_t next = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!visited[j] && (next == n || reach[j] < reach[next])) {
        next = j;
      }
    }
    r.mst_edges.push_back({via[next], next, reach[next]});
    r.cut_magnitudes.push_back(reach[next]);
    visit(next);
  }

  std::vector<double> entries(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      entries[i * n + j] = d(r.permutation[i], r.permutation[j]);
    }
  }
  r.reordered = DistanceMatrix(n, std::move(entries), d.mode());
  return r;
}

DistanceMatrix ivat(const VATResult & v)
{
  const std::size_t n = v.size();
  const DistanceMatrix & ds = v.reordered;
  DistanceMatrix out(n, ds.mode());
  for (std::size_t r = 1; r < n; ++r) {
    std::size_t j = 0;
    for (std::size_t c = 1; c < r; ++c) {
      if (ds(r, c) < ds(r, j)) {
        j = c;
      }
    }
    out(r, j) = ds(r, j);
    for (std::size_t c = 0; c < r; ++c) {
      if (c != j) {
        out(r, c) = std::max(ds(r, j), out(j, c));
      }
    }
    for (std::size_t c = 0; c < r; ++c) {
      out(c, r) = out(r, c);
    }
  }
  return out;
}

std::vector<std::size_t> cut_k(const VATResult & v, std::size_t k)
{
  const std::size_t n = v.size();
  if (k < 1 || k > n) {
    throw DataError("cut_k: k must lie in [1, n]");
  }
  std::vector<std::size_t> order(v.mst_edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return v.mst_edges[a].magnitude > v.mst_edges[b].magnitude;
  });
  std::vector<char> removed(v.mst_edges.size(), 0);
  for (std::size_t z = 0; z + 1 < k; ++z) {
    removed[order[z]] = 1;
  }
  return labels_without(v, removed);
}

std::vector<std::size_t> cut_alpha(const VATResult & v, double alpha)
{
  if (!(alpha > 0.0)) {
    throw DataError("cut threshold alpha must be positive");
  }
  std::vector<char> removed(v.mst_edges.size(), 0);
  if (!v.mst_edges.empty()) {
    double sum = 0.0;
    for (const auto & e : v.mst_edges) {
      sum += e.magnitude;
    }
    const double threshold = alpha * (sum / static_cast<double>(v.mst_edges.size()));
    for (std::size_t z = 0; z < v.mst_edges.size(); ++z) {
      removed[z] = v.mst_edges[z].magnitude > threshold ? 1 : 0;
    }
  }
  return labels_without(v, removed);
}

std::size_t cluster_count(const std::vector<std::size_t> & labels)
{
  if (labels.empty()) {
    return 0;
  }
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

void write_pgm(const DistanceMatrix & m, const std::filesystem::path & path)
{
  const std::size_t n = m.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : m.entries()) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << "P5\n" << n << ' ' << n << "\n255\n";
  for (double x : m.entries()) {
    const auto level = static_cast<unsigned char>(std::lround(255.0 * (x - lo) / span));
    out.put(static_cast<char>(level));
  }
}

void write_matrix_csv(const DistanceMatrix & m, const std::filesystem::path & path)
{
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  char buf[32];
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.9g", m(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace tcv
