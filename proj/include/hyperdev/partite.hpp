#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "hyperdev/families.hpp"
#include "hyperdev/hypergraph.hpp"
#include "hyperdev/regularity.hpp"

namespace hyperdev {

// Sorted vector of nonzero part-intersection sizes of an edge.
struct PartitionType {
  std::vector<int> parts;  // weakly decreasing, all >= 1

  PartitionType() = default;
  explicit PartitionType(std::vector<int> p) : parts(std::move(p)) {
    std::sort(parts.begin(), parts.end(), std::greater<int>());
    for (int x : parts)
      if (x < 1) throw config_error("partition parts must be positive");
  }
  int total() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  int length() const { return static_cast<int>(parts.size()); }
  auto operator<=>(const PartitionType&) const = default;

  std::string str() const {
    std::string s = "(";
    for (size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
    return s + ")";
  }
};

// All partitions of n, ordered by length then lexicographically.
inline std::vector<PartitionType> partitions_of(int n) {
  std::vector<PartitionType> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rem, int maxp) -> void {
    if (rem == 0) {
      out.push_back(PartitionType(cur));
      return;
    }
    for (int p = std::min(rem, maxp); p >= 1; --p) {
      cur.push_back(p);
      self(self, rem - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  std::sort(out.begin(), out.end(), [](const PartitionType& a, const PartitionType& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.parts < b.parts;
  });
  return out;
}

// l parts of size s; vertex (i, j) with part i in [0, l) and label j in
// [1, s] is stored as index i*s + (j-1). gamma is the target density knob.
// Strict mode pins l = 4 (r+1)! and gamma in [10 l^2 / s, 1/2]; relaxed mode
// admits any l >= r+3 (identities stay exact, the asymptotic constants
// don't).
struct PartiteSpec {
  int r = 2;
  int l = 0;
  int s = 0;
  Rat gamma = Rat(1, 4);
  bool strict_mode = false;

  int N() const { return l * s; }
  int part_of(int v) const { return v / s; }
  int label_of(int v) const { return v % s + 1; }
};

inline std::vector<std::string> validate_partite_spec(const PartiteSpec& spec) {
  std::vector<std::string> warnings;
  if (spec.r < 1) throw config_error("partite: r must be >= 1");
  if (spec.s < 1) throw config_error("partite: s must be >= 1");
  if (spec.gamma <= 0 || spec.gamma > 1)
    throw config_error("partite: gamma must lie in (0, 1]");
  long long fact = 1;
  for (int i = 2; i <= spec.r + 1; ++i) fact *= i;
  if (spec.strict_mode) {
    if (spec.l != 4 * fact) throw config_error("partite: strict mode needs l = 4 (r+1)!");
    if (spec.gamma > Rat(1, 2)) throw config_error("partite: strict mode needs gamma <= 1/2");
    if (spec.gamma * spec.s < Rat(10) * spec.l * spec.l)
      warnings.push_back("below the s >= 10 l^2 / gamma regime; constants are not guaranteed");
  } else {
    if (spec.l < spec.r + 3) throw config_error("partite: need l >= r+3");
    warnings.push_back("relaxed mode: structural identities only");
  }
  return warnings;
}

inline PartitionType type_of(const std::vector<int>& e, const PartiteSpec& spec) {
  std::vector<int> cnt(spec.l, 0);
  for (int v : e) {
    if (v < 0 || v >= spec.N()) throw config_error("vertex out of range");
    ++cnt[spec.part_of(v)];
  }
  std::vector<int> nz;
  for (int c : cnt)
    if (c > 0) nz.push_back(c);
  return PartitionType(nz);
}

// Admitted edge class of a weight index x: the single-part class bumps to a
// single part of size r+1, every other x gains two singleton parts.
inline PartitionType x_plus(const PartitionType& x, int r) {
  if (x.length() == 1 && x.parts[0] == r - 1) return PartitionType({r + 1});
  auto p = x.parts;
  p.push_back(1);
  p.push_back(1);
  return PartitionType(p);
}

inline long long window_width(const Rat& alpha, int s) {
  Rat w = alpha * s;
  if (w < 0) return 0;
  return floor_rat(w).convert_to<long long>();
}

inline bool alpha_good_sum(long long label_sum, const Rat& alpha, int s) {
  long long w = window_width(alpha, s);
  long long v = ((label_sum % s) + s) % s;
  return 1 <= v && v <= w;
}

// A tuple of vertices is good when its label sum mod s falls in {1..floor(alpha s)}.
inline bool alpha_good(const std::vector<int>& tuple, const Rat& alpha, const PartiteSpec& spec) {
  long long sum = 0;
  for (int v : tuple) sum += spec.label_of(v);
  return alpha_good_sum(sum, alpha, spec.s);
}

using WeightVector = std::map<PartitionType, Rat>;

// Prototype (r-1)-set of weight class x: parts 0..|x|-1 with labels 1..x_i.
inline std::vector<int> prototype_of(const PartitionType& x, const PartiteSpec& spec) {
  std::vector<int> A;
  for (int i = 0; i < x.length(); ++i)
    for (int j = 1; j <= x.parts[i]; ++j) A.push_back(i * spec.s + (j - 1));
  return A;
}

namespace detail {

// Number of unordered vertex pairs {u, u'} (u = u' allowed: the degree is
// taken in the multiset closure of the family) whose union with `base`
// forms a good tuple of an admitted class. Part multiplicities count
// repeats, matching how types are read off multisets.
inline long long good_completion_pairs(const std::vector<int>& base, const WeightVector& admitted,
                                       const PartiteSpec& spec) {
  std::vector<int> cnt(spec.l, 0);
  long long base_sum = 0;
  for (int v : base) {
    ++cnt[spec.part_of(v)];
    base_sum += spec.label_of(v);
  }
  int V = spec.N();
  long long out = 0;
  for (int u = 0; u < V; ++u) {
    for (int up = u; up < V; ++up) {
      ++cnt[spec.part_of(u)];
      ++cnt[spec.part_of(up)];
      std::vector<int> nz;
      for (int c : cnt)
        if (c > 0) nz.push_back(c);
      PartitionType t(nz);
      auto it = admitted.find(t);
      if (it != admitted.end() &&
          alpha_good_sum(base_sum + spec.label_of(u) + spec.label_of(up), it->second, spec.s))
        ++out;
      --cnt[spec.part_of(u)];
      --cnt[spec.part_of(up)];
    }
  }
  return out;
}

}  // namespace detail

// Weight assignment: alpha_{(r-1)} = 2 gamma; two-part classes get
// gamma / C(l-2, 2); longer classes absorb the exact residual -- gamma s^2
// minus what the already-assigned classes contribute to the class
// prototype's degree -- spread over C(l-|x|, 2). Residuals are exact
// rationals; a negative residual is an error (the guarantee only covers the
// strict regime).
inline WeightVector build_weights(const PartiteSpec& spec) {
  validate_partite_spec(spec);
  WeightVector alphas;
  WeightVector admitted;  // x_plus class -> alpha, for residual enumeration
  auto assign = [&](const PartitionType& x, const Rat& a) {
    alphas[x] = a;
    admitted[x_plus(x, spec.r)] = a;
  };
  for (const auto& x : partitions_of(spec.r - 1)) {
    int j = x.length();
    if (j == 1) {
      assign(x, Rat(2) * spec.gamma);
    } else if (j == 2) {
      assign(x, spec.gamma / Rat(binom(spec.l - 2, 2)));
    } else {
      long long contrib = detail::good_completion_pairs(prototype_of(x, spec), admitted, spec);
      Rat gamma_x = spec.gamma - Rat(contrib, static_cast<long long>(spec.s) * spec.s);
      if (gamma_x < 0)
        throw check_failure("build_weights: negative residual at class " + x.str());
      assign(x, gamma_x / Rat(binom(spec.l - j, 2)));
    }
  }
  return alphas;
}

struct AbstractDegree {
  long long value = 0;
  bool exact = true;
};

// Degree of the class prototype: pairs completing it to a good admitted
// tuple, counted exactly by enumeration when the pair budget allows and by
// the window-density formula otherwise (flagged).
inline AbstractDegree abstract_degree(const PartitionType& x, const WeightVector& weights,
                                      const PartiteSpec& spec, long long budget = kDefaultBudget) {
  if (x.total() != spec.r - 1) throw config_error("abstract_degree: x must partition r-1");
  WeightVector admitted;
  for (const auto& [y, a] : weights) admitted[x_plus(y, spec.r)] = a;
  AbstractDegree out;
  long long V = spec.N();
  if (V * (V + 1) / 2 <= budget) {
    out.value = detail::good_completion_pairs(prototype_of(x, spec), admitted, spec);
    return out;
  }
  // Approximation: each placement class contributes (pair placements) x
  // (window fraction of label pairs).
  out.exact = false;
  std::vector<int> cnt(spec.l, 0);
  auto proto = prototype_of(x, spec);
  for (int v : proto) ++cnt[spec.part_of(v)];
  Rat acc = 0;
  for (int pu = 0; pu < spec.l; ++pu) {
    for (int pup = pu; pup < spec.l; ++pup) {
      ++cnt[pu];
      ++cnt[pup];
      std::vector<int> nz;
      for (int c : cnt)
        if (c > 0) nz.push_back(c);
      auto it = admitted.find(PartitionType(nz));
      if (it != admitted.end()) {
        long long label_pairs = pu == pup
                                    ? static_cast<long long>(spec.s) * (spec.s + 1) / 2
                                    : static_cast<long long>(spec.s) * spec.s;
        acc += Rat(window_width(it->second, spec.s), spec.s) * label_pairs;
      }
      --cnt[pu];
      --cnt[pup];
    }
  }
  out.value = floor_rat(acc + Rat(1, 2)).convert_to<long long>();
  return out;
}

// ----- the generator-backed family -----

// Edges are the good tuples of the admitted classes. Everything is computed
// per class: membership is a type lookup plus a window test, counting uses a
// label subset-sum table, and enumeration walks placements x label choices.
struct PartiteFamily {
  PartiteSpec spec;
  WeightVector weights;             // x -> alpha_x (classes of P_{r-1})
  std::map<PartitionType, Rat> admitted;  // x_plus -> alpha

  PartiteFamily(PartiteSpec sp, WeightVector w) : spec(std::move(sp)), weights(std::move(w)) {
    for (const auto& [x, a] : weights) admitted[x_plus(x, spec.r)] = a;
  }

  int uniformity() const { return spec.r + 1; }

  bool contains(const std::vector<int>& e) const {
    if (static_cast<int>(e.size()) != uniformity()) return false;
    {
      auto srt = e;
      std::sort(srt.begin(), srt.end());
      if (std::adjacent_find(srt.begin(), srt.end()) != srt.end()) return false;
    }
    auto it = admitted.find(type_of(e, spec));
    if (it == admitted.end()) return false;
    return alpha_good(e, it->second, spec);
  }

  // #j-subsets of {1..s} with label sum congruent to c, for j = 0..jmax.
  // table[j][c].
  std::vector<std::vector<Int>> label_sum_table(int jmax) const {
    std::vector<std::vector<Int>> f(jmax + 1, std::vector<Int>(spec.s, 0));
    f[0][0] = 1;
    for (int lab = 1; lab <= spec.s; ++lab)
      for (int j = std::min(jmax, lab); j >= 1; --j)
        for (int c = 0; c < spec.s; ++c)
          if (f[j - 1][c] != 0) f[j][(c + lab) % spec.s] += f[j - 1][c];
    return f;
  }

  // distinct part placements of a class (equal sizes are interchangeable)
  static Int placement_count(const PartitionType& t, int l) {
    Int ways = falling(l, t.length());
    std::map<int, int> mult;
    for (int v : t.parts) ++mult[v];
    for (const auto& [_, m] : mult)
      for (int i = 2; i <= m; ++i) ways /= i;
    return ways;
  }

  // label choices for one placement of class t: product of per-part subset
  // counts, summed over the residue window
  Int window_label_count(const PartitionType& t, const Rat& alpha) const {
    auto table = label_sum_table(uniformity());
    std::vector<Int> conv(spec.s, 0);
    conv[0] = 1;
    for (int sz : t.parts) {
      std::vector<Int> nxt(spec.s, 0);
      for (int c = 0; c < spec.s; ++c)
        if (conv[c] != 0)
          for (int d = 0; d < spec.s; ++d)
            if (table[sz][d] != 0) nxt[(c + d) % spec.s] += conv[c] * table[sz][d];
      conv = nxt;
    }
    Int out = 0;
    long long w = window_width(alpha, spec.s);
    for (long long c = 1; c <= w; ++c) out += conv[c % spec.s];
    return out;
  }

  long long edge_count() const {
    Int total = 0;
    for (const auto& [t, alpha] : admitted)
      total += placement_count(t, spec.l) * window_label_count(t, alpha);
    return total.convert_to<long long>();
  }

  // Visit every edge (sorted vertex vectors).
  template <typename F>
  void for_each_edge(F&& visit) const {
    for (const auto& [t, alpha] : admitted) {
      if (window_width(alpha, spec.s) == 0) continue;
      // group equal sizes; choose parts per group, ascending inside a group
      std::vector<std::pair<int, int>> groups;  // (size, count)
      for (int v : t.parts) {
        if (!groups.empty() && groups.back().first == v)
          ++groups.back().second;
        else
          groups.emplace_back(v, 1);
      }
      std::vector<int> assigned;  // part of each component, in t order
      std::vector<char> used(spec.l, 0);
      auto place = [&](auto&& self, size_t g) -> void {
        if (g == groups.size()) {
          enumerate_labels(t, alpha, assigned, visit);
          return;
        }
        auto [sz, cnt] = groups[g];
        std::vector<int> avail;
        for (int p = 0; p < spec.l; ++p)
          if (!used[p]) avail.push_back(p);
        for_each_subset(static_cast<int>(avail.size()), cnt, [&](const std::vector<int>& idx) {
          for (int q : idx) used[avail[q]] = 1;
          for (int q : idx) assigned.push_back(avail[q]);
          self(self, g + 1);
          for (int q = 0; q < cnt; ++q) assigned.pop_back();
          for (int q : idx) used[avail[q]] = 0;
        });
      };
      place(place, 0);
    }
  }

  Hypergraph materialize(long long budget = kDefaultBudget) const {
    if (edge_count() > budget) throw budget_error("partite: edge count exceeds budget");
    Hypergraph H;
    H.N = spec.N();
    H.k = uniformity();
    H.edges.reserve(static_cast<size_t>(edge_count()));
    for_each_edge([&](const std::vector<int>& e) { H.edges.push_back(e); });
    for (auto& f : H.edges) std::sort(f.begin(), f.end());
    return H;
  }

  // Edges containing every vertex of A, computed per class: compatible
  // placements of the class over A's parts, then label completions with the
  // right residue, counted from per-part tables over the unused labels.
  long long degree(const std::vector<int>& A) const {
    std::vector<int> acnt(spec.l, 0);
    std::vector<std::vector<char>> used(spec.l, std::vector<char>(spec.s + 1, 0));
    long long asum = 0;
    for (int v : A) {
      int p = spec.part_of(v), lab = spec.label_of(v);
      if (used[p][lab]) throw config_error("degree: repeated vertex");
      used[p][lab] = 1;
      ++acnt[p];
      asum += lab;
    }
    Int total = 0;
    for (const auto& [t, alpha] : admitted) {
      long long w = window_width(alpha, spec.s);
      if (w == 0) continue;
      if (t.total() < static_cast<int>(A.size())) continue;
      // assign components (t order) to distinct parts covering all parts
      // with acnt > 0
      std::vector<int> comp = t.parts;
      std::vector<char> taken(spec.l, 0);
      std::vector<int> parts_hit;
      for (int p = 0; p < spec.l; ++p)
        if (acnt[p] > 0) parts_hit.push_back(p);
      std::vector<std::pair<int, int>> chosen;  // (part, component size)
      auto rec = [&](auto&& self, size_t ci) -> void {
        if (ci == comp.size()) {
          for (int p : parts_hit)
            if (!taken[p]) return;  // an occupied part missed every component
          // per-part completion counts over unused labels, convolved
          std::vector<Int> conv(spec.s, 0);
          conv[0] = 1;
          for (auto [p, sz] : chosen) {
            int need = sz - acnt[p];
            std::vector<std::vector<Int>> f(need + 1, std::vector<Int>(spec.s, 0));
            f[0][0] = 1;
            for (int lab = 1; lab <= spec.s; ++lab) {
              if (used[p][lab]) continue;
              for (int j = need; j >= 1; --j)
                for (int c = 0; c < spec.s; ++c)
                  if (f[j - 1][c] != 0) f[j][(c + lab) % spec.s] += f[j - 1][c];
            }
            std::vector<Int> nxt(spec.s, 0);
            for (int c = 0; c < spec.s; ++c)
              if (conv[c] != 0)
                for (int d = 0; d < spec.s; ++d)
                  if (f[need][d] != 0) nxt[(c + d) % spec.s] += conv[c] * f[need][d];
            conv = nxt;
          }
          for (long long c = 1; c <= w; ++c) {
            long long res = ((c - asum) % spec.s + spec.s) % spec.s;
            total += conv[res];
          }
          return;
        }
        // skip duplicate component sizes in the same recursion depth pattern:
        // enforce ascending part index among equal sizes
        int prev_part = -1;
        if (ci > 0 && comp[ci - 1] == comp[ci]) prev_part = chosen[ci - 1].first;
        for (int p = 0; p < spec.l; ++p) {
          if (taken[p] || p <= prev_part) continue;
          if (acnt[p] > comp[ci]) continue;
          taken[p] = 1;
          chosen.emplace_back(p, comp[ci]);
          self(self, ci + 1);
          chosen.pop_back();
          taken[p] = 0;
        }
      };
      rec(rec, 0);
    }
    return total.convert_to<long long>();
  }

 private:
  template <typename F>
  void enumerate_labels(const PartitionType& t, const Rat& alpha, const std::vector<int>& parts,
                        F&& visit) const {
    long long w = window_width(alpha, spec.s);
    std::vector<std::vector<int>> picks(t.length());
    std::vector<int> edge;
    auto rec = [&](auto&& self, int ci, long long sum) -> void {
      if (ci == t.length()) {
        long long v = ((sum % spec.s) + spec.s) % spec.s;
        if (1 <= v && v <= w) visit(static_cast<const std::vector<int>&>(edge));
        return;
      }
      for_each_subset(spec.s, t.parts[ci], [&](const std::vector<int>& idx) {
        long long add = 0;
        for (int q : idx) add += q + 1;  // labels are 1-based
        size_t base = edge.size();
        for (int q : idx) edge.push_back(parts[ci] * spec.s + q);
        self(self, ci + 1, sum + add);
        edge.resize(base);
      });
    };
    rec(rec, 0, 0);
  }
};

inline PartiteFamily build_partite(const PartiteSpec& spec, const WeightVector& weights) {
  validate_partite_spec(spec);
  for (const auto& [x, a] : weights) {
    if (x.total() != spec.r - 1) throw config_error("weights must be indexed by classes of r-1");
    if (a < 0 || a > 1) throw config_error("weights must lie in [0, 1]");
  }
  return PartiteFamily(spec, weights);
}

// ----- small fixed constructions -----

// r = 1: a cycle on the first n vertices, n isolated vertices alongside.
// r = 2: two disjoint copies of the 3-progression family on a prime n.
// r = 3: three parts of size n; all 4-sets with two vertices in each of two
// parts.
inline Hypergraph simple_construction(int r, int n) {
  Hypergraph H;
  switch (r) {
    case 1: {
      if (n < 3) throw config_error("simple_construction: need n >= 3");
      H.N = 2 * n;
      H.k = 2;
      for (int i = 0; i < n; ++i) {
        std::vector<int> e = {i, (i + 1) % n};
        std::sort(e.begin(), e.end());
        H.edges.push_back(e);
      }
      return H;
    }
    case 2: {
      Hypergraph base = build_kap(n, 3);
      H.N = 2 * n;
      H.k = 3;
      for (const auto& f : base.edges) {
        H.edges.push_back(f);
        std::vector<int> g = f;
        for (auto& v : g) v += n;
        H.edges.push_back(g);
      }
      return H;
    }
    case 3: {
      if (n < 2) throw config_error("simple_construction: need n >= 2");
      H.N = 3 * n;
      H.k = 4;
      for (int p1 = 0; p1 < 3; ++p1)
        for (int p2 = p1 + 1; p2 < 3; ++p2)
          for_each_subset(n, 2, [&](const std::vector<int>& a) {
            for_each_subset(n, 2, [&](const std::vector<int>& b) {
              std::vector<int> e = {p1 * n + a[0], p1 * n + a[1], p2 * n + b[0], p2 * n + b[1]};
              H.edges.push_back(e);
            });
          });
      return H;
    }
    default:
      throw config_error("simple_construction: r must be 1, 2, or 3");
  }
}

// ----- the part-bias polynomial Q(x) = sum_e (1+2x)^{e_1} (1-x)^{e_2+e_3} -----

// Coefficients c_0..c_{degree} by direct enumeration over an explicit edge
// list; parts are read off vertex indices via the spec.
inline std::vector<Int> q_coefficients(const Hypergraph& H, const PartiteSpec& spec) {
  int deg = H.k;
  std::vector<Int> c(deg + 1, 0);
  for (const auto& f : H.edges) {
    int e1 = 0, e23 = 0;
    for (int v : f) {
      int p = spec.part_of(v);
      if (p == 0) ++e1;
      else if (p == 1 || p == 2) ++e23;
    }
    // expand (1+2x)^{e1} (1-x)^{e23}
    std::vector<Int> poly = {1};
    for (int i = 0; i < e1; ++i) {
      std::vector<Int> nxt(poly.size() + 1, 0);
      for (size_t d = 0; d < poly.size(); ++d) {
        nxt[d] += poly[d];
        nxt[d + 1] += 2 * poly[d];
      }
      poly = nxt;
    }
    for (int i = 0; i < e23; ++i) {
      std::vector<Int> nxt(poly.size() + 1, 0);
      for (size_t d = 0; d < poly.size(); ++d) {
        nxt[d] += poly[d];
        nxt[d + 1] -= poly[d];
      }
      poly = nxt;
    }
    for (size_t d = 0; d < poly.size() && d < c.size(); ++d) c[d] += poly[d];
  }
  return c;
}

// Closed form for the generator: every placement of a class shares a label
// count, so Q factors into (label count) x (polynomial sum over placements).
// The placement sum runs over component->{part1, part2, part3, elsewhere}
// maps; permutations of equal-size components are quotiented out.
inline std::vector<Int> q_coefficients(const PartiteFamily& F) {
  const auto& spec = F.spec;
  int deg = F.uniformity();
  std::vector<Rat> acc(deg + 1, Rat(0));
  for (const auto& [t, alpha] : F.admitted) {
    Int labels = F.window_label_count(t, alpha);
    if (labels == 0) continue;
    int p = t.length();
    // polynomial sum over injective index assignments, divided by the
    // multiplicities of equal sizes
    std::vector<Rat> polysum(deg + 1, Rat(0));
    std::vector<int> slot(p, 3);  // 0,1,2 = special parts; 3 = elsewhere
    auto rec = [&](auto&& self, int ci, bool used0, bool used1, bool used2) -> void {
      if (ci == p) {
        int others = 0, e1 = 0, e23 = 0;
        for (int i = 0; i < p; ++i) {
          if (slot[i] == 3) ++others;
          else if (slot[i] == 0) e1 += t.parts[i];
          else e23 += t.parts[i];
        }
        if (others > spec.l - 3) return;
        Int mult = falling(spec.l - 3, others);
        std::vector<Int> poly = {1};
        for (int i = 0; i < e1; ++i) {
          std::vector<Int> nxt(poly.size() + 1, 0);
          for (size_t d = 0; d < poly.size(); ++d) {
            nxt[d] += poly[d];
            nxt[d + 1] += 2 * poly[d];
          }
          poly = nxt;
        }
        for (int i = 0; i < e23; ++i) {
          std::vector<Int> nxt(poly.size() + 1, 0);
          for (size_t d = 0; d < poly.size(); ++d) {
            nxt[d] += poly[d];
            nxt[d + 1] -= poly[d];
          }
          poly = nxt;
        }
        for (size_t d = 0; d < poly.size() && d <= static_cast<size_t>(deg); ++d)
          polysum[d] += Rat(mult * poly[d]);
        return;
      }
      for (int sl = 0; sl < 4; ++sl) {
        if (sl == 0 && used0) continue;
        if (sl == 1 && used1) continue;
        if (sl == 2 && used2) continue;
        slot[ci] = sl;
        self(self, ci + 1, used0 || sl == 0, used1 || sl == 1, used2 || sl == 2);
      }
      slot[ci] = 3;
    };
    rec(rec, 0, false, false, false);
    std::map<int, int> mult;
    for (int v : t.parts) ++mult[v];
    Rat denom = 1;
    for (const auto& [_, m] : mult)
      for (int i = 2; i <= m; ++i) denom *= i;
    for (int d = 0; d <= deg; ++d) acc[d] += Rat(labels) * polysum[d] / denom;
  }
  std::vector<Int> out(deg + 1, 0);
  for (int d = 0; d <= deg; ++d) {
    if (denominator(acc[d]) != 1)
      throw check_failure("q_coefficients: non-integer coefficient");
    out[d] = numerator(acc[d]);
  }
  return out;
}

// ----- niceness report -----

struct NicenessReport {
  Rat eta = 0;           // measured eta_{r-1}
  Rat density = 0;       // h / C(N, r+1)
  long long delta_r = 0; // max r-set degree
  Int c_r = 0;
  bool near_regular_ok = false;   // (i) eta <= threshold
  bool density_ok = false;        // (ii) density in [gamma/l^2, 3 gamma/l^2]
  bool max_degree_ok = false;     // (iii) delta_r <= gamma N
  bool coefficient_ok = false;    // (iv) c_r >= gamma N^{r+1} / l^{r+1}
  bool strict_regime = false;     // s >= 10 l^2 / gamma held
};

inline NicenessReport niceness_check(const Hypergraph& H, const PartiteSpec& spec,
                                     const Rat& eta_threshold = Rat(1, 10),
                                     long long budget = kDefaultBudget) {
  if (H.k != spec.r + 1) throw config_error("niceness: H must be (r+1)-uniform");
  NicenessReport rep;
  auto below = regularity_report(H, spec.r - 1, budget);
  rep.eta = below.eta;
  rep.near_regular_ok = below.exact && rep.eta <= eta_threshold;
  Int nsets = binom(H.N, H.k);
  rep.density = nsets == 0 ? Rat(0) : Rat(Int(H.h()), nsets);
  Rat l2(static_cast<long long>(spec.l) * spec.l);
  rep.density_ok = rep.density >= spec.gamma / l2 && rep.density <= Rat(3) * spec.gamma / l2;
  auto at_r = regularity_report(H, spec.r, budget);
  rep.delta_r = at_r.max_degree;
  rep.max_degree_ok = Rat(rep.delta_r) <= spec.gamma * spec.N();
  auto c = q_coefficients(H, spec);
  rep.c_r = c.at(spec.r);
  Rat rhs = spec.gamma;
  for (int i = 0; i < spec.r + 1; ++i) rhs *= Rat(spec.N(), spec.l);
  rep.coefficient_ok = Rat(rep.c_r) >= rhs;
  rep.strict_regime = spec.gamma * spec.s >= Rat(10) * spec.l * spec.l;
  return rep;
}

// ----- uneven-occupancy event machinery -----

// Deterministic occupancy targets: part 1 overloaded by (1+2 eps), parts 2
// and 3 (when present) underloaded by (1-eps), remaining parts all at a
// common value n0. Rounding is half-up; if the remainder doesn't split
// evenly over the tail parts, n3 then n2 are nudged by at most 1.
inline std::vector<int> occupancies_for(const PartiteSpec& spec, int m, const Rat& eps) {
  if (m < 0 || m > spec.N()) throw config_error("occupancy: m out of range");
  if (spec.l < 2) throw config_error("occupancy: need at least 2 parts");
  auto rhu = [](const Rat& x) {
    return floor_rat(x + Rat(1, 2)).convert_to<long long>();
  };
  Rat base = Rat(m, spec.l);
  long long n1 = rhu((Rat(1) + 2 * eps) * base);
  int specials = std::min(spec.l, 3);
  long long n2 = specials >= 2 ? rhu((Rat(1) - eps) * base) : 0;
  long long n3 = specials >= 3 ? rhu((Rat(1) - eps) * base) : 0;
  int tail = spec.l - specials;
  auto feasible = [&](long long a, long long b, long long c, long long n0) {
    auto in = [&](long long x) { return x >= 0 && x <= spec.s; };
    return in(a) && in(b) && (specials < 3 || in(c)) && (tail == 0 || in(n0));
  };
  for (long long d2 : {0, 1, -1}) {
    for (long long d3 : {0, 1, -1}) {
      if (specials < 3 && d3 != 0) continue;
      long long a = n1, b = n2 + d2, c = specials >= 3 ? n3 + d3 : 0;
      long long rem = m - a - b - c;
      if (tail == 0) {
        if (rem != 0) continue;
        if (!feasible(a, b, c, 0)) continue;
        std::vector<int> occ = {static_cast<int>(a)};
        if (specials >= 2) occ.push_back(static_cast<int>(b));
        if (specials >= 3) occ.push_back(static_cast<int>(c));
        return occ;
      }
      if (rem < 0 || rem % tail != 0) continue;
      long long n0 = rem / tail;
      if (!feasible(a, b, c, n0)) continue;
      std::vector<int> occ = {static_cast<int>(a), static_cast<int>(b)};
      if (specials >= 3) occ.push_back(static_cast<int>(c));
      for (int i = 0; i < tail; ++i) occ.push_back(static_cast<int>(n0));
      return occ;
    }
  }
  throw config_error("occupancy: infeasible for these parameters");
}

// Exact probability that a uniform m-subset realizes the occupancy vector.
inline Rat occupancy_probability_exact(const PartiteSpec& spec, int m, const Rat& eps) {
  auto occ = occupancies_for(spec, m, eps);
  Int num = 1;
  for (int b : occ) num *= binom(spec.s, b);
  return Rat(num, binom(spec.N(), m));
}

// Log-scale entropy estimate s (H((1+2e)t) + 2 H((1-e)t) - 3 H(t)) with
// t = m/N; the gap to the exact log is polylogarithmic in N.
inline double occupancy_probability_entropy(const PartiteSpec& spec, int m, double eps) {
  auto H2 = [](double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
  };
  double t = static_cast<double>(m) / spec.N();
  return spec.s * (H2((1 + 2 * eps) * t) + 2 * H2((1 - eps) * t) - 3 * H2(t));
}

// E[induced count | per-part occupancies] = sum_e prod_i C(b_i, e_i) / C(s, e_i),
// exact.
inline Rat conditional_expectation(const Hypergraph& H, const PartiteSpec& spec,
                                   const std::vector<int>& occupancies) {
  if (static_cast<int>(occupancies.size()) != spec.l)
    throw config_error("conditional_expectation: need one occupancy per part");
  for (int b : occupancies)
    if (b < 0 || b > spec.s) throw config_error("conditional_expectation: occupancy out of range");
  Rat total = 0;
  std::vector<int> cnt(spec.l, 0);
  for (const auto& f : H.edges) {
    std::fill(cnt.begin(), cnt.end(), 0);
    for (int v : f) ++cnt[spec.part_of(v)];
    Rat term = 1;
    for (int i = 0; i < spec.l && term != 0; ++i) {
      if (cnt[i] == 0) continue;
      term *= Rat(binom(occupancies[i], cnt[i]), binom(spec.s, cnt[i]));
    }
    total += term;
  }
  return total;
}

}  // namespace hyperdev
