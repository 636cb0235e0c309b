#pragma once

// Exhaustive generation of labeled increasing 1-2 trees, per-vertex
// statistics, and the aggregate census used as an oracle for the counting
// and limit machinery.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "onetwo/egf_series.hpp"
#include "onetwo/number_field.hpp"
#include "onetwo/rational.hpp"
#include "onetwo/variety.hpp"

namespace onetwo {

/// Tree on labels 1..n; every child carries a smaller label than its parent,
/// so the root is n. parent[v] == 0 marks the root. position[v] is 0 for the
/// first (left) child and 1 for the second; NonPlane trees put the child
/// holding the smaller minimum label first.
struct LabeledTree {
  TreeVariety variety = TreeVariety::NonPlane;
  std::vector<int> parent;           // index 0 unused
  std::vector<std::uint8_t> position;

  int size() const { return static_cast<int>(parent.size()) - 1; }

  /// children[v] in stored order
  std::vector<std::vector<int>> children() const {
    std::vector<std::vector<int>> out(parent.size());
    for (int v = 1; v <= size(); ++v)
      if (parent[v] != 0) out[parent[v]].push_back(v);
    for (auto& c : out)
      std::sort(c.begin(), c.end(), [&](int a, int b) { return position[a] < position[b]; });
    return out;
  }

  /// Nested-parentheses dump, children in stored order: "4(3(1)(2))".
  std::string to_string() const {
    const auto kids = children();
    std::function<void(int, std::string&)> emit = [&](int v, std::string& out) {
      out += std::to_string(v);
      for (int c : kids[v]) {
        out += '(';
        emit(c, out);
        out += ')';
      }
    };
    std::string out;
    if (size() > 0) emit(size(), out);
    return out;
  }
};

/// Thrown when a requested size is beyond the configured enumeration limit.
class EnumerationLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct EnumOptions {
  int limit = 10;
  unsigned threads = 1;
};

namespace detail {

struct PendingSubtree {
  std::uint32_t labels;  // bitmask, bit v-1 set for label v
  int parent;
  std::uint8_t position;
};

inline int top_label(std::uint32_t labels) { return 32 - std::countl_zero(labels); }

// Depth-first expansion: each pending label set becomes a subtree rooted at
// its largest label; every split choice is a branch.
template <typename Visit>
void expand(std::vector<PendingSubtree>& pending, LabeledTree& tree, Visit& visit) {
  if (pending.empty()) {
    visit(static_cast<const LabeledTree&>(tree));
    return;
  }
  const PendingSubtree task = pending.back();
  pending.pop_back();
  const int root = top_label(task.labels);
  tree.parent[root] = task.parent;
  tree.position[root] = task.position;
  const std::uint32_t rest = task.labels & ~(1u << (root - 1));
  if (rest == 0) {
    expand(pending, tree, visit);
  } else {
    pending.push_back({rest, root, 0});
    expand(pending, tree, visit);
    pending.pop_back();
    if (std::popcount(rest) >= 2) {
      const std::uint32_t lowest = rest & (~rest + 1);
      for (std::uint32_t first = (rest - 1) & rest; first != 0; first = (first - 1) & rest) {
        if (tree.variety == TreeVariety::NonPlane && (first & lowest) == 0) continue;
        pending.push_back({rest ^ first, root, 1});
        pending.push_back({first, root, 0});
        expand(pending, tree, visit);
        pending.pop_back();
        pending.pop_back();
      }
    }
  }
  pending.push_back(task);
}

// Independent starting states below the root n, one per child arrangement of
// the root. Used to shard enumeration across workers.
inline std::vector<std::vector<PendingSubtree>> root_choices(TreeVariety variety, int n) {
  std::vector<std::vector<PendingSubtree>> out;
  const std::uint32_t rest = (n >= 2) ? ((1u << (n - 1)) - 1) : 0u;
  if (rest == 0) {
    out.push_back({});
    return out;
  }
  out.push_back({{rest, n, 0}});
  if (std::popcount(rest) >= 2) {
    for (std::uint32_t first = (rest - 1) & rest; first != 0; first = (first - 1) & rest) {
      if (variety == TreeVariety::NonPlane && (first & 1u) == 0) continue;
      out.push_back({{rest ^ first, n, 1}, {first, n, 0}});
    }
  }
  return out;
}

inline void require_enumerable(TreeVariety variety, int n, int limit) {
  if (n < 1) throw std::invalid_argument("tree size must be at least 1");
  if (n > limit || n > 31) {
    std::string estimate = base_series(variety, static_cast<std::size_t>(n)).counts().back().get_str();
    throw EnumerationLimit("size " + std::to_string(n) + " exceeds the enumeration limit " +
                           std::to_string(limit) + " (would generate " + estimate + " trees)");
  }
}

}  // namespace detail

/// Streams every tree of size n to `visit` exactly once, in a deterministic
/// order. Trees are reused between calls; copy if you keep them.
template <typename Visit>
void enumerate(TreeVariety variety, int n, Visit&& visit, int limit = EnumOptions{}.limit) {
  detail::require_enumerable(variety, n, limit);
  LabeledTree tree{variety, std::vector<int>(static_cast<std::size_t>(n) + 1, 0),
                   std::vector<std::uint8_t>(static_cast<std::size_t>(n) + 1, 0)};
  for (auto& start : detail::root_choices(variety, n)) {
    tree.parent[n] = 0;
    tree.position[n] = 0;
    detail::expand(start, tree, visit);
  }
}

/// Per-vertex view of one tree: child count, subtree size, rank.
struct TreeStats {
  std::vector<int> child_count;
  std::vector<int> subtree_size;
  std::vector<int> rank;
};

/// Ranks come from a breadth-first search down to the nearest descendant
/// leaf; the recursive characterisation is asserted against it.
inline TreeStats tree_stats(const LabeledTree& tree) {
  const int n = tree.size();
  TreeStats s{std::vector<int>(n + 1, 0), std::vector<int>(n + 1, 1), std::vector<int>(n + 1, 0)};
  std::vector<std::vector<int>> kids(n + 1);
  for (int v = 1; v <= n; ++v)
    if (tree.parent[v] != 0) kids[tree.parent[v]].push_back(v);
  // Children carry smaller labels, so ascending order is a post-order.
  for (int v = 1; v <= n; ++v) {
    s.child_count[v] = static_cast<int>(kids[v].size());
    if (s.child_count[v] > 2) throw std::logic_error("vertex with more than two children");
    for (int c : kids[v]) s.subtree_size[v] += s.subtree_size[c];
  }
  std::vector<std::pair<int, int>> queue;
  for (int v = 1; v <= n; ++v) {
    queue.assign(1, {v, 0});
    for (std::size_t head = 0; head < queue.size(); ++head) {
      auto [u, d] = queue[head];
      if (kids[u].empty()) {
        s.rank[v] = d;
        break;
      }
      for (int c : kids[u]) queue.emplace_back(c, d + 1);
    }
  }
  for (int v = 1; v <= n; ++v) {
    const auto& k = kids[v];
    bool ok = (s.rank[v] == 0) == (s.subtree_size[v] == 1);
    if (k.size() == 1) ok = ok && s.rank[v] == 1 + s.rank[k[0]];
    if (k.size() == 2) ok = ok && s.rank[v] == 1 + std::min(s.rank[k[0]], s.rank[k[1]]);
    if (!ok) throw std::logic_error("rank recursion violated at vertex " + std::to_string(v));
  }
  return s;
}

/// Exact aggregates over all trees of one size. Totals count (vertex, tree)
/// pairs unless stated otherwise.
struct Census {
  TreeVariety variety = TreeVariety::NonPlane;
  int n = 0;
  std::uint64_t tree_count = 0;
  std::vector<std::uint64_t> rank_totals;                  // [k], 0 <= k < n
  std::vector<std::uint64_t> size_totals;                  // [r], 1 <= r <= n
  std::vector<std::vector<std::uint64_t>> joint_totals;    // [k][r]
  std::vector<std::uint64_t> root_rank_counts;             // trees by root rank
  std::uint64_t leaf_total = 0;
  std::uint64_t one_child_total = 0;
  std::uint64_t two_child_total = 0;
  std::uint64_t root_one_child_trees = 0;                  // trees whose root has one child
  std::vector<std::uint64_t> one_child_histogram;          // trees by one-child vertex count

  Census() = default;
  Census(TreeVariety v, int size)
      : variety(v),
        n(size),
        rank_totals(size, 0),
        size_totals(size + 1, 0),
        joint_totals(size, std::vector<std::uint64_t>(size + 1, 0)),
        root_rank_counts(size, 0),
        one_child_histogram(size, 0) {}

  void add(const LabeledTree& tree) {
    const TreeStats s = tree_stats(tree);
    ++tree_count;
    int one_child = 0;
    for (int v = 1; v <= n; ++v) {
      ++rank_totals[s.rank[v]];
      ++size_totals[s.subtree_size[v]];
      ++joint_totals[s.rank[v]][s.subtree_size[v]];
      switch (s.child_count[v]) {
        case 0: ++leaf_total; break;
        case 1: ++one_child_total; ++one_child; break;
        default: ++two_child_total; break;
      }
    }
    ++root_rank_counts[s.rank[n]];
    if (s.child_count[n] == 1) ++root_one_child_trees;
    ++one_child_histogram[one_child];
  }

  void merge(const Census& o) {
    if (o.variety != variety || o.n != n) throw std::invalid_argument("merging unlike censuses");
    auto sum = [](auto& a, const auto& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    tree_count += o.tree_count;
    sum(rank_totals, o.rank_totals);
    sum(size_totals, o.size_totals);
    for (std::size_t k = 0; k < joint_totals.size(); ++k) sum(joint_totals[k], o.joint_totals[k]);
    sum(root_rank_counts, o.root_rank_counts);
    leaf_total += o.leaf_total;
    one_child_total += o.one_child_total;
    two_child_total += o.two_child_total;
    root_one_child_trees += o.root_one_child_trees;
    sum(one_child_histogram, o.one_child_histogram);
  }

  Integer vertex_pairs() const { return Integer(static_cast<unsigned long>(tree_count)) * n; }

  /// V_{n,r}, a_{n,k}, W_{n,r} for rank k: share of (vertex, tree) pairs.
  Rational size_prob(int r) const { return share(size_totals.at(r)); }
  Rational rank_prob(int k) const { return share(rank_totals.at(k)); }
  Rational joint_prob(int k, int r) const { return share(joint_totals.at(k).at(r)); }
  /// Same counts normalised by (n+1) * tree_count.
  Rational rank_prob_shifted(int k) const {
    Rational q(Integer(static_cast<unsigned long>(rank_totals.at(k))),
               Integer(static_cast<unsigned long>(tree_count)) * (n + 1));
    q.canonicalize();
    return q;
  }

  /// Violations of the internal counting identities (empty when consistent).
  std::vector<std::string> identity_violations() const {
    std::vector<std::string> bad;
    std::uint64_t pairs = tree_count * static_cast<std::uint64_t>(n);
    std::uint64_t rk = 0, sz = 0;
    for (auto x : rank_totals) rk += x;
    for (auto x : size_totals) sz += x;
    if (rk != pairs || sz != pairs) bad.push_back("rank/size totals do not sum to n * tree_count");
    if (rank_totals[0] != size_totals[1] || rank_totals[0] != leaf_total)
      bad.push_back("leaves, rank-0 vertices and size-1 subtrees disagree");
    for (int k = 0; k < n; ++k) {
      std::uint64_t s = 0;
      for (int r = 1; r <= n; ++r) s += joint_totals[k][r];
      if (s != rank_totals[k]) bad.push_back("joint row " + std::to_string(k) + " != rank total");
    }
    for (int r = 1; r <= n; ++r) {
      std::uint64_t s = 0;
      for (int k = 0; k < n; ++k) s += joint_totals[k][r];
      if (s != size_totals[r]) bad.push_back("joint column " + std::to_string(r) + " != size total");
    }
    if (leaf_total != two_child_total + tree_count)
      bad.push_back("leaves != two-child vertices + trees");
    return bad;
  }

 private:
  Rational share(std::uint64_t c) const {
    Rational q(Integer(static_cast<unsigned long>(c)), vertex_pairs());
    q.canonicalize();
    return q;
  }
};

/// Full census of size n. With threads > 1 the root's child arrangements
/// are sharded round-robin across workers and merged; the result does not
/// depend on the thread count.
inline Census census(TreeVariety variety, int n, const EnumOptions& opt = {}) {
  detail::require_enumerable(variety, n, opt.limit);
  auto choices = detail::root_choices(variety, n);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(choices.size())));
  std::vector<Census> partial(workers, Census(variety, n));
  auto run = [&](unsigned w) {
    LabeledTree tree{variety, std::vector<int>(static_cast<std::size_t>(n) + 1, 0),
                     std::vector<std::uint8_t>(static_cast<std::size_t>(n) + 1, 0)};
    auto visit = [&](const LabeledTree& t) { partial[w].add(t); };
    for (std::size_t c = w; c < choices.size(); c += workers) {
      auto start = choices[c];
      detail::expand(start, tree, visit);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  Census total(variety, n);
  for (const auto& p : partial) total.merge(p);
  return total;
}

// ---------------------------------------------------------------------------
// One-child statistics across the two varieties.

/// Plane multiplicity of a NonPlane tree with s one-child vertices:
/// 2^{(n-1-s)/2}, one factor of two per two-child vertex.
inline Integer plane_multiplicity(int n, int one_child) {
  if ((n - 1 - one_child) % 2 != 0 || one_child > n - 1)
    throw std::logic_error("n - 1 - s must be a nonnegative even number");
  return pow_integer(2, static_cast<unsigned long>((n - 1 - one_child) / 2));
}

/// sum over NonPlane trees of 2^{(n-1-s_i)/2}; counts plane trees.
inline Integer plane_multiplicity_total(const Census& nonplane) {
  Integer total = 0;
  for (int s = 0; s < nonplane.n; ++s)
    if (nonplane.one_child_histogram[s] != 0)
      total += plane_multiplicity(nonplane.n, s) *
               static_cast<unsigned long>(nonplane.one_child_histogram[s]);
  return total;
}

/// m_n from the NonPlane census weighted by plane multiplicities.
inline Rational weighted_onechild_mean(const Census& nonplane) {
  if (nonplane.variety != TreeVariety::NonPlane)
    throw std::invalid_argument("weighted mean needs a NonPlane census");
  Integer num = 0;
  for (int s = 0; s < nonplane.n; ++s)
    if (nonplane.one_child_histogram[s] != 0)
      num += plane_multiplicity(nonplane.n, s) * s *
             static_cast<unsigned long>(nonplane.one_child_histogram[s]);
  Rational q(num, plane_multiplicity_total(nonplane));
  q.canonicalize();
  return q;
}

inline Rational weighted_onechild_mean(int n, const EnumOptions& opt = {}) {
  return weighted_onechild_mean(census(TreeVariety::NonPlane, n, opt));
}

inline Rational one_child_mean(const Census& c) {
  Rational q(Integer(static_cast<unsigned long>(c.one_child_total)),
             Integer(static_cast<unsigned long>(c.tree_count)));
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// Probabilistic inequalities that hold for every n.

struct InequalityCheck {
  std::string name;
  int n = 0;
  bool passed = false;
  std::string detail;
};

struct InequalityReport {
  TreeVariety variety = TreeVariety::NonPlane;
  int n = 0;
  std::vector<InequalityCheck> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
  std::vector<InequalityCheck> failures() const {
    std::vector<InequalityCheck> out;
    for (const auto& c : checks)
      if (!c.passed) out.push_back(c);
    return out;
  }
};

/// Outcome of comparing enclosures: hi(lhs) <= lo(rhs) proves lhs <= rhs.
enum class Decision { Holds, Violated, Undecided };

/// E(sqrt Z_n) <= 100 - 90/sqrt(n), decided with widening enclosures.
inline Decision sqrt_size_bound(const Census& c, unsigned max_bits = 4096) {
  for (unsigned long bits = 64; bits <= max_bits; bits *= 2) {
    RationalInterval lhs = RationalInterval::point(0);
    for (int r = 1; r <= c.n; ++r)
      if (c.size_totals[r] != 0)
        lhs = lhs + Rational(Integer(static_cast<unsigned long>(c.size_totals[r]))) *
                        sqrt_enclosure(r, bits);
    lhs = Rational(1 / Rational(c.vertex_pairs())) * lhs;
    RationalInterval rhs =
        RationalInterval::point(100) - Rational(90) * reciprocal(sqrt_enclosure(c.n, bits));
    if (lhs.hi <= rhs.lo) return Decision::Holds;
    if (lhs.lo > rhs.hi) return Decision::Violated;
  }
  return Decision::Undecided;
}

/// Checks every inequality at one n. `nonplane` and `plane` must be censuses
/// of the same size; `variety` selects whose per-variety checks run. The
/// one-child comparison between the varieties is always included.
inline InequalityReport check_inequalities(TreeVariety variety, const Census& nonplane,
                                           const Census& plane, int markov_cap = 10) {
  if (nonplane.n != plane.n || nonplane.variety != TreeVariety::NonPlane ||
      plane.variety != TreeVariety::Plane)
    throw std::invalid_argument("check_inequalities needs NonPlane and Plane censuses of equal size");
  const Census& c = variety == TreeVariety::NonPlane ? nonplane : plane;
  const int n = c.n;
  const Integer trees(static_cast<unsigned long>(c.tree_count));
  InequalityReport rep{variety, n, {}};
  auto add = [&](std::string name, bool ok, std::string detail) {
    rep.checks.push_back({std::move(name), n, ok, std::move(detail)});
  };

  add("expected leaves >= n/4", Integer(static_cast<unsigned long>(c.leaf_total)) * 4 >= trees * n,
      "leaves " + std::to_string(c.leaf_total) + " over " + trees.get_str() + " trees");
  add("expected one-child vertices <= n/2",
      Integer(static_cast<unsigned long>(c.one_child_total)) * 2 <= trees * n,
      "one-child " + std::to_string(c.one_child_total) + " over " + trees.get_str() + " trees");

  const Decision sq = sqrt_size_bound(c);
  add("E(sqrt Z_n) <= 100 - 90/sqrt(n)", sq == Decision::Holds,
      sq == Decision::Undecided ? "enclosures did not separate" : "");

  for (int cc = 1; cc <= markov_cap; ++cc) {
    const long threshold = 10000L * cc * cc;
    Integer above = 0;
    for (int r = 1; r <= n; ++r)
      if (r > threshold) above += static_cast<unsigned long>(c.size_totals[r]);
    if (above * cc > c.vertex_pairs()) {
      add("Pr(Z_n > 10000 C^2) <= 1/C", false, "C = " + std::to_string(cc));
      break;
    }
    if (cc == markov_cap) add("Pr(Z_n > 10000 C^2) <= 1/C", true, "C <= " + std::to_string(markov_cap));
  }

  if (variety == TreeVariety::NonPlane && n >= 2) {
    const auto euler = base_series(TreeVariety::NonPlane, static_cast<std::size_t>(n)).counts();
    Rational p_n(Integer(static_cast<unsigned long>(c.root_one_child_trees)), trees);
    p_n.canonicalize();
    Rational ratio(euler[n - 1], euler[n]);
    ratio.canonicalize();
    add("root one-child probability p_n = E_{n-1}/E_n", p_n == ratio, "p_n = " + p_n.get_str());
    if (n >= 3) {
      Rational prev(euler[n - 2], euler[n - 1]);
      prev.canonicalize();
      add("p_n <= 1/2", p_n <= Rational(1, 2), "p_n = " + p_n.get_str());
      add("p_n < p_{n-1}", p_n < prev, p_n.get_str() + " vs " + prev.get_str());
    }
  }

  const Rational big_m = one_child_mean(nonplane);
  const Rational small_m = one_child_mean(plane);
  add("m_n <= M_n (plane one-child mean <= non-plane)", small_m <= big_m,
      small_m.get_str() + " vs " + big_m.get_str());
  add("weighted one-child mean equals plane mean", weighted_onechild_mean(nonplane) == small_m, "");
  add("plane multiplicities sum to plane tree count",
      plane_multiplicity_total(nonplane) == Integer(static_cast<unsigned long>(plane.tree_count)), "");
  return rep;
}

inline InequalityReport check_inequalities(TreeVariety variety, int n, const EnumOptions& opt = {}) {
  return check_inequalities(variety, census(TreeVariety::NonPlane, n, opt),
                            census(TreeVariety::Plane, n, opt));
}

}  // namespace onetwo
