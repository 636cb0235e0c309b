#pragma once

// Exact counts of marked vertices (by rank, subtree size, or both) over all
// trees of each size, from a root-rank dynamic programme and the linear ODEs
// y' = m*y + P that arise when the root is removed.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "onetwo/egf_series.hpp"
#include "onetwo/rational.hpp"
#include "onetwo/variety.hpp"

namespace onetwo {

/// t[k][i]: trees on [i] whose root has rank exactly k, 1 <= i <= max_n.
struct RootRankTable {
  TreeVariety variety = TreeVariety::NonPlane;
  std::size_t max_n = 0;
  std::vector<std::vector<Integer>> t;  // [k][i], k < max(max_n, 1)

  /// Zero outside the stored range (t[k][i] = 0 for k >= i).
  Integer at(std::size_t k, std::size_t i) const {
    if (k >= t.size() || i >= t[k].size()) return 0;
    return t[k][i];
  }

  Integer row_total(std::size_t i) const {
    Integer s = 0;
    for (std::size_t k = 0; k < t.size(); ++k) s += at(k, i);
    return s;
  }

  /// R_k(z) = sum_i t[k][i] z^i / i!
  EgfSeries series(std::size_t k, std::size_t order) const {
    if (order > max_n) throw std::invalid_argument("root-rank table is shorter than the series order");
    std::vector<Integer> counts(order + 1, 0);
    for (std::size_t i = 1; i <= order; ++i) counts[i] = at(k, i);
    return EgfSeries::from_counts(counts);
  }
};

/// Splits the i-1 non-root labels between one child (one subtree) or two
/// children (ordered label split C(i-1, j), ranks with minimum k-1). NonPlane
/// halves the ordered two-child count: sibling label sets differ, so each
/// unordered pair is seen exactly twice. Suffix sums S[k][j] = sum_{k'>=k}
/// t[k'][j] turn the min-convolution into two products.
inline RootRankTable root_rank_counts(TreeVariety variety, std::size_t max_n) {
  if (max_n < 1) throw std::invalid_argument("max_n must be at least 1");
  RootRankTable table{variety, max_n,
                      std::vector<std::vector<Integer>>(max_n, std::vector<Integer>(max_n + 1, 0))};
  auto& t = table.t;
  std::vector<std::vector<Integer>> suffix(max_n + 1, std::vector<Integer>(max_n + 1, 0));
  const BinomialTable binom(max_n);
  auto refresh_suffix = [&](std::size_t i) {
    Integer acc = 0;
    for (std::size_t k = max_n; k-- > 0;) {
      acc += t[k][i];
      suffix[k][i] = acc;
    }
  };
  t[0][1] = 1;
  refresh_suffix(1);
  for (std::size_t i = 2; i <= max_n; ++i) {
    for (std::size_t k = 1; k < i; ++k) {
      Integer two = 0;
      for (std::size_t j = 1; j + 1 < i; ++j) {
        const std::size_t other = i - 1 - j;
        two += binom(i - 1, j) * (suffix[k - 1][j] * suffix[k - 1][other] -
                                  suffix[k][j] * suffix[k][other]);
      }
      if (variety == TreeVariety::NonPlane) {
        if (mpz_odd_p(two.get_mpz_t())) throw std::logic_error("odd ordered two-child count");
        two /= 2;
      }
      t[k][i] = t[k - 1][i - 1] + two;
    }
    refresh_suffix(i);
  }
  return table;
}

/// Totals over all trees of each size n = 0..N for one vertex selector.
struct CountSequences {
  TreeVariety variety = TreeVariety::NonPlane;
  std::string selector;
  std::vector<Integer> counts;       // [n]
  std::vector<Integer> tree_counts;  // [n]
  /// counts[n] / (n * tree_counts[n]); absent at n = 0.
  std::vector<std::optional<Rational>> probs;

  std::size_t order() const { return counts.size() - 1; }

  /// counts[n] / ((n+1) * tree_counts[n]); same limit, faster convergence.
  Rational prob_shifted(std::size_t n) const {
    Rational q(counts.at(n), tree_counts.at(n) * static_cast<unsigned long>(n + 1));
    q.canonicalize();
    return q;
  }

  /// Columns n,count,prob_numerator,prob_denominator,prob_decimal.
  std::string to_csv(int decimal_places = 12) const {
    std::ostringstream out;
    out << "n,count,prob_numerator,prob_denominator,prob_decimal\n";
    for (std::size_t n = 0; n < counts.size(); ++n) {
      out << n << ',' << counts[n] << ',';
      if (probs[n])
        out << probs[n]->get_num() << ',' << probs[n]->get_den() << ','
            << to_fixed(*probs[n], decimal_places);
      else
        out << ",,";
      out << '\n';
    }
    return out.str();
  }
};

/// Shared state for many count queries at one variety and order: the base
/// series, the marked-tree multiplier, and the root-rank table.
class CountingContext {
 public:
  CountingContext(TreeVariety variety, std::size_t order)
      : variety_(variety),
        order_(order),
        multiplier_(marked_multiplier(variety, order)),
        tree_counts_(base_series(variety, order).counts()),
        table_(root_rank_counts(variety, std::max<std::size_t>(order, 1))) {}

  CountingContext(RootRankTable table, std::size_t order)
      : variety_(table.variety),
        order_(order),
        multiplier_(marked_multiplier(table.variety, order)),
        tree_counts_(base_series(table.variety, order).counts()),
        table_(std::move(table)) {
    if (table_.max_n < order) throw std::invalid_argument("root-rank table shorter than order");
  }

  TreeVariety variety() const { return variety_; }
  std::size_t order() const { return order_; }
  const RootRankTable& table() const { return table_; }
  const std::vector<Integer>& tree_counts() const { return tree_counts_; }

  /// Solves y' = m*y + correction, y(0) = 0, and packages n!*y_n.
  CountSequences solve(const EgfSeries& correction, std::string selector) const {
    EgfSeries y = solve_linear_ode(multiplier_, correction, 0, order_);
    CountSequences out{variety_, std::move(selector), y.counts(), tree_counts_, {}};
    out.probs.resize(order_ + 1);
    for (std::size_t n = 1; n <= order_; ++n) {
      Rational q(out.counts[n], tree_counts_[n] * static_cast<unsigned long>(n));
      q.canonicalize();
      out.probs[n] = q;
    }
    return out;
  }

  /// Rank-k vertices. The marked vertex either is the root (R_k') or lies in
  /// the subtree left after removing the root (m*y); the cases are disjoint.
  CountSequences rank(long k) const {
    if (k < 0) throw std::invalid_argument("rank must be nonnegative");
    EgfSeries correction = order_ == 0 ? EgfSeries(0)
                                       : table_.series(static_cast<std::size_t>(k), order_).derivative();
    return solve(correction, "rank k=" + std::to_string(k));
  }

  /// Vertices whose subtree has r vertices: correction count_r z^{r-1}/(r-1)!.
  CountSequences size(long r) const {
    if (r < 1) throw std::invalid_argument("subtree size must be at least 1");
    const auto ur = static_cast<std::size_t>(r);
    Integer count_r = ur < tree_counts_.size() ? tree_counts_[ur]
                                               : base_series(variety_, ur).counts().back();
    return solve(polynomial_correction(count_r, ur), "size r=" + std::to_string(r));
  }

  /// Rank-k vertices with subtree size i: correction t[k][i] z^{i-1}/(i-1)!.
  CountSequences joint(long k, long i) const {
    if (k < 0 || i < 1) throw std::invalid_argument("need k >= 0 and i >= 1");
    Integer c = table_.at(static_cast<std::size_t>(k), static_cast<std::size_t>(i));
    return solve(polynomial_correction(c, static_cast<std::size_t>(i)),
                 "joint k=" + std::to_string(k) + " i=" + std::to_string(i));
  }

 private:
  EgfSeries polynomial_correction(const Integer& c, std::size_t size) const {
    const std::size_t corr_order = order_ == 0 ? 0 : order_ - 1;
    return EgfSeries::monomial(Rational(c), size - 1, corr_order);
  }

  TreeVariety variety_;
  std::size_t order_;
  EgfSeries multiplier_;
  std::vector<Integer> tree_counts_;
  RootRankTable table_;
};

inline CountSequences rank_vertex_counts(TreeVariety variety, long k, std::size_t order) {
  return CountingContext(variety, order).rank(k);
}

inline CountSequences size_vertex_counts(TreeVariety variety, long r, std::size_t order) {
  return CountingContext(variety, order).size(r);
}

inline CountSequences joint_vertex_counts(TreeVariety variety, long k, long i, std::size_t order) {
  return CountingContext(variety, order).joint(k, i);
}

}  // namespace onetwo
