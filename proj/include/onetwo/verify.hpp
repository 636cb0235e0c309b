#pragma once

// Cross-module verification suite: every exact pipeline checked against the
// brute-force census, the closed forms, and the counting identities.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

#include "onetwo/asymptotics.hpp"
#include "onetwo/egf_series.hpp"
#include "onetwo/number_field.hpp"
#include "onetwo/rank_counts.hpp"
#include "onetwo/tree_enum.hpp"

namespace onetwo {

struct VerifyConfig {
  int enum_limit = 10;
  std::size_t series_order = 80;
  std::size_t bound_r = 12;
  unsigned threads = 1;
  /// Test hook applied to each root-rank table before it is used.
  std::function<void(RootRankTable&)> corrupt_table;
};

struct VerifyCheck {
  std::string name;   // "<module>: <what>"
  std::string claim;  // the mathematical statement being checked
  bool passed = false;
  std::string detail;
};

struct VerifyResult {
  std::vector<VerifyCheck> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
  std::vector<VerifyCheck> failures() const {
    std::vector<VerifyCheck> out;
    std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
                 [](const auto& c) { return !c.passed; });
    return out;
  }
};

namespace detail {

class Recorder {
 public:
  explicit Recorder(VerifyResult& r) : r_(r) {}
  void operator()(std::string name, std::string claim, bool ok, std::string detail = "") {
    r_.checks.push_back({std::move(name), std::move(claim), ok, std::move(detail)});
  }

 private:
  VerifyResult& r_;
};

inline Integer u64(std::uint64_t x) { return Integer(static_cast<unsigned long>(x)); }

// Census aggregates at size n against the ODE/DP counts.
inline void compare_census(const Census& c, const CountingContext& ctx, Recorder& rec) {
  const int n = c.n;
  const auto un = static_cast<std::size_t>(n);
  const std::string tag = std::string(variety_name(c.variety)) + " n=" + std::to_string(n);
  std::string rank_bad, size_bad, joint_bad, root_bad;
  auto note = [](std::string& where, const std::string& what) { where += (where.empty() ? "" : ", ") + what; };
  for (int k = 0; k < n; ++k) {
    const std::string ks = "k=" + std::to_string(k);
    if (ctx.rank(k).counts[un] != u64(c.rank_totals[k])) note(rank_bad, ks);
    if (ctx.table().at(static_cast<std::size_t>(k), un) != u64(c.root_rank_counts[k])) note(root_bad, ks);
    for (int i = 1; i <= n; ++i)
      if (ctx.joint(k, i).counts[un] != u64(c.joint_totals[k][i])) note(joint_bad, ks + ",i=" + std::to_string(i));
  }
  for (int r = 1; r <= n; ++r)
    if (ctx.size(r).counts[un] != u64(c.size_totals[r])) note(size_bad, "r=" + std::to_string(r));
  rec("rank_counts: rank totals match census " + tag, "rank-k vertex counts from the linear ODE",
      rank_bad.empty(), rank_bad);
  rec("rank_counts: size totals match census " + tag, "subtree-size vertex counts from the linear ODE",
      size_bad.empty(), size_bad);
  rec("rank_counts: joint totals match census " + tag, "rank-and-size vertex counts from the linear ODE",
      joint_bad.empty(), joint_bad);
  rec("root_rank_counts: root ranks match census " + tag, "root-rank dynamic programme", root_bad.empty(),
      root_bad);
  const Integer trees = ctx.tree_counts()[un];
  const Integer leaves = ctx.rank(0).counts[un];
  rec("rank_counts: leaf total matches census " + tag, "leaves = rank-0 vertices",
      leaves == u64(c.leaf_total));
  rec("rank_counts: one-child total matches census " + tag,
      "one-child vertices = (n+1) * trees - 2 * leaves",
      trees * (n + 1) - 2 * leaves == u64(c.one_child_total));
}

}  // namespace detail

inline VerifyResult run_verification(const VerifyConfig& cfg) {
  VerifyResult result;
  detail::Recorder rec(result);
  const std::size_t order = std::max<std::size_t>(cfg.series_order, static_cast<std::size_t>(cfg.enum_limit));
  const EnumOptions opt{cfg.enum_limit, cfg.threads};

  for (TreeVariety v : {TreeVariety::NonPlane, TreeVariety::Plane}) {
    const std::string vn(variety_name(v));
    RootRankTable table = root_rank_counts(v, order);
    if (cfg.corrupt_table) cfg.corrupt_table(table);
    const CountingContext ctx(table, order);
    const CountingContext small(table, static_cast<std::size_t>(std::max(cfg.enum_limit, 1)));
    const auto trees = ctx.tree_counts();

    // Brute force against series and DP.
    for (int n = 1; n <= cfg.enum_limit; ++n) {
      const Census c = census(v, n, opt);
      const std::string tag = vn + " n=" + std::to_string(n);
      rec("tree_enum: tree count equals base series " + tag, "n! [z^n] base series counts trees",
          detail::u64(c.tree_count) == trees[static_cast<std::size_t>(n)]);
      auto bad = c.identity_violations();
      rec("tree_enum: census identities " + tag, "census aggregates are mutually consistent",
          bad.empty(), bad.empty() ? "" : bad.front());
      detail::compare_census(c, small, rec);
    }

    // Identities at full order.
    bool rows_ok = true;
    std::string bad_row;
    for (std::size_t i = 1; i <= order; ++i)
      if (table.row_total(i) != trees[i]) {
        rows_ok = false;
        bad_row = "i=" + std::to_string(i);
        break;
      }
    rec("root_rank_counts: row sums equal tree counts " + vn, "every root has exactly one rank",
        rows_ok, bad_row);

    const EgfSeries base = base_series(v, order - 1);
    const EgfSeries z = EgfSeries::monomial(1, 1, order - 1);
    const EgfSeries z2 = EgfSeries::monomial(1, 2, order - 1);  // z^2/2
    EgfSeries expected_r1 = v == TreeVariety::NonPlane
                                ? z * base - z2
                                : Rational(2) * z * (base - EgfSeries::constant(1, order - 1)) + z -
                                      Rational(2) * z2;
    rec("root_rank_counts: R_1' closed form " + vn,
        v == TreeVariety::NonPlane ? "R_1' = zE - z^2/2" : "R_1' = 2z(B-1) + z - z^2",
        table.series(1, order).derivative() == expected_r1);

    if (v == TreeVariety::NonPlane) {
      const auto euler = base_series(v, order).counts();
      const auto leaves = ctx.rank(0).counts;
      bool ok = true;
      for (std::size_t n = 0; n + 1 <= order; ++n)
        ok = ok && leaves[n] == Integer(n + 1) * euler[n] - euler[n + 1];
      rec("rank_counts: leaf identity", "A_{0,n} = (n+1) E_n - E_{n+1}", ok);
    }

    // Limits.
    const LimitEngine engine(table, std::max<std::size_t>(cfg.bound_r, 1));
    for (int k : {0, 1}) {
      const ExactConst exact = limit_rank_fraction(v, k);
      const Rational finite = ctx.rank(k).prob_shifted(order);
      const Enclosure e = ec_eval(exact, 30);
      const Rational lo_gap = abs(e.lo - finite), hi_gap = abs(e.hi - finite);
      const Rational gap = std::max(lo_gap, hi_gap);
      rec("asymptotics: a_" + std::to_string(k) + " anchor " + vn,
          "closed-form rank fraction matches the finite-n probability", gap < Rational(1, 1000),
          "limit " + format_decimal(exact, 12));
    }
    rec("asymptotics: a_0 equals v_1 " + vn, "leaf <=> subtree of size one",
        limit_rank_fraction(v, 0) == engine.subtree_prob(1));

    bool sums_ok = true;
    for (std::size_t i = 1; i <= engine.max_size(); ++i) {
      ExactConst s;
      for (std::size_t k = 0; k < i; ++k) s += engine.joint_prob(k, i);
      sums_ok = sums_ok && s == engine.subtree_prob(i);
    }
    rec("asymptotics: sum_k w_{k,i} = v_i " + vn, "joint limits partition the size limits", sums_ok);

    bool nested = true, contains = true;
    for (std::size_t k = 0; k <= 4; ++k) {
      BoundReport prev;
      for (std::size_t r = 1; r <= cfg.bound_r; ++r) {
        BoundReport cur = bound_interval(engine, k, r, 20);
        // lower grows by w_{k,r} >= 0, upper shrinks by v_r - w_{k,r} >= 0
        if (r > 1)
          nested = nested && ec_eval(cur.lower - prev.lower, 20).lo >= 0 &&
                   ec_eval(prev.upper - cur.upper, 20).lo >= 0;
        if (k <= 1) {
          const Enclosure a = ec_eval(limit_rank_fraction(v, static_cast<int>(k)), 20);
          contains = contains && cur.lower_enc.lo <= a.hi && a.lo <= cur.upper_enc.hi;
        }
        prev = std::move(cur);
      }
    }
    rec("asymptotics: brackets nested " + vn, "bounds tighten as r grows", nested);
    rec("asymptotics: brackets contain a_0, a_1 " + vn, "lower <= a_k <= upper", contains);
  }

  // Inequalities need both varieties at each n.
  for (int n = 1; n <= cfg.enum_limit; ++n) {
    const Census np = census(TreeVariety::NonPlane, n, opt);
    const Census pl = census(TreeVariety::Plane, n, opt);
    for (TreeVariety v : {TreeVariety::NonPlane, TreeVariety::Plane}) {
      const auto rep = check_inequalities(v, np, pl);
      for (const auto& c : rep.checks)
        rec("tree_enum: " + c.name + " " + std::string(variety_name(v)) + " n=" + std::to_string(n),
            c.name, c.passed, c.detail);
    }
  }
  return result;
}

}  // namespace onetwo
