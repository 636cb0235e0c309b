// Command-line front end: counts, enumerate, limits, bounds, verify.
//
// Exit codes: 0 success, 1 verification or internal failure, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "onetwo/asymptotics.hpp"
#include "onetwo/rank_counts.hpp"
#include "onetwo/tree_enum.hpp"
#include "onetwo/verify.hpp"

namespace {

using namespace onetwo;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct RunConfig {
  std::string variety = "nonplane";
  std::string kind;
  long k = 0;
  long r = 12;
  long i = 1;
  long n = 4;
  long n_max = -1;
  long order = 80;
  int enum_limit = 10;
  int digits = 12;
  std::string format = "table";
  unsigned threads = 0;
  bool corrupt_table = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

TreeVariety variety_of(const RunConfig& cfg) {
  auto v = parse_variety(cfg.variety);
  if (!v) throw UsageError("unknown variety '" + cfg.variety + "' (expected nonplane or plane)");
  return *v;
}

unsigned thread_count(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("ONETWO_THREADS")) {
    try {
      long t = std::stol(env);
      if (t > 0) return static_cast<unsigned>(t);
    } catch (const std::exception&) {
    }
    throw UsageError("ONETWO_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

std::string approx(const ExactConst& x, int digits) {
  return x.to_string() + " ≈ " + format_decimal(x, digits);
}

int cmd_counts(const RunConfig& cfg) {
  const TreeVariety v = variety_of(cfg);
  const std::string kind = cfg.kind.empty() ? "rank" : cfg.kind;
  const long n_max = cfg.n_max >= 0 ? cfg.n_max : cfg.order;
  require(n_max >= 1, "--n-max must be at least 1");
  require(cfg.format != "json" || kind != "root", "root tables support table and csv output");
  const auto order = static_cast<std::size_t>(n_max);

  if (kind == "root") {
    RootRankTable t = root_rank_counts(v, order);
    std::cout << (cfg.format == "csv" ? "i,k,count\n" : "");
    for (std::size_t i = 1; i <= order; ++i)
      for (std::size_t k = 0; k < i; ++k) {
        if (cfg.format == "csv")
          std::cout << i << ',' << k << ',' << t.at(k, i) << '\n';
        else
          std::cout << "i=" << i << " k=" << k << " t=" << t.at(k, i) << '\n';
      }
    return kOk;
  }

  CountingContext ctx(v, order);
  CountSequences seq;
  if (kind == "rank") {
    require(cfg.k >= 0, "--k must be nonnegative");
    seq = ctx.rank(cfg.k);
  } else if (kind == "size") {
    require(cfg.r >= 1, "--r must be at least 1");
    seq = ctx.size(cfg.r);
  } else if (kind == "joint") {
    require(cfg.k >= 0 && cfg.i >= 1, "--k must be nonnegative and --i at least 1");
    seq = ctx.joint(cfg.k, cfg.i);
  } else {
    throw UsageError("unknown --kind '" + kind + "' (rank, size, joint, root)");
  }

  if (cfg.format == "csv") {
    std::cout << seq.to_csv(cfg.digits);
  } else if (cfg.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t n = 0; n <= seq.order(); ++n) {
      nlohmann::json row{{"n", n}, {"count", seq.counts[n].get_str()}};
      if (seq.probs[n]) row["prob"] = seq.probs[n]->get_str();
      rows.push_back(std::move(row));
    }
    std::cout << nlohmann::json{{"variety", std::string(variety_name(v))},
                                {"selector", seq.selector},
                                {"rows", rows}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << variety_name(v) << ' ' << seq.selector << '\n';
    for (std::size_t n = 0; n <= seq.order(); ++n) {
      std::cout << "n=" << n << " count=" << seq.counts[n];
      if (seq.probs[n]) std::cout << " prob=" << to_fixed(*seq.probs[n], cfg.digits);
      std::cout << '\n';
    }
  }
  return kOk;
}

void print_bounds(const BoundReport& rep, const RunConfig& cfg) {
  if (cfg.format == "json") {
    std::cout << to_json(rep, cfg.digits).dump(2) << '\n';
    return;
  }
  std::cout << variety_name(rep.variety) << " k=" << rep.k << " r=" << rep.r << '\n'
            << "lower: " << approx(rep.lower, cfg.digits) << '\n'
            << "upper: " << approx(rep.upper, cfg.digits) << '\n'
            << "v partial sum: " << approx(rep.partial_v_sum, cfg.digits) << '\n';
}

int cmd_bounds(const RunConfig& cfg) {
  const TreeVariety v = variety_of(cfg);
  require(cfg.k >= 0, "--k must be nonnegative");
  require(cfg.r >= 1, "--r must be at least 1");
  require(cfg.format != "csv", "bounds support table and json output");
  print_bounds(bound_interval(v, static_cast<std::size_t>(cfg.k), static_cast<std::size_t>(cfg.r), cfg.digits),
               cfg);
  return kOk;
}

int cmd_limits(const RunConfig& cfg) {
  const TreeVariety v = variety_of(cfg);
  const std::string kind = cfg.kind.empty() ? "rank" : cfg.kind;
  ExactConst value;
  if (kind == "rank") {
    require(cfg.k >= 0, "--k must be nonnegative");
    if (cfg.k >= 2) {
      std::cerr << "rank " << cfg.k << " has no closed form; reporting the bracket for r=" << cfg.r << '\n';
      RunConfig b = cfg;
      return cmd_bounds(b);
    }
    value = limit_rank_fraction(v, static_cast<int>(cfg.k));
  } else if (kind == "v") {
    require(cfg.r >= 1, "--r must be at least 1");
    value = limit_subtree_prob(v, static_cast<std::size_t>(cfg.r));
  } else if (kind == "w") {
    require(cfg.k >= 0 && cfg.i >= 1, "--k must be nonnegative and --i at least 1");
    value = limit_joint_prob(v, static_cast<std::size_t>(cfg.k), static_cast<std::size_t>(cfg.i));
  } else {
    throw UsageError("unknown --kind '" + kind + "' (rank, v, w)");
  }
  if (cfg.format == "json")
    std::cout << nlohmann::json{{"exact", value.to_string()}, {"decimal", format_decimal(value, cfg.digits)}}
                     .dump(2)
              << '\n';
  else
    std::cout << approx(value, cfg.digits) << '\n';
  return kOk;
}

int cmd_enumerate(const RunConfig& cfg) {
  const TreeVariety v = variety_of(cfg);
  require(cfg.n >= 1, "--n must be at least 1");
  if (cfg.n > cfg.enum_limit) {
    try {
      enumerate(v, static_cast<int>(cfg.n), [](const LabeledTree&) {}, cfg.enum_limit);
    } catch (const EnumerationLimit& e) {
      throw UsageError(e.what());
    }
  }
  enumerate(v, static_cast<int>(cfg.n), [](const LabeledTree& t) { std::cout << t.to_string() << '\n'; },
            cfg.enum_limit);
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  require(cfg.enum_limit >= 1 && cfg.enum_limit <= 12, "--enum-limit must be in 1..12");
  require(cfg.order >= 2, "--order must be at least 2");
  require(cfg.r >= 1, "--r must be at least 1");
  VerifyConfig vc;
  vc.enum_limit = cfg.enum_limit;
  vc.series_order = static_cast<std::size_t>(cfg.order);
  vc.bound_r = static_cast<std::size_t>(cfg.r);
  vc.threads = thread_count(cfg);
  if (cfg.corrupt_table)
    vc.corrupt_table = [](RootRankTable& t) { t.t.at(1).at(4) += 1; };
  const VerifyResult res = run_verification(vc);
  if (cfg.format == "json") {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : res.checks)
      checks.push_back({{"name", c.name}, {"claim", c.claim}, {"passed", c.passed}, {"detail", c.detail}});
    std::cout << nlohmann::json{{"ok", res.ok()}, {"checks", checks}}.dump(2) << '\n';
  } else {
    for (const auto& c : res.failures())
      std::cout << "FAIL " << c.name << " [" << c.claim << "]" << (c.detail.empty() ? "" : " " + c.detail)
                << '\n';
    std::cout << res.checks.size() - res.failures().size() << '/' << res.checks.size() << " checks passed\n";
  }
  return res.ok() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact rank statistics of random labeled 1-2 trees"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--variety", cfg.variety, "nonplane or plane")->capture_default_str();
    sub->add_option("--digits", cfg.digits, "decimal places")->capture_default_str()->check(CLI::Range(1, 200));
    sub->add_option("--format", cfg.format, "table, json or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"table", "json", "csv"}));
    sub->add_option("--threads", cfg.threads, "worker threads (default: ONETWO_THREADS or all cores)");
  };

  auto* counts = app.add_subcommand("counts", "exact vertex counts for every n up to --n-max");
  common(counts);
  counts->add_option("--kind", cfg.kind, "rank, size, joint or root");
  counts->add_option("--k", cfg.k, "rank");
  counts->add_option("--r", cfg.r, "subtree size");
  counts->add_option("--i", cfg.i, "subtree size for joint counts");
  counts->add_option("--n-max", cfg.n_max, "largest tree size (default: --order)");
  counts->add_option("--order", cfg.order, "series truncation order")->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "certified bracket for the limiting rank-k fraction");
  common(bounds);
  bounds->add_option("--k", cfg.k, "rank")->capture_default_str();
  bounds->add_option("--r", cfg.r, "number of subtree sizes summed")->capture_default_str();

  auto* limits = app.add_subcommand("limits", "exact limits a_0, a_1, v_r, w_{k,i}");
  common(limits);
  limits->add_option("--kind", cfg.kind, "rank, v or w");
  limits->add_option("--k", cfg.k, "rank");
  limits->add_option("--r", cfg.r, "subtree size (v) or bracket truncation");
  limits->add_option("--i", cfg.i, "subtree size (w)");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "print every tree of size --n, one per line");
  common(enumerate_cmd);
  enumerate_cmd->add_option("--n", cfg.n, "tree size")->capture_default_str();
  enumerate_cmd->add_option("--enum-limit", cfg.enum_limit, "largest size allowed")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run the cross-check suite");
  common(verify);
  verify->add_option("--enum-limit", cfg.enum_limit, "largest enumerated size")->capture_default_str();
  verify->add_option("--order", cfg.order, "series truncation order")->capture_default_str();
  verify->add_option("--r", cfg.r, "largest bracket truncation")->capture_default_str();
  verify->add_flag("--corrupt-table", cfg.corrupt_table, "test hook: perturb the root-rank table")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*counts) return cmd_counts(cfg);
    if (*bounds) return cmd_bounds(cfg);
    if (*limits) return cmd_limits(cfg);
    if (*enumerate_cmd) return cmd_enumerate(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for more information.\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
