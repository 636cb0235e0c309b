#include <gtest/gtest.h>

#include "onetwo/verify.hpp"

using namespace onetwo;

TEST(Verify, DefaultSuitePasses) {
  const VerifyResult res = run_verification({});
  for (const auto& f : res.failures()) ADD_FAILURE() << f.name << ": " << f.detail;
  EXPECT_TRUE(res.ok());
  EXPECT_GT(res.checks.size(), 100u);
}

TEST(Verify, SmallEnumerationLimitStillPasses) {
  VerifyConfig cfg;
  cfg.enum_limit = 4;
  cfg.series_order = 40;
  cfg.bound_r = 6;
  EXPECT_TRUE(run_verification(cfg).ok());
}

TEST(Verify, CorruptedTableIsCaught) {
  VerifyConfig cfg;
  cfg.enum_limit = 6;
  cfg.series_order = 30;
  cfg.bound_r = 4;
  cfg.corrupt_table = [](RootRankTable& t) { t.t.at(2).at(5) += 1; };
  const VerifyResult res = run_verification(cfg);
  ASSERT_FALSE(res.ok());
  bool names_table = false;
  for (const auto& f : res.failures()) names_table = names_table || f.name.rfind("root_rank_counts", 0) == 0;
  EXPECT_TRUE(names_table);
}
