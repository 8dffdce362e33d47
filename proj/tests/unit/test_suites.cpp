#include <gtest/gtest.h>

#include <string>

#include "bifconj/error.hpp"
#include "bifconj/report.hpp"
#include "bifconj/suites.hpp"

using namespace bifconj;

class Suite : public ::testing::TestWithParam<std::string> {};

TEST_P(Suite, AllReportsPass) {
    const auto reports = run_suite(GetParam(), 1);
    ASSERT_FALSE(reports.empty());
    for (const auto& r : reports) {
        EXPECT_TRUE(r.passed) << to_json_line(r);
        EXPECT_EQ(r.seed, 1u);
    }
}

INSTANTIATE_TEST_SUITE_P(Registry, Suite, ::testing::ValuesIn(suite_names()),
                         [](const auto& info) {
                             std::string n = info.param;
                             for (char& c : n)
                                 if (c == '-') c = '_';
                             return n;
                         });

TEST(SuiteRegistry, UnknownName) { EXPECT_THROW(run_suite("no-such-suite", 0), InvalidArgument); }
