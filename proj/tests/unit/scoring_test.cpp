#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "xai/labels.hpp"
#include "xai/scoring.hpp"

namespace xai {
namespace {

LabelTable numbered_labels(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("class_" + std::to_string(i));
  return LabelTable(std::move(names));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an xai::Error";
  return ErrorCode::kArgument;
}

TEST(Softmax, UniformForEqualLogits) {
  const auto p = softmax(std::vector<float>{0.0F, 0.0F});
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  const auto q = softmax(std::vector<double>(7, 123.25));
  for (double v : q) EXPECT_NEAR(v, 1.0 / 7.0, 1e-15);
}

TEST(Softmax, LogTwoGivesTwoThirds) {
  const auto p = softmax(std::vector<double>{std::log(2.0), 0.0});
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-12);
}

TEST(Softmax, SurvivesHugeLogits) {
  const auto p = softmax(std::vector<double>{1e4, 1e4 - std::log(3.0)});
  EXPECT_NEAR(p[0], 0.75, 1e-12);
}

TEST(Softmax, RejectsNonFiniteAndEmpty) {
  EXPECT_EQ(code_of([] { softmax(std::vector<float>{1.0F, NAN}); }), ErrorCode::kNumeric);
  EXPECT_EQ(code_of([] { softmax(std::vector<float>{INFINITY}); }), ErrorCode::kNumeric);
  EXPECT_EQ(code_of([] { softmax(std::vector<float>{}); }), ErrorCode::kNumeric);
}

TEST(Softmax, AgreesWithReferenceOnRandomVectors) {
  testing::Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> l(1000);
    for (double& v : l) v = testing::uniform_real(rng, -30.0, 30.0);
    const auto p = softmax(l);
    const auto ref = testing::reference_softmax(l);
    for (std::size_t i = 0; i < l.size(); ++i) ASSERT_NEAR(p[i], ref[i], 1e-12);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(TopK, PicksUniqueMaximum) {
  std::vector<double> probs(1000, 0.0005);
  probs[207] = 0.5;
  const auto labels = numbered_labels(1000);
  const auto top = top_k(probs, 1, labels);
  ASSERT_EQ(top.size(), 1U);
  EXPECT_EQ(top[0].class_index, 207);
  EXPECT_EQ(top[0].label, "class_207");
  EXPECT_DOUBLE_EQ(top[0].confidence, 0.5);
}

TEST(TopK, BreaksTiesByAscendingIndex) {
  const std::vector<double> probs(1000, 0.001);
  EXPECT_EQ(top_k_indices(probs, 3), (std::vector<int>{0, 1, 2}));
  const std::vector<double> mixed{0.1, 0.3, 0.2, 0.3, 0.1};
  EXPECT_EQ(top_k_indices(mixed, 5), (std::vector<int>{1, 3, 2, 0, 4}));
}

TEST(TopK, RejectsOutOfRangeK) {
  const std::vector<double> probs(1000, 0.001);
  EXPECT_EQ(code_of([&] { top_k_indices(probs, 0); }), ErrorCode::kArgument);
  EXPECT_EQ(code_of([&] { top_k_indices(probs, 1001); }), ErrorCode::kArgument);
}

TEST(TopK, IsSortedDescending) {
  testing::Rng rng(6);
  std::vector<double> l(1000);
  for (double& v : l) v = testing::uniform_real(rng, -5.0, 5.0);
  const auto probs = softmax(l);
  const auto top = top_k(probs, 25, numbered_labels(1000));
  for (std::size_t i = 1; i < top.size(); ++i) {
    EXPECT_GE(top[i - 1].confidence, top[i].confidence);
  }
}

}  // namespace
}  // namespace xai
