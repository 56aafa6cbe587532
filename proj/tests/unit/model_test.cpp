#include <gtest/gtest.h>

#include <cmath>

#include "rnm/model.hpp"

namespace rnm {
namespace {

TEST(StateInterval, EqualWidthSubintervals) {
  EXPECT_EQ(state_interval(1, 4), (StateInterval{0.0, 0.25}));
  EXPECT_EQ(state_interval(3, 4), (StateInterval{0.5, 0.75}));
  EXPECT_EQ(state_interval(5, 5).upper, 1.0);
  EXPECT_THROW(state_interval(0, 4), ArgumentError);
  EXPECT_THROW(state_interval(5, 4), ArgumentError);
  EXPECT_THROW(state_interval(1, 1), ArgumentError);
}

TEST(RankedFragment, RejectsDegenerateNodes) {
  EXPECT_THROW(RankedFragment({}, 3), ArgumentError);
  EXPECT_THROW(RankedFragment({3, 1}, 3), ArgumentError);
  EXPECT_THROW(RankedFragment({3}, 1), ArgumentError);
}

TEST(RankedFragment, EqualMPredicate) {
  const auto equal = RankedFragment::equal_m(3, 5);
  EXPECT_TRUE(equal.is_equal_m());
  EXPECT_EQ(equal.common_state_count(), 5);
  EXPECT_EQ(equal.configuration_count(), 125u);

  const RankedFragment mixed({3, 4}, 3);
  EXPECT_FALSE(mixed.is_equal_m());
  EXPECT_THROW(mixed.common_state_count(), UnsupportedConfiguration);
  EXPECT_EQ(mixed.configuration_count(), 12u);
  EXPECT_EQ(mixed.parent_state_count(2), 4);
  EXPECT_THROW(mixed.parent_state_count(3), ArgumentError);
}

TEST(Configurations, LexicographicFirstParentSlowest) {
  const RankedFragment fragment({2, 3}, 3);
  const auto all = all_configurations(fragment);
  ASSERT_EQ(all.size(), 6u);
  EXPECT_EQ(all[0].state_indices, (std::vector<int>{1, 1}));
  EXPECT_EQ(all[1].state_indices, (std::vector<int>{1, 2}));
  EXPECT_EQ(all[3].state_indices, (std::vector<int>{2, 1}));
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
}

TEST(Configurations, ScenarioD) {
  const auto fragment = RankedFragment::equal_m(4, 5);
  EXPECT_EQ(scenario_d(2, fragment).state_indices, (std::vector<int>{5, 1, 5, 5}));
  EXPECT_THROW(scenario_d(0, fragment), ArgumentError);
  EXPECT_THROW(scenario_d(1, RankedFragment({3, 4}, 3)), UnsupportedConfiguration);
}

TEST(Configurations, CheckRejectsOutOfRange) {
  const auto fragment = RankedFragment::equal_m(2, 3);
  EXPECT_NO_THROW(check_configuration({{3, 1}}, fragment));
  EXPECT_THROW(check_configuration({{4, 1}}, fragment), ArgumentError);
  EXPECT_THROW(check_configuration({{1}}, fragment), ArgumentError);
}

TEST(Expression, ParseIsCaseInsensitive) {
  EXPECT_EQ(parse_expression("wmean"), Expression::wmean);
  EXPECT_EQ(parse_expression("MixMinMax"), Expression::mixminmax);
  EXPECT_EQ(parse_expression("WMAX"), Expression::wmax);
  EXPECT_FALSE(parse_expression("median").has_value());
  EXPECT_EQ(to_string(Expression::wmin), "WMIN");
}

TEST(ValidateSpec, WmeanSumAndRange) {
  const auto fragment = RankedFragment::equal_m(2, 3);
  EXPECT_FALSE(validate_spec(WeightExpressionSpec::wmean({0.3, 0.7}), fragment));

  const auto sum = validate_spec(WeightExpressionSpec::wmean({0.29, 0.7}), fragment);
  ASSERT_TRUE(sum);
  EXPECT_EQ(sum->constraint, SpecViolation::Constraint::weight_sum);
  EXPECT_NE(sum->message.find("WMEAN weights must sum to 1"), std::string::npos);

  const auto range = validate_spec(WeightExpressionSpec::wmean({1.2, -0.2}), fragment);
  ASSERT_TRUE(range);
  EXPECT_EQ(range->constraint, SpecViolation::Constraint::unit_range);
  EXPECT_EQ(range->index, 1);

  // Within the sum tolerance.
  EXPECT_FALSE(validate_spec(WeightExpressionSpec::wmean({0.3, 0.7 + 5e-10}), fragment));
}

TEST(ValidateSpec, WminWeightsAtLeastOne) {
  const auto fragment = RankedFragment::equal_m(3, 3);
  EXPECT_FALSE(validate_spec(WeightExpressionSpec::wmin({1.0, 5.0, 100.0}), fragment));
  const auto v = validate_spec(WeightExpressionSpec::wmax({1.0, 0.99, 2.0}), fragment);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->constraint, SpecViolation::Constraint::at_least_one);
  EXPECT_EQ(v->index, 2);
}

TEST(ValidateSpec, MixminmaxArityAndComplement) {
  const auto fragment = RankedFragment::equal_m(4, 5);
  EXPECT_FALSE(validate_spec(WeightExpressionSpec::mixminmax(0.25, 0.75), fragment));

  const auto arity =
      validate_spec(WeightExpressionSpec(Expression::mixminmax, {0.2, 0.3, 0.5}), fragment);
  ASSERT_TRUE(arity);
  EXPECT_EQ(arity->constraint, SpecViolation::Constraint::weight_count);

  const auto complement = validate_spec(WeightExpressionSpec::mixminmax(0.3, 0.6), fragment);
  ASSERT_TRUE(complement);
  EXPECT_EQ(complement->constraint, SpecViolation::Constraint::mix_complement);
}

TEST(ValidateSpec, CountAndFiniteness) {
  const auto fragment = RankedFragment::equal_m(3, 3);
  EXPECT_EQ(validate_spec(WeightExpressionSpec::wmean({0.5, 0.5}), fragment)->constraint,
            SpecViolation::Constraint::weight_count);
  EXPECT_EQ(validate_spec(WeightExpressionSpec::wmin({1.0, NAN, 2.0}), fragment)->constraint,
            SpecViolation::Constraint::weight_finite);
  EXPECT_THROW(require_valid(WeightExpressionSpec::wmean({0.5, 0.5}), fragment), ValidationError);
}

TEST(GenerationParams, Preconditions) {
  EXPECT_NO_THROW(GenerationParams(0.01, 2));
  EXPECT_THROW(GenerationParams(0.0, 5), ArgumentError);
  EXPECT_THROW(GenerationParams(-1.0, 5), ArgumentError);
  EXPECT_THROW(GenerationParams(INFINITY, 5), ArgumentError);
  EXPECT_THROW(GenerationParams(0.01, 1), ArgumentError);
}

TEST(ConditionalDistribution, Normalization) {
  EXPECT_NO_THROW(ConditionalDistribution({0.2, 0.8}));
  EXPECT_NO_THROW(ConditionalDistribution({0.2, 0.8 + 5e-10}));
  EXPECT_THROW(ConditionalDistribution({0.2, 0.7}), ArgumentError);
  EXPECT_THROW(ConditionalDistribution({-0.1, 1.1}), ArgumentError);
  EXPECT_THROW(ConditionalDistribution({1.0}), ArgumentError);
  EXPECT_DOUBLE_EQ(ConditionalDistribution({0.25, 0.75}).probability(2), 0.75);
}

TEST(Cpt, LooksUpColumnsByConfiguration) {
  const RankedFragment fragment({2}, 2);
  const Cpt cpt(fragment, {ConditionalDistribution({0.9, 0.1}), ConditionalDistribution({0.3, 0.7})});
  EXPECT_DOUBLE_EQ(cpt.at({{2}}).probability(1), 0.3);
  EXPECT_THROW(cpt.at({{3}}), ArgumentError);
  EXPECT_THROW(Cpt(fragment, {ConditionalDistribution({0.5, 0.5})}), ArgumentError);
}

}  // namespace
}  // namespace rnm
