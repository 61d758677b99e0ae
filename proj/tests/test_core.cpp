#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ilseval/core/model.hpp"
#include "ilseval/synthgen/case_study.hpp"
#include "ilseval/util/text.hpp"

using namespace ilseval;

namespace {

StudySchema dynamics_only() {
  return StudySchema(FactorSchema({{"Dynamics", CategoricalDomain{{"yes", "no"}}}}));
}

StudySchema fov_only() {
  return StudySchema(FactorSchema({{"FoV", ContinuousDomain{"deg", 0.0, 360.0, {}}}}));
}

bool has_code(const std::vector<Violation>& v, Errc code) {
  for (const auto& x : v)
    if (x.code == code) return true;
  return false;
}

}  // namespace

TEST(Scenario, ConformingCategoricalAccepted) {
  EXPECT_TRUE(check_scenario(dynamics_only(), {"s1", {{"Dynamics", std::string("yes")}}}, "s1").empty());
}

TEST(Scenario, ContinuousBoundViolation) {
  auto v = check_scenario(fov_only(), {"s1", {{"FoV", 400.0}}}, "s1");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, Errc::ValueOutOfDomain);
}

TEST(Scenario, UnknownAndMissingFactors) {
  auto v = check_scenario(dynamics_only(), {"s1", {{"Speed", 1.0}}}, "s1");
  EXPECT_TRUE(has_code(v, Errc::UnknownFactor));
  EXPECT_TRUE(has_code(v, Errc::MissingFactor));
}

TEST(Scenario, CategoryGivenAsNumberIsOutOfDomain) {
  auto v = check_scenario(dynamics_only(), {"s1", {{"Dynamics", 1.0}}}, "s1");
  EXPECT_TRUE(has_code(v, Errc::ValueOutOfDomain));
}

TEST(Scenario, DuplicateIdsReported) {
  std::vector<Scenario> s{{"a", {{"Dynamics", std::string("yes")}}}, {"a", {{"Dynamics", std::string("no")}}}};
  try {
    validate_manifest(dynamics_only(), s);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.contains(Errc::DuplicateScenarioId));
  }
}

TEST(Scenario, RevalidationIsIdempotent) {
  const auto schema = synthgen::case_study::schema();
  std::vector<Scenario> scenarios;
  int i = 0;
  for (const auto& a : full_factorial(schema)) scenarios.push_back({"S" + std::to_string(i++), a});
  auto once = validate_manifest(schema, scenarios);
  auto twice = validate_manifest(schema, once);
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t k = 0; k < once.size(); ++k) {
    EXPECT_EQ(once[k].id, twice[k].id);
    EXPECT_EQ(once[k].assignment, twice[k].assignment);
  }
}

TEST(Scenario, JoinedSchemaRejectsForeignFactor) {
  const auto schema = synthgen::case_study::schema();
  Scenario s{"x",
             {{"ILS", std::string("UWB")},
              {"Environment", std::string("empty")},
              {"EKF", std::string("on")},
              {"Dynamics", std::string("no")},
              {"FoV", 180.0}}};
  auto v = check_scenario(schema, s, "x");
  EXPECT_FALSE(v.empty());
}

TEST(FullFactorial, LidarHas32Scenarios) {
  std::vector<Factor> f{{"MapQuality", ContinuousDomain{"", 0.0, 1.0, {0.54, 0.81, 0.84, 0.99}}},
                        {"FoV", ContinuousDomain{"deg", 0.0, 360.0, {180.0, 270.0}}},
                        {"Reflector", CategoricalDomain{{"on", "off"}}},
                        {"Dynamics", CategoricalDomain{{"yes", "no"}}}};
  StudySchema lidar{FactorSchema(f)};
  auto rows = full_factorial(lidar);
  EXPECT_EQ(rows.size(), 32u);
  std::vector<Scenario> s;
  for (std::size_t i = 0; i < rows.size(); ++i) s.push_back({"L" + std::to_string(i), rows[i]});
  EXPECT_EQ(validate_manifest(lidar, s).size(), 32u);
}

TEST(FullFactorial, CategoricalCardinalityIsProduct) {
  for (std::size_t a = 1; a <= 3; ++a) {
    for (std::size_t b = 1; b <= 4; ++b) {
      std::vector<std::string> va, vb;
      for (std::size_t i = 0; i < a; ++i) va.push_back("a" + std::to_string(i));
      for (std::size_t i = 0; i < b; ++i) vb.push_back("b" + std::to_string(i));
      StudySchema schema{FactorSchema({{"A", CategoricalDomain{va}}, {"B", CategoricalDomain{vb}}})};
      EXPECT_EQ(full_factorial(schema).size(), a * b);
    }
  }
}

TEST(FullFactorial, CaseStudyIsEightPlusThirtyTwo) {
  auto rows = full_factorial(synthgen::case_study::schema());
  ASSERT_EQ(rows.size(), 40u);
  std::size_t uwb = 0;
  for (const auto& r : rows) uwb += std::get<std::string>(r.at("ILS")) == "UWB";
  EXPECT_EQ(uwb, 8u);
}

TEST(FullFactorial, ContinuousWithoutLevelsIsInvalidPlan) {
  try {
    full_factorial(fov_only());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidPlan);
  }
}

TEST(FactorSchema, RejectsDuplicatesAndBadRanges) {
  EXPECT_THROW(FactorSchema({{"A", CategoricalDomain{{"x"}}}, {"A", CategoricalDomain{{"y"}}}}), ValidationError);
  EXPECT_THROW(FactorSchema({{"A", ContinuousDomain{"", 1.0, 1.0, {}}}}), ValidationError);
  EXPECT_THROW(FactorSchema({{"A", ContinuousDomain{"", 0.0, 1.0, {2.0}}}}), ValidationError);
  EXPECT_THROW(FactorSchema({{"A", CategoricalDomain{{}}}}), ValidationError);
}

TEST(Trajectory, RejectsNonMonotoneAndNonUnitQuaternion) {
  EXPECT_THROW(Trajectory("t", {{0.0, 0, 0, 0, {}}, {0.0, 1, 0, 0, {}}}), Error);
  EXPECT_THROW(Trajectory("t", {{0.0, 0, 0, 0, Quaternion{2, 0, 0, 0}}}), Error);
  Trajectory ok("t", {{0.0, 0, 0, 0, Quaternion{}}, {1.0, 1, 0, 0, Quaternion{}}});
  EXPECT_TRUE(ok.has_orientation());
  EXPECT_DOUBLE_EQ(ok.end_time(), 1.0);
}

TEST(PerformanceClassScheme, BoundarySemantics) {
  const auto s = synthgen::case_study::application_scheme();
  EXPECT_EQ(s.classify(0.04), "A");
  EXPECT_EQ(s.classify(0.05), "B");
  EXPECT_EQ(s.classify(1.2), "unclassified");
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"A", "B", "C", "D", "unclassified"}));
  auto iv = s.interval("unclassified");
  ASSERT_TRUE(iv);
  EXPECT_EQ(iv->first, 1.0);
  EXPECT_TRUE(std::isinf(iv->second));
}

TEST(PerformanceClassScheme, RejectsGapsAndBadStart) {
  EXPECT_THROW(PerformanceClassScheme(SchemeKind::Application, {{"A", 0.1, 0.2}}, "X"), ValidationError);
  EXPECT_THROW(PerformanceClassScheme(SchemeKind::Application, {{"A", 0.0, 0.2}, {"B", 0.3, 0.4}}, "X"), ValidationError);
  EXPECT_THROW(PerformanceClassScheme(SchemeKind::Application, {{"A", 0.0, 0.2}}, "A"), ValidationError);
}

TEST(Errors, ExitGroups) {
  EXPECT_TRUE(is_config_error(Errc::SchemaError));
  EXPECT_TRUE(is_config_error(Errc::InfeasibleRange));
  EXPECT_FALSE(is_config_error(Errc::FileNotFound));
  EXPECT_FALSE(is_config_error(Errc::DegenerateConfiguration));
}

TEST(Text, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 0.675, 1e-300, 123456789.125, -2.5}) {
    const auto s = text::format_double(v);
    auto back = text::parse_double(s);
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, v) << s;
  }
  EXPECT_EQ(text::format_double(-0.0), "0");
  EXPECT_EQ(text::format_double(225.0), "225");
  EXPECT_FALSE(text::parse_double("1.0x"));
  EXPECT_FALSE(text::parse_double("nan"));
  EXPECT_FALSE(text::parse_double(""));
}
