#include <gtest/gtest.h>

#include "ebus/quantities.hpp"

using namespace ebus;

TEST(ValidateConfig, ReferenceDefaultsAccepted)
{
  const VehicleConfig cfg;
  EXPECT_NO_THROW(validate_config(cfg));
  EXPECT_EQ(cfg.curb_mass_kg, 10000.0);
  EXPECT_EQ(cfg.payload_mass_kg, 18000.0);
  EXPECT_EQ(cfg.sim_mass_kg, 18000.0);
  EXPECT_EQ(cfg.rolling_coeff, 0.015);
  EXPECT_EQ(cfg.drag_coeff, 0.7);
  EXPECT_EQ(cfg.frontal_area_m2, 8.925);
  EXPECT_EQ(cfg.air_density_kgm3, 1.225);
  EXPECT_EQ(cfg.gravity_ms2, 9.8);
  EXPECT_EQ(cfg.top_speed_ms, 22.2);
  EXPECT_EQ(cfg.max_accel_ms2, 0.7);
  EXPECT_EQ(cfg.drivetrain_efficiency, 0.85);
  EXPECT_EQ(cfg.range_target_km, 50.0);
}

TEST(ValidateConfig, ZeroEfficiencyRejected)
{
  VehicleConfig cfg;
  cfg.drivetrain_efficiency = 0.0;
  try {
    validate_config(cfg);
    FAIL() << "expected InvalidConfig";
  } catch (const InvalidConfig& e) {
    EXPECT_EQ(e.field(), "drivetrain_efficiency");
  }
}

TEST(ValidateConfig, NegativeFrontalAreaRejected)
{
  VehicleConfig cfg;
  cfg.frontal_area_m2 = -1.0;
  try {
    validate_config(cfg);
    FAIL() << "expected InvalidConfig";
  } catch (const InvalidConfig& e) {
    EXPECT_EQ(e.field(), "frontal_area_m2");
  }
}

TEST(ValidateConfig, FirstViolationIsNamed)
{
  VehicleConfig cfg;
  cfg.sim_mass_kg = 0.0;
  cfg.drivetrain_efficiency = 2.0;
  try {
    validate_config(cfg);
    FAIL();
  } catch (const InvalidConfig& e) {
    EXPECT_EQ(e.field(), "sim_mass_kg");
  }
}

TEST(ValidateConfig, SpeedOrdering)
{
  VehicleConfig cfg;
  cfg.avg_speed_ms = cfg.top_speed_ms;
  EXPECT_THROW(validate_config(cfg), InvalidConfig);
  cfg.avg_speed_ms = 0.0;
  EXPECT_THROW(validate_config(cfg), InvalidConfig);
}

TEST(ValidateConfig, Idempotent)
{
  VehicleConfig cfg;
  cfg.sim_mass_kg = 28000.0;
  cfg.drivetrain_efficiency = 0.9;
  const auto once = validate_config(cfg);
  const auto twice = validate_config(once);
  EXPECT_EQ(once, cfg);
  EXPECT_EQ(twice, once);
}

TEST(ValidateRoad, GradeBound)
{
  EXPECT_NO_THROW(validate_road({0.1, 0.0}));
  EXPECT_THROW(validate_road({std::numbers::pi / 2, 0.0}), InvalidConfig);
  EXPECT_THROW(validate_road({-2.0, 0.0}), InvalidConfig);
}

TEST(Units, Conversions)
{
  EXPECT_NEAR(kmh_to_ms(50.0), 13.8889, 1e-4);
  EXPECT_DOUBLE_EQ(ms_to_kmh(kmh_to_ms(80.0)), 80.0);
  EXPECT_DOUBLE_EQ(deg_to_rad(180.0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(rad_to_deg(deg_to_rad(3.5)), 3.5);
}
