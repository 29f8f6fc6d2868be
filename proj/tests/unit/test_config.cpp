#include <gtest/gtest.h>

#include "sfv/config.hpp"

using namespace sfv;

TEST(Config, MinimalFileFillsDefaults) {
  const StudyConfig c = parse_config_text("study = temporal\n", default_config(StudyKind::properties));
  EXPECT_EQ(c.study, StudyKind::temporal);
  EXPECT_EQ(c.reference_steps, 1024u);
  EXPECT_EQ(c.paths, 64u);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_NO_THROW(validate_config(c));
}

TEST(Config, CommentsAndOverrides) {
  const StudyConfig c = parse_config_text(
      "# comment\nstudy=coupled\n\nseed = 7  # trailing\nmesh_levels = 4,8\ntime_steps=4,8\ninterpolant=left\n",
      default_config(StudyKind::properties));
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.mesh_levels, (std::vector<std::size_t>{4, 8}));
  EXPECT_EQ(c.interpolant, Interpolant::left);
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    parse_config_text("foo = 1\n", default_config(StudyKind::properties));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
  }
}

TEST(Config, BadValuesAreRejected) {
  const StudyConfig base = default_config(StudyKind::properties);
  EXPECT_THROW(parse_config_text("paths = many\n", base), ConfigError);
  EXPECT_THROW(parse_config_text("horizon = 0.1x\n", base), ConfigError);
  EXPECT_THROW(parse_config_text("just a line\n", base), ConfigError);
  EXPECT_THROW(parse_config_text("study = nonsense\n", base), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/sfv.cfg", base), ConfigError);
}

TEST(Config, DivisorChainErrorNamesOffender) {
  const StudyConfig c =
      parse_config_text("study=temporal\ntime_steps=7,1024\nreference_steps=1024\n", default_config(StudyKind::properties));
  try {
    validate_config(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("7 is not a divisor"), std::string::npos) << e.what();
  }
}

TEST(Config, EnvironmentOverrides) {
  const StudyConfig base = default_config(StudyKind::temporal);
  const StudyConfig c = apply_env_overrides(base, {{"SFV_SEED", "9"}, {"SFV_PATHS", "4"}, {"SFV_UNRELATED_THING", "x"}});
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.paths, 4u);
  EXPECT_EQ(c.reference_steps, base.reference_steps);
}

TEST(Config, TextRoundTrip) {
  StudyConfig c = default_config(StudyKind::coupled);
  c.horizon = 0.2;
  c.noise_amplitude = 1.0 / 3.0;
  c.workers = 3;
  c.mutation = Mutation::flip_upwind;
  const StudyConfig back = parse_config_text(config_to_text(c), default_config(StudyKind::properties));
  EXPECT_EQ(config_echo(back), config_echo(c));
  EXPECT_EQ(back.noise_amplitude, c.noise_amplitude);
}

TEST(Config, MeshSpec) {
  EXPECT_EQ(parse_mesh_spec("16x16"), std::make_pair(2, std::size_t{16}));
  EXPECT_EQ(parse_mesh_spec("4x4x4"), std::make_pair(3, std::size_t{4}));
  EXPECT_THROW(parse_mesh_spec("4x8"), ConfigError);
  EXPECT_THROW(parse_mesh_spec("4"), ConfigError);
  EXPECT_EQ(parse_size_list("levels", "8, 16,32"), (std::vector<std::size_t>{8, 16, 32}));
  EXPECT_THROW(parse_size_list("levels", ""), ConfigError);
}
