#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string(SFV_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sfv-cli-test-" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Cli, PropertiesSucceed) {
  const fs::path out = scratch("properties");
  EXPECT_EQ(run("properties --seed 42 --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "properties.json"));
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
}

TEST(Cli, MutationIsAnInvariantFailure) {
  EXPECT_EQ(run("properties --mutation flip-upwind --out " + scratch("mutation").string()), 1);
}

TEST(Cli, MissingConfigIsConfigError) {
  EXPECT_EQ(run("coupled --config /nonexistent/missing.file"), 2);
}

TEST(Cli, SinglePathIsConfigError) {
  EXPECT_EQ(run("temporal --paths 1 --out " + scratch("onepath").string()), 2);
}

TEST(Cli, UnknownFlagIsConfigError) {
  EXPECT_EQ(run("spatial --no-such-flag"), 2);
}

TEST(Cli, MeshInfo) {
  const fs::path out = scratch("mesh");
  EXPECT_EQ(run("mesh-info --mesh 3x3 --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "mesh.json"));
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  const fs::path out = scratch("precedence");
  fs::create_directories(out);
  const fs::path cfg = out / "run.cfg";
  std::ofstream(cfg) << "study=temporal\nmesh_levels=4\ntime_steps=2,4\nreference_steps=8\nhorizon=0.01\npaths=3\n";
  EXPECT_EQ(run("temporal --config " + cfg.string() + " --paths 2 --out " + out.string()), 0);
  std::ifstream manifest(out / "manifest.json");
  const std::string text((std::istreambuf_iterator<char>(manifest)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("\"paths\": \"2\""), std::string::npos) << text;
}
