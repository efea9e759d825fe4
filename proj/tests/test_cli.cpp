#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string dir = std::string(CUTPROJ_SCRATCH_DIR) + "/cli";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::string& args) {
  fs::create_directories(dir);
  std::string out = dir + "/stdout.txt", err = dir + "/stderr.txt";
  std::string cmd = std::string("\"") + CUTPROJ_BIN + "\" " + args + " >\"" + out + "\" 2>\"" + err + "\"";
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

std::string config(const std::string& name) { return std::string(CUTPROJ_CONFIG_DIR) + "/" + name; }

// golden.json with fewer boxes, so the CLI checks stay quick.
std::string small_golden(const std::string& name, const std::function<void(json&)>& edit = {}) {
  json j = json::parse(slurp(config("golden.json")));
  j["boxes"]["steps"] = 3;
  if (edit)
    edit(j);
  fs::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream(path) << j.dump(2);
  return path;
}

std::string error_kind(const std::string& err) {
  return json::parse(err).at("error").at("kind").get<std::string>();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate writes the certificate") {
  std::string out = dir + "/validate";
  Result r = run("validate --config \"" + config("golden.json") + "\" --out \"" + out + "\"");
  REQUIRE(r.code == 0);
  json summary = json::parse(r.out);
  CHECK(summary.is_object());
  json v = json::parse(slurp(out + "/validation.json"));
  CHECK(v.dump().find("injectivity") != std::string::npos);
}

TEST_CASE("argument and config errors exit with 2") {
  CHECK(run("validate").code == 2);
  CHECK(run("frobnicate --config \"" + config("golden.json") + "\"").code == 2);
  CHECK(run("validate --config \"" + config("golden.json") + "\" --workers 0").code == 2);

  std::string broken = dir + "/broken.json";
  fs::create_directories(dir);
  std::ofstream(broken) << "{ \"scheme\": ";
  Result r = run("validate --config \"" + broken + "\"");
  CHECK(r.code == 2);
  CHECK(error_kind(r.err) == "ParseError");

  std::string unknown = small_golden("unknown.json", [](json& j) { j["thresholds"]["bogus"] = 1; });
  r = run("validate --config \"" + unknown + "\"");
  CHECK(r.code == 2);
  CHECK(error_kind(r.err) == "ValidationError");
  CHECK(json::parse(r.err)["error"]["field"] == "thresholds.bogus");

  r = run("validate --config \"" + dir + "/nope.json\"");
  CHECK(r.code == 2);
}

TEST_CASE("domain errors exit with 3") {
  Result r = run("diffract --config \"" + config("sharp_window.json") + "\" --out \"" + dir + "/sharp\"");
  CHECK(r.code == 3);
  CHECK(error_kind(r.err) == "NonSmoothWeight");

  std::string swapped = small_golden("swapped.json", [](json& j) {
    j["scheme"]["basis"] = json::array({json::array({0.0, 1.0}), json::array({1.0, 0.0})});
  });
  r = run("validate --config \"" + swapped + "\"");
  CHECK(r.code == 3);
  CHECK(error_kind(r.err) == "InjectivityFailed");
  CHECK(json::parse(r.err)["error"]["witness"] == json::array({1, 0}));
}

TEST_CASE("compare passes and fails against its tolerances") {
  std::string ok = small_golden("compare_ok.json");
  Result r = run("compare --config \"" + ok + "\" --out \"" + dir + "/compare_ok\"");
  CHECK(r.code == 0);
  json items = json::parse(slurp(dir + "/compare_ok/comparison.json"));
  CHECK(items.dump().find("\"pass\":false") == std::string::npos);

  std::string strict = small_golden("compare_strict.json", [](json& j) {
    j["compare"] = {{"density_rel", 1e-12}, {"autocorr_rel", 1e-12}, {"diffraction_rel", 1e-12}};
  });
  r = run("compare --config \"" + strict + "\" --out \"" + dir + "/compare_strict\"");
  CHECK(r.code == 4);
  CHECK(slurp(dir + "/compare_strict/comparison.json").find("\"pass\": false") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
  std::string cfg = small_golden("determinism.json");
  for (const char* cmd : {"generate", "autocorr", "diffract"}) {
    std::string a = dir + "/det_a", b = dir + "/det_b";
    REQUIRE(run(std::string(cmd) + " --config \"" + cfg + "\" --out \"" + a + "\" --workers 1").code == 0);
    REQUIRE(run(std::string(cmd) + " --config \"" + cfg + "\" --out \"" + b + "\" --workers 3").code == 0);
    for (const auto& entry : fs::directory_iterator(a)) {
      std::string name = entry.path().filename().string();
      CHECK_MESSAGE(slurp(a + "/" + name) == slurp(b + "/" + name), cmd << " " << name);
    }
  }
}

}  // TEST_SUITE
