// CLI behavior that lives above the library: option sources and their
// precedence (flags > environment > config file), exit codes, fixture dump.

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "mock/server.hpp"
#include "support.hpp"

using nlohmann::json;

namespace {

int run_cli(const std::vector<std::string>& args, const std::string& stdout_path) {
  pid_t pid = fork();
  if (pid == 0) {
    FILE* out = std::fopen(stdout_path.c_str(), "w");
    if (out) {
      dup2(fileno(out), STDOUT_FILENO);
      dup2(fileno(out), STDERR_FILENO);
    }
    std::vector<char*> argv;
    static std::string cli = AFT_CLI_PATH;
    argv.push_back(cli.data());
    std::vector<std::string> storage = args;
    for (auto& a : storage) argv.push_back(a.data());
    argv.push_back(nullptr);
    execv(AFT_CLI_PATH, argv.data());
    _exit(127);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct EnvVar {
  std::string name;
  EnvVar(const std::string& n, const std::string& value) : name(n) {
    ::setenv(n.c_str(), value.c_str(), 1);
  }
  ~EnvVar() { ::unsetenv(name.c_str()); }
};

struct LiveMock {
  aft::mock::MockServer server;
  std::string base_url;

  LiveMock() : server(aft::mock::default_state()) {
    auto port = server.start(0);
    REQUIRE(port.ok());
    base_url = server.base_url();
  }
};

}  // namespace

TEST_CASE("config file supplies acquire options") {
  testsupport::TempDir tmp;
  LiveMock mock;

  std::ofstream cfg(tmp / "aft.ini");
  cfg << "[acquire]\n";
  cfg << "base-url=\"" << mock.base_url << "\"\n";
  cfg << "token=\"from-config\"\n";
  cfg << "parallelism=3\n";
  cfg.close();

  int code = run_cli({"--config", (tmp / "aft.ini").string(), "acquire", "--case",
                      (tmp / "c1").string(), "--captured-at-ms", "1565105400000",
                      "--json"},
                     (tmp / "out.txt").string());
  CHECK(code == 0);
  json manifest = json::parse(slurp(tmp / "c1" / "manifest.json"));
  CHECK(manifest["config"]["parallelism"] == 3);
}

TEST_CASE("environment beats the config file") {
  testsupport::TempDir tmp;
  LiveMock mock;

  std::ofstream cfg(tmp / "aft.ini");
  cfg << "[acquire]\n";
  cfg << "base-url=\"http://127.0.0.1:1\"\n";  // dead host in the file
  cfg << "token=\"from-config\"\n";
  cfg.close();

  EnvVar env("AFT_BASE_URL", mock.base_url);
  int code = run_cli({"--config", (tmp / "aft.ini").string(), "acquire", "--case",
                      (tmp / "c2").string(), "--timeout-s", "1", "--json"},
                     (tmp / "out.txt").string());
  CHECK(code == 0);  // reached the live mock, not the dead config host
}

TEST_CASE("flags beat the environment") {
  testsupport::TempDir tmp;
  LiveMock mock;

  EnvVar env("AFT_BASE_URL", "http://127.0.0.1:1");  // dead host in the env
  EnvVar tok("AFT_TOKEN", "from-env");
  int code = run_cli({"acquire", "--base-url", mock.base_url, "--case",
                      (tmp / "c3").string(), "--timeout-s", "1", "--json"},
                     (tmp / "out.txt").string());
  CHECK(code == 0);

  // and with only the dead env value, acquisition fails with a hard error
  int code2 = run_cli({"acquire", "--case", (tmp / "c4").string(), "--timeout-s", "1"},
                      (tmp / "out2.txt").string());
  CHECK(code2 == 2);
}

TEST_CASE("analyze reruns overwrite reports deterministically") {
  testsupport::TempDir tmp;
  LiveMock mock;
  REQUIRE(run_cli({"acquire", "--base-url", mock.base_url, "--token", "t", "--case",
                   (tmp / "c").string(), "--captured-at-ms", "1565105400000"},
                  (tmp / "out.txt").string()) == 0);
  REQUIRE(run_cli({"analyze", "--case", (tmp / "c").string(), "--out",
                   (tmp / "r").string()},
                  (tmp / "out.txt").string()) == 0);
  std::string findings1 = slurp(tmp / "r" / "findings.json");
  std::string csv1 = slurp(tmp / "r" / "timeline.csv");
  REQUIRE(run_cli({"analyze", "--case", (tmp / "c").string(), "--out",
                   (tmp / "r").string()},
                  (tmp / "out.txt").string()) == 0);
  CHECK(slurp(tmp / "r" / "findings.json") == findings1);
  CHECK(slurp(tmp / "r" / "timeline.csv") == csv1);
  CHECK_FALSE(findings1.empty());
}

TEST_CASE("mock prints its built-in fixture") {
  testsupport::TempDir tmp;
  int code = run_cli({"mock", "--print-fixture"}, (tmp / "fx.json").string());
  CHECK(code == 0);
  json fx = json::parse(slurp(tmp / "fx.json"), nullptr, false);
  REQUIRE_FALSE(fx.is_discarded());
  CHECK(fx.contains("identity"));
  CHECK(fx["lists"].size() == 2);
}

TEST_CASE("diff through the CLI surfaces generation differences") {
  testsupport::TempDir tmp;
  {
    std::ofstream f(tmp / "gen2.json");
    f << testsupport::gen2_fixture().dump();
  }
  {
    std::ofstream f(tmp / "gen3.json");
    f << testsupport::gen3_fixture().dump();
  }

  auto acquire_from = [&](const std::string& fixture, const std::string& case_dir) {
    auto st = aft::mock::load_fixture(json::parse(slurp(fixture)));
    REQUIRE(st.ok());
    aft::mock::MockServer server(std::move(st.value()));
    auto port = server.start(0);
    REQUIRE(port.ok());
    int code = run_cli({"acquire", "--base-url", server.base_url(), "--token", "t",
                        "--case", case_dir, "--captured-at-ms", "1565105400000"},
                       (tmp / "out.txt").string());
    REQUIRE(code == 0);
  };
  acquire_from((tmp / "gen2.json").string(), (tmp / "case-g2").string());
  acquire_from((tmp / "gen3.json").string(), (tmp / "case-g3").string());

  int code = run_cli({"diff", (tmp / "case-g2").string(), (tmp / "case-g3").string(),
                      "--out", (tmp / "diff.json").string(), "--json"},
                     (tmp / "diff-out.txt").string());
  CHECK(code == 0);
  json d = json::parse(slurp(tmp / "diff.json"));
  bool software = false;
  for (const auto& e : d["entries"]) {
    if (e["endpoint_id"] == "devices-v2" && e["kind"] == "FieldChanged") {
      for (const auto& row : e["details"]["fields"]) {
        if (row["field"] == "software_version") software = true;
      }
    }
  }
  CHECK(software);

  // identical cases diff empty
  int code2 = run_cli({"diff", (tmp / "case-g2").string(), (tmp / "case-g2").string(),
                       "--out", (tmp / "diff0.json").string()},
                      (tmp / "diff-out0.txt").string());
  CHECK(code2 == 0);
  CHECK(json::parse(slurp(tmp / "diff0.json"))["entries"].empty());
}
