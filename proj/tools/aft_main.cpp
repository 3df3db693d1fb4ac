// aft command line: investigator workflows over the libaft C API.
// The CLI deliberately sees nothing but include/aft/aft.h.

#include <aft/aft.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace {

using json = nlohmann::json;

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop = true; }

struct OptionBag {
  aft_options* o = aft_options_new();
  ~OptionBag() { aft_options_free(o); }
  OptionBag(const OptionBag&) = delete;
  OptionBag& operator=(const OptionBag&) = delete;
  OptionBag() = default;
};

int exit_code_for(aft_status s) {
  if (s == AFT_OK) return 0;
  if (s == AFT_PARTIAL) return 1;
  return 2;
}

// Prints the machine summary (--json) or a few human lines, then maps the
// status onto the documented exit codes: 0 ok, 1 partial, 2 hard error.
int finish(aft_status s, char* summary, bool as_json, const std::string& human_verb) {
  std::unique_ptr<char, decltype(&aft_string_free)> guard(summary, &aft_string_free);
  if (s != AFT_OK && s != AFT_PARTIAL) {
    if (as_json) {
      json err{{"status", aft_status_name(s)}, {"error", aft_last_error()}};
      std::cout << err.dump() << "\n";
    } else {
      std::cerr << "error (" << aft_status_name(s) << "): " << aft_last_error() << "\n";
    }
    return exit_code_for(s);
  }
  if (as_json) {
    json out = summary ? json::parse(summary, nullptr, false) : json::object();
    if (out.is_discarded()) out = json::object();
    out["status"] = aft_status_name(s);
    std::cout << out.dump() << "\n";
  } else {
    std::cout << human_verb << (s == AFT_PARTIAL ? " completed with failures" : " done")
              << "\n";
    if (summary) {
      json j = json::parse(summary, nullptr, false);
      if (!j.is_discarded()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
          if (it.key() == "command") continue;
          std::cout << "  " << it.key() << ": "
                    << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
        }
      }
    }
  }
  return exit_code_for(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aft — acquire, normalize, and analyze Alexa management-API artifacts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(aft_version()));

  bool as_json = false;
  app.add_flag("--json", as_json, "machine-parseable JSON summary on stdout");

  // precedence: flags > environment > config file
  app.set_config("--config", "", "read options from an INI/TOML file")
      ->envname("AFT_CONFIG");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "convert a proxy export XML into a sealed case");
  std::string export_path, case_dir;
  std::vector<std::string> allow_hosts;
  ingest->add_option("export", export_path, "proxy export XML file")->required();
  ingest->add_option("--case", case_dir, "case directory to create")->required();
  ingest->add_option("--allow-host", allow_hosts,
                     "host allowlist override (repeatable)");

  // acquire
  auto* acquire = app.add_subcommand("acquire", "fetch every known endpoint into a sealed case");
  std::string base_url, token;
  int parallelism = 1, delay_ms = 0, timeout_s = 10;
  long long captured_at_ms = -1;
  std::string user_id;
  acquire->add_option("--base-url", base_url, "service base URL")
      ->envname("AFT_BASE_URL")
      ->required();
  acquire->add_option("--token", token, "opaque session token")
      ->envname("AFT_TOKEN")
      ->required();
  acquire->add_option("--case", case_dir, "case directory to create")->required();
  acquire->add_option("--parallelism", parallelism, "concurrent fetches")
      ->envname("AFT_PARALLELISM");
  acquire->add_option("--delay-ms", delay_ms, "inter-request delay")
      ->envname("AFT_DELAY_MS");
  acquire->add_option("--timeout-s", timeout_s, "per-request timeout")
      ->envname("AFT_TIMEOUT_S");
  acquire->add_option("--captured-at-ms", captured_at_ms,
                      "fixed capture timestamp for reproducible runs");
  acquire->add_option("--user-id", user_id, "contacts endpoint user id override");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "verdicts, timeline, and crosschecks for a case");
  std::string out_dir;
  double join_window_s = 5.0;
  bool no_redact = false;
  std::string pattern_file;
  analyze->add_option("--case", case_dir, "sealed case directory")->required();
  analyze->add_option("--out", out_dir, "report output directory")->required();
  analyze->add_option("--join-window-s", join_window_s, "activity/card join window seconds")
      ->envname("AFT_JOIN_WINDOW_S");
  analyze->add_flag("--no-redact", no_redact, "emit full identifiers in reports");
  analyze->add_option("--patterns", pattern_file, "location pattern table (JSON)");

  // diff
  auto* diff = app.add_subcommand("diff", "field-level comparison of two cases");
  std::string case_a, case_b, diff_out;
  diff->add_option("case_a", case_a, "first case directory")->required();
  diff->add_option("case_b", case_b, "second case directory")->required();
  diff->add_option("--out", diff_out, "diff.json output path")->required();

  // mock
  auto* mock = app.add_subcommand("mock", "run the fixture service until interrupted");
  std::string fixture_path, script_path, trace_out;
  int port = 0;
  mock->add_option("--fixture", fixture_path, "fixture JSON (default: built-in account)")
      ->envname("AFT_FIXTURE");
  mock->add_option("--port", port, "listen port (0 = ephemeral)")->envname("AFT_PORT");
  bool print_fixture = false;
  mock->add_flag("--print-fixture", print_fixture,
                 "print the built-in fixture JSON and exit");
  mock->add_option("--script", script_path, "scenario script to replay after boot");
  mock->add_option("--trace-out", trace_out, "write the scenario trace as JSONL here");

  // registry
  auto* registry = app.add_subcommand("registry", "print the endpoint registry");

  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  if (ingest->parsed()) {
    OptionBag bag;
    if (!allow_hosts.empty()) {
      std::string joined;
      for (const auto& h : allow_hosts) {
        if (!joined.empty()) joined += ",";
        joined += h;
      }
      aft_options_set_string(bag.o, "allow_hosts", joined.c_str());
    }
    char* summary = nullptr;
    aft_status s = aft_ingest(export_path.c_str(), case_dir.c_str(), bag.o, &summary);
    return finish(s, summary, as_json, "ingest");
  }

  if (acquire->parsed()) {
    OptionBag bag;
    aft_options_set_int(bag.o, "parallelism", parallelism);
    aft_options_set_int(bag.o, "delay_ms", delay_ms);
    aft_options_set_int(bag.o, "timeout_s", timeout_s);
    if (captured_at_ms >= 0) aft_options_set_int(bag.o, "captured_at_ms", captured_at_ms);
    if (!user_id.empty()) aft_options_set_string(bag.o, "user_id", user_id.c_str());
    char* summary = nullptr;
    aft_status s = aft_acquire(base_url.c_str(), token.c_str(), case_dir.c_str(), bag.o,
                               &summary);
    return finish(s, summary, as_json, "acquire");
  }

  if (analyze->parsed()) {
    OptionBag bag;
    aft_options_set_int(bag.o, "join_window_ms",
                        static_cast<long long>(join_window_s * 1000.0));
    aft_options_set_int(bag.o, "redact", no_redact ? 0 : 1);
    if (!pattern_file.empty())
      aft_options_set_string(bag.o, "pattern_file", pattern_file.c_str());
    char* summary = nullptr;
    aft_status s = aft_analyze(case_dir.c_str(), out_dir.c_str(), bag.o, &summary);
    return finish(s, summary, as_json, "analyze");
  }

  if (diff->parsed()) {
    char* summary = nullptr;
    aft_status s = aft_case_diff(case_a.c_str(), case_b.c_str(), diff_out.c_str(), nullptr,
                                 &summary);
    return finish(s, summary, as_json, "diff");
  }

  if (registry->parsed()) {
    char* text = aft_registry_json();
    if (as_json) {
      std::cout << text << "\n";
    } else {
      json arr = json::parse(text, nullptr, false);
      std::printf("%-28s %-10s %-20s %s\n", "endpoint", "typed", "category", "path");
      for (const auto& ep : arr) {
        std::printf("%-28s %-10s %-20s %s\n", ep.value("endpoint_id", "").c_str(),
                    ep.value("typed_parser", false) ? "typed" : "raw",
                    ep.value("category", "").c_str(),
                    ep.value("path_template", "").c_str());
      }
      std::printf("%d endpoints\n", aft_registry_count());
    }
    aft_string_free(text);
    return 0;
  }

  if (mock->parsed()) {
    if (print_fixture) {
      char* text = aft_default_fixture_json();
      std::cout << text;
      aft_string_free(text);
      return 0;
    }
    aft_mock* handle = nullptr;
    aft_status s = aft_mock_start(fixture_path.empty() ? nullptr : fixture_path.c_str(),
                                  port, &handle);
    if (s != AFT_OK) return finish(s, nullptr, as_json, "mock");

    json boot{{"status", "serving"},
              {"port", aft_mock_port(handle)},
              {"base_url", "http://127.0.0.1:" + std::to_string(aft_mock_port(handle))}};
    std::cout << boot.dump() << std::endl;

    if (!script_path.empty()) {
      char* trace = nullptr;
      s = aft_mock_run_script_file(handle, script_path.c_str(), &trace);
      if (s != AFT_OK) {
        std::cerr << "error (" << aft_status_name(s) << "): " << aft_last_error() << "\n";
        aft_mock_stop(handle);
        return 2;
      }
      json trace_json = json::parse(trace, nullptr, false);
      aft_string_free(trace);
      std::ostream* sink = &std::cout;
      std::ofstream file;
      if (!trace_out.empty()) {
        file.open(trace_out, std::ios::trunc);
        if (!file) {
          std::cerr << "error: cannot write " << trace_out << "\n";
          aft_mock_stop(handle);
          return 2;
        }
        sink = &file;
      }
      for (const auto& entry : trace_json) *sink << entry.dump() << "\n";
      sink->flush();
    }

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    aft_mock_stop(handle);
    if (!as_json) std::cout << "mock stopped\n";
    return 0;
  }

  return 0;
}
