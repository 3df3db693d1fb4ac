#include "mock/server.hpp"

#include <httplib.h>

#include "client/registry.hpp"

namespace aft::mock {

struct MockServer::Impl {
  mutable std::mutex mu;
  MockState state;
  httplib::Server server;
  std::thread thread;

  explicit Impl(MockState s) : state(std::move(s)) {}

  static bool authorized(const httplib::Request& req) {
    auto auth = req.get_header_value("Authorization");
    if (auth.empty() || auth == "Bearer") return false;
    if (auth.rfind("Bearer", 0) == 0) {
      return auth.find_first_not_of(' ', 6) != std::string::npos;
    }
    return true;  // any other nonempty opaque token
  }

  static void reply_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  void setup_routes() {
    server.set_pre_routing_handler([](const httplib::Request& req, httplib::Response& res) {
      if (req.path.rfind("/_mock", 0) == 0) return httplib::Server::HandlerResponse::Unhandled;
      if (!authorized(req)) {
        reply_json(res, json{{"error", "unauthorized"}}, 401);
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });

    // endpoints with parameters
    server.Get("/api/device-wifi-details",
               [this](const httplib::Request& req, httplib::Response& res) {
                 std::string serial = req.get_param_value("deviceSerialNumber");
                 std::lock_guard lock(mu);
                 auto body = body_wifi(state, serial);
                 if (!body) {
                   reply_json(res, json{{"error", "unknown device"}}, 404);
                 } else {
                   reply_json(res, *body);
                 }
               });

    server.Get(R"(/api/namedLists/([^/]+)/items)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 std::lock_guard lock(mu);
                 auto body = body_list_items(state, req.matches[1].str());
                 if (!body) {
                   reply_json(res, json{{"error", "unknown list"}}, 404);
                 } else {
                   reply_json(res, *body);
                 }
               });

    server.Get("/api/utterance/audio/data",
               [this](const httplib::Request& req, httplib::Response& res) {
                 std::string id = req.get_param_value("id");
                 std::lock_guard lock(mu);
                 const SeededInteraction* si = state.find_interaction(id);
                 if (!si || !si->audio_present) {
                   reply_json(res, json{{"error", "no recording"}}, 404);
                   return;
                 }
                 auto bytes = audio_bytes_for(id);
                 res.status = 200;
                 res.set_content(std::string(bytes.begin(), bytes.end()),
                                 "application/octet-stream");
               });

    server.Get(R"(/user/([^/]+)/contacts)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 std::lock_guard lock(mu);
                 if (req.matches[1].str() != state.identity.customer_id) {
                   reply_json(res, json{{"error", "unknown user"}}, 404);
                   return;
                 }
                 reply_json(res, body_contacts(state));
               });

    server.Get(R"(/api/gadgets/([^/]+)/([^/]+)/device-gadgets)",
               [this](const httplib::Request&, httplib::Response& res) {
                 std::lock_guard lock(mu);
                 reply_json(res, body_for_endpoint(state, "gadgets-device-gadgets"));
               });

    // fixed-path registry endpoints
    for (const auto& ep : client::registry()) {
      if (!ep.placeholders().empty()) continue;
      std::string id = ep.endpoint_id;
      std::string path = ep.path_template;
      auto q = path.find('?');
      if (q != std::string::npos) path = path.substr(0, q);
      server.Get(path, [this, id](const httplib::Request&, httplib::Response& res) {
        std::lock_guard lock(mu);
        reply_json(res, body_for_endpoint(state, id));
      });
    }

    // admin surface, outside the emulated API
    server.Get("/_mock/health", [](const httplib::Request&, httplib::Response& res) {
      reply_json(res, json{{"status", "ok"}});
    });
    server.Get("/_mock/state", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mu);
      json j;
      j["clock"] = state.clock_ms;
      json presence = json::object();
      for (const auto& si : state.interactions) presence[si.id] = si.presence().code();
      j["presence"] = std::move(presence);
      reply_json(res, j);
    });
    server.Post("/_mock/script", [this](const httplib::Request& req, httplib::Response& res) {
      json script = json::parse(req.body, nullptr, false);
      if (script.is_discarded()) {
        reply_json(res, json{{"error", "script is not JSON"}}, 400);
        return;
      }
      std::lock_guard lock(mu);
      auto trace = run_scenario(state, script);
      if (!trace.ok()) {
        reply_json(res, json{{"error", trace.error()}}, 400);
        return;
      }
      reply_json(res, json{{"trace", trace.value()}});
    });
    server.Post("/_mock/deletion", [this](const httplib::Request& req, httplib::Response& res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded()) {
        reply_json(res, json{{"error", "body is not JSON"}}, 400);
        return;
      }
      json script = json::array({json{{"op", "delete"},
                                      {"kind", body.value("kind", "")},
                                      {"target", body.contains("target") ? body.at("target") : json()}}});
      std::lock_guard lock(mu);
      auto trace = run_scenario(state, script);
      if (!trace.ok()) {
        reply_json(res, json{{"error", trace.error()}}, 400);
        return;
      }
      reply_json(res, trace.value().at(0));
    });
  }
};

MockServer::MockServer(MockState state) : impl_(std::make_unique<Impl>(std::move(state))) {
  impl_->setup_routes();
}

MockServer::~MockServer() { stop(); }

util::Result<int, std::string> MockServer::start(int port) {
  if (impl_->server.is_running()) return std::string("server already running");
  if (port == 0) {
    int bound = impl_->server.bind_to_any_port("127.0.0.1");
    if (bound <= 0) return std::string("could not bind an ephemeral port");
    port_ = bound;
  } else {
    if (!impl_->server.bind_to_port("127.0.0.1", port))
      return std::string("could not bind port " + std::to_string(port));
    port_ = port;
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void MockServer::stop() {
  if (impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

bool MockServer::running() const { return impl_->server.is_running(); }

std::string MockServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

util::Result<json, std::string> MockServer::run_script(const json& script) {
  std::lock_guard lock(impl_->mu);
  return run_scenario(impl_->state, script);
}

util::Result<std::vector<PresenceChange>, UnknownTarget> MockServer::apply(
    const DeletionOp& op) {
  std::lock_guard lock(impl_->mu);
  return apply_deletion(impl_->state, op);
}

MockState MockServer::state_copy() const {
  std::lock_guard lock(impl_->mu);
  return impl_->state;
}

}  // namespace aft::mock
