#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "model/artifacts.hpp"
#include "util/result.hpp"
#include "util/url.hpp"

namespace aft::client {

// One row of the discovered-API surface. Path templates carry typed
// placeholders from a fixed set ({device_serial}, {device_type}, {list_id},
// {user_id}, {utterance_id}); the gadgets row keeps two untyped placeholders
// because the source material never defines those segments.
struct EndpointDescriptor {
  std::string endpoint_id;
  std::string host;
  std::string path_template;
  model::ArtifactCategory category = model::ArtifactCategory::Uncategorized;
  bool typed_parser = false;  // analyzed endpoint with a typed schema
  bool json_response = true;  // false only for utterance audio
  std::string notes;

  std::vector<std::string> placeholders() const;
  nlohmann::json to_json() const;
};

// Complete, duplicate-free, stable order. The row count is a golden
// constant checked by tests.
const std::vector<EndpointDescriptor>& registry();

const EndpointDescriptor* find_endpoint(std::string_view endpoint_id);

struct MissingBinding {
  std::string name;
};

// Renders path + query with every placeholder bound.
util::Result<std::string, MissingBinding> render_path(
    const EndpointDescriptor& ep, const std::map<std::string, std::string>& bindings);

struct UrlMatch {
  std::string endpoint_id;
  std::map<std::string, std::string> bindings;
};

// Maps a captured URL back to a registry endpoint by path shape (host is
// deliberately ignored: captures may come from either regional domain or
// from a fixture service). Query parameters contribute bindings.
std::optional<UrlMatch> match_url(const util::Url& url);
std::optional<UrlMatch> match_url(std::string_view raw_url);

}  // namespace aft::client
