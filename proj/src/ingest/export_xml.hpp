#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "util/result.hpp"

namespace aft::ingest {

// One raw entry of an intercepting-proxy export. Everything is kept as it
// appeared; base64 payloads are decoded later, on demand.
struct ExportItem {
  std::size_t byte_offset = 0;  // offset of the item's '<' in the source
  std::string url;
  std::string method;
  int status = 0;
  std::string mimetype;
  bool response_base64 = false;
  std::string response_payload;
  std::optional<std::string> time_text;
};

struct ExportReject {
  std::size_t byte_offset = 0;
  std::string reason;
};

struct CaptureExport {
  std::vector<ExportItem> items;     // source order
  std::vector<ExportReject> rejects; // malformed or incomplete entries
  std::size_t total_items() const { return items.size() + rejects.size(); }
};

struct NotAnExport {
  std::string reason;
};

// Reads the proxy-export XML dialect: a root element holding repeated
// <item> elements with url/method/status/mimetype children and a <response>
// carrying a base64 attribute. Handles declarations, DOCTYPE, comments,
// CDATA and character entities. A malformed item is recorded as a reject
// with its byte offset and parsing resumes at the next item; only a missing
// root element is a hard error.
util::Result<CaptureExport, NotAnExport> parse_export(std::string_view xml);
util::Result<CaptureExport, NotAnExport> parse_export(std::span<const std::uint8_t> xml);

}  // namespace aft::ingest
