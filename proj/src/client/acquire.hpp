#pragma once

#include "casefile/casefile.hpp"
#include "client/fetch.hpp"

namespace aft::client {

struct TransportError {
  std::string detail;
};

struct AcquireOutcome {
  casefile::EvidenceCase evidence;
  std::size_t fetches = 0;
  std::size_t http_failures = 0;
  std::size_t schema_errors = 0;
  std::vector<std::string> warnings;
};

// Sweeps the whole registry against one session: discovery endpoints first
// (bootstrap, devices, lists, activities) to learn the bindings, then every
// endpoint in registry order, fanning out per device, per list and per
// utterance. Raw records are captured for everything, parse failures
// included; only total transport failure aborts.
util::Result<AcquireOutcome, TransportError> acquire_case(
    const Session& session, const std::map<std::string, std::string>& extra_bindings = {});

}  // namespace aft::client
