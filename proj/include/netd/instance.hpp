#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netd/delay_function.hpp"
#include "netd/problem.hpp"

namespace netd {

enum class RunMode { deadline, delay };

const char* mode_name(RunMode m);
RunMode mode_from_name(const std::string& name);

// One online request as it appears in an instance file. Exactly one of
// `deadline` and `delay` is set, matching the spec's mode.
struct RequestSpec {
  int id = 0;
  RequestPayload payload;
  Rational release;
  std::optional<Rational> deadline;
  std::optional<DelayFunction> delay;
};

// A complete benchmark instance: the offline problem plus the online
// request sequence. Serialized as a versioned JSON document with every
// rational written as a canonical "p/q" string, so files round-trip
// bit for bit.
struct InstanceSpec {
  std::string name;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::deadline;
  ProblemInstance instance;
  std::vector<RequestSpec> requests;
};

// Structural checks: payloads fit the instance, releases nondecreasing in
// file order, deadline at or after release, delay curves anchored at the
// release. Throws input_error on the first violation.
void validate_spec(const InstanceSpec& spec);

std::string spec_to_text(const InstanceSpec& spec);
InstanceSpec spec_from_text(const std::string& text);

void save_spec(const InstanceSpec& spec, const std::string& path);
InstanceSpec load_spec(const std::string& path);

}  // namespace netd
