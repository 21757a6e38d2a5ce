// Scenario configuration (JSON), result artifacts (CSV + manifest) and the
// command-line front end.
//
// Parsing is strict: unknown keys are rejected and every validation error
// names the offending field path. Artifact emission is deterministic; two
// runs of the same config and seed produce byte-identical files.
#pragma once

#include <string>

#include "srts/simkit.hpp"

namespace srts {

// Parses a scenario from JSON text. `origin` labels error messages.
Scenario parse_scenario_json(const std::string& text,
                             const std::string& origin = "<string>");
Scenario parse_scenario_file(const std::string& path);

// Canonical single-line JSON with every field populated. Round-trips through
// parse_scenario_json.
std::string serialize_scenario(const Scenario& s);

// FNV-1a 64 over the canonical serialization.
std::uint64_t config_hash(const Scenario& s);

// Writes metrics.csv, density.csv, routes.csv, channels_t<step>.csv and
// manifest.txt under out_dir (created if missing).
void emit_artifacts(const RunOutput& out, const Scenario& s,
                    const std::string& out_dir);

// Formats a double the way every artifact does: shortest form with six
// significant digits.
std::string format_metric(double v);

// CLI entry point: subcommands run, route, compare, validate.
// Exit codes: 0 success, 1 usage/config error, 2 runtime failure.
int cli_main(int argc, const char* const* argv);

}  // namespace srts
