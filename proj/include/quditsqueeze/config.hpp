#pragma once

// Run configuration file handling. One JSON document describes a single run
// (mirroring ProtocolConfig), the decoherence channel coefficients, the CSV
// precision, and optional sweep axes for the sweep/peak subcommands. The
// resolved form is echoed into every CSV header so each output is
// reproducible from its own metadata.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quditsqueeze/protocols.hpp"

namespace qsq {

struct SweepAxes {
  std::vector<SpinQuantum> f;
  std::vector<Prep> prep;
  std::vector<double> od;
};

struct RunConfigFile {
  ProtocolConfig base;
  int precision = 9;  // significant digits in CSV output
  std::optional<SweepAxes> sweep;
};

// Build the typed config from parsed JSON. Unknown enum names, out-of-range
// values and malformed fields raise ConfigError.
RunConfigFile parse_config(const nlohmann::json& doc);

// Read and parse a config file. IO and JSON syntax problems raise
// std::runtime_error, semantic problems ConfigError.
RunConfigFile load_config(const std::string& path);

// Resolved echo of the config, defaults filled in.
nlohmann::json config_to_json(const RunConfigFile& cfg);

// Locale-independent shortest-faithful formatting at the given number of
// significant digits.
std::string format_double(double value, int precision);

// Spin states serialize as an array of [re, im] pairs ordered m = f ... -f.
nlohmann::json state_to_json(const SpinState& s);
SpinState state_from_json(const nlohmann::json& doc, SpinQuantum f);

}  // namespace qsq
