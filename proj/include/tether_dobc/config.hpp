#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tether_dobc/simengine.hpp"

namespace tether_dobc {

/// `section.key=value` overrides applied on top of a config file.
/// A bare `estimator=<name>` is shorthand for `estimator.kind=<name>`.
using Overrides = std::vector<std::string>;

/// Parses an INI-style scenario file. `scenario.kind` selects the preset that
/// supplies defaults; `vehicle.mass`, `tether.stiffness` and
/// `tether.natural_length` must always be given. Errors are ConfigError with
/// the offending field and, where known, the line number.
ScenarioConfig parse_config(std::istream& in, const Overrides& overrides = {},
                            const std::string& source = "<config>");

ScenarioConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

/// Writes every field of the config so that parsing it back reproduces it.
void dump_config(const ScenarioConfig& cfg, std::ostream& out);

}  // namespace tether_dobc
