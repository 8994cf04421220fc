#pragma once

#include <stdexcept>
#include <string>

#include "spinwire/integrator.hpp"

namespace spinwire {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the flat sectioned key/value format described in the README.
/// Unknown sections or keys are errors; so are type mismatches and any
/// violated config invariant (including the stability gate).
SimConfig parse_config_text(const std::string& text);

/// parse_config_text over the file contents; throws ConfigError if unreadable.
SimConfig parse_config(const std::string& path);

/// Reads a file into a string (used for the manifest config echo).
std::string read_file(const std::string& path);

}  // namespace spinwire
