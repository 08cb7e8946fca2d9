#pragma once

#include <ris/experiment.hpp>

#include <istream>
#include <stdexcept>
#include <string>

namespace ris {

/// Malformed or invalid configuration. The message carries source and line.
class config_error : public std::runtime_error
{
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Applies one `key = value` setting. Throws config_error for unknown keys or
/// unparsable values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key = value` lines with `#` comments over the defaults, then validates.
ExperimentConfig parse_config(std::istream& is, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Every key with its resolved value, in the file format accepted by parse_config.
std::string describe_config(const ExperimentConfig& cfg);

} // namespace ris
