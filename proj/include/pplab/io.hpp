#pragma once

#include <map>
#include <string>
#include <vector>

#include "pplab/processes.hpp"

namespace pplab {

// Columnar text format: header `d n seed process`, then one point per line,
// decimal coordinates with 17 significant digits.
void write_configuration(const std::string& path,
                         const PointConfiguration& config);
PointConfiguration read_configuration(const std::string& path);

std::string format_configuration(const PointConfiguration& config);
PointConfiguration parse_configuration(const std::string& text);

// Flat INI-style config: [section] headers, `key = value` lines, '#' comments.
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;
ConfigMap parse_config_text(const std::string& text);
ConfigMap read_config_file(const std::string& path);

// FNV-1a over the canonicalized (sorted, whitespace-normalized) config
std::uint64_t config_hash(const ConfigMap& cfg);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pplab
