#pragma once

#include <map>
#include <string>

namespace windsynth::config {

/// Flat `key = value` file. Blank lines and `#` comments are ignored; keys
/// are case-sensitive and may appear once. Throws InvalidConfig.
std::map<std::string, std::string> parse_file(const std::string& path);
std::map<std::string, std::string> parse_text(const std::string& text, const std::string& origin = "config");

} // namespace windsynth::config
