#include "windsynth/config.hpp"

#include "windsynth/error.hpp"

#include <fstream>
#include <sstream>
#include <string_view>

namespace windsynth::config {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

std::map<std::string, std::string> parse_text(const std::string& text, const std::string& origin)
{
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string raw;
    for (std::size_t line = 1; std::getline(in, raw); ++line) {
        std::string_view s = raw;
        if (auto hash = s.find('#'); hash != std::string_view::npos)
            s = s.substr(0, hash);
        s = trim(s);
        if (s.empty())
            continue;
        const std::string where = origin + ":" + std::to_string(line);
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::InvalidConfig, where, "expected key = value");
        const std::string key(trim(s.substr(0, eq)));
        if (key.empty())
            throw Error(ErrorCode::InvalidConfig, where, "empty key");
        if (!out.emplace(key, std::string(trim(s.substr(eq + 1)))).second)
            throw Error(ErrorCode::InvalidConfig, where, "duplicate key '" + key + "'");
    }
    return out;
}

std::map<std::string, std::string> parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::Io, path, "cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

} // namespace windsynth::config
