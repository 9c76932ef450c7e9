#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace windsynth::csv {

// Line-oriented reader for the comma-separated interchange files. Fields are
// views into the current line and are invalidated by the next call to next().
class Reader {
public:
    explicit Reader(const std::string& path);

    bool next(std::vector<std::string_view>& fields);
    std::size_t line() const noexcept { return line_no_; }
    const std::string& path() const noexcept { return path_; }
    // "path:line" of the row most recently returned by next().
    std::string where() const;

private:
    std::string path_;
    std::ifstream in_;
    std::string buffer_;
    std::size_t line_no_ = 0;
};

void split(std::string_view line, std::vector<std::string_view>& fields);

// Finite decimal number, whole field consumed.
std::optional<double> parse_double(std::string_view text) noexcept;

// Shortest text that parses back to the identical double.
std::string format_double(double value);

// Header check that throws MalformedRow at line 1 on mismatch.
void expect_header(const Reader& reader, const std::vector<std::string_view>& fields,
    const std::vector<std::string_view>& expected);

} // namespace windsynth::csv
