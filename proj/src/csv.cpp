#include "windsynth/csv.hpp"
#include "windsynth/error.hpp"

#include <charconv>
#include <cmath>

namespace windsynth::csv {

Reader::Reader(const std::string& path)
    : path_(path)
    , in_(path)
{
    if (!in_) {
        throw Error(ErrorCode::Io, path, "cannot open file");
    }
}

bool Reader::next(std::vector<std::string_view>& fields)
{
    while (std::getline(in_, buffer_)) {
        ++line_no_;
        if (!buffer_.empty() && buffer_.back() == '\r') {
            buffer_.pop_back();
        }
        if (buffer_.empty()) {
            continue;
        }
        split(buffer_, fields);
        return true;
    }
    return false;
}

std::string Reader::where() const
{
    return path_ + ":" + std::to_string(line_no_);
}

void split(std::string_view line, std::vector<std::string_view>& fields)
{
    fields.clear();
    std::size_t begin = 0;
    while (true) {
        const std::size_t comma = line.find(',', begin);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(begin));
            return;
        }
        fields.push_back(line.substr(begin, comma - begin));
        begin = comma + 1;
    }
}

std::optional<double> parse_double(std::string_view text) noexcept
{
    if (text.empty()) {
        return std::nullopt;
    }
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') {
        ++first;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::string format_double(double value)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void expect_header(const Reader& reader, const std::vector<std::string_view>& fields,
    const std::vector<std::string_view>& expected)
{
    if (fields != expected) {
        std::string want;
        for (auto f : expected) {
            want += want.empty() ? "" : ",";
            want += f;
        }
        throw Error(ErrorCode::MalformedRow, reader.where(), "expected header `" + want + "`");
    }
}

} // namespace windsynth::csv
