#pragma once

#include "windsynth/error.hpp"
#include "windsynth/time_axis.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace test_support {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("windsynth_" + tag + "_" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

inline std::string write_file(const TempDir& dir, const std::string& name, const std::string& body)
{
    auto p = dir.file(name);
    std::ofstream(p, std::ios::binary) << body;
    return p;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<double> uniform_series(std::mt19937_64& rng, std::size_t n, double lo = 0.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> x(n);
    for (auto& v : x)
        v = d(rng);
    return x;
}

inline double rel_err(double a, double b)
{
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

template <class F>
windsynth::ErrorCode code_of(F&& f)
{
    try {
        f();
    } catch (const windsynth::Error& e) {
        return e.code();
    }
    FAIL("expected windsynth::Error");
    return windsynth::ErrorCode::Io;
}

} // namespace test_support
