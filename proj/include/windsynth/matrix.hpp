#pragma once

#include <cassert>
#include <cstddef>
#include <span>

namespace windsynth {

// Read-only row-major view.
struct MatrixView {
    std::span<const double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::span<const double> row(std::size_t i) const noexcept
    {
        assert(i < rows);
        return data.subspan(i * cols, cols);
    }
};

} // namespace windsynth
