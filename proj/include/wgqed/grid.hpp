#pragma once

#include <cstddef>
#include <vector>

namespace wgqed {

/// `count` evenly spaced points; both endpoints are hit exactly.
inline std::vector<double> linspace(double start, double stop, std::size_t count)
{
    std::vector<double> out(count);
    if (count == 0)
        return out;
    if (count == 1) {
        out[0] = start;
        return out;
    }
    // Fraction first, so dyadic fractions of the span land exactly.
    const double span = stop - start;
    const auto last = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = start + span * (static_cast<double>(i) / last);
    out.back() = stop;
    return out;
}

} // namespace wgqed
