#pragma once

#include <cstddef>
#include <span>

namespace wsdt {

/// Pairwise (tree) summation: O(log n) worst-case accumulation error instead
/// of O(n) for sequential sums. Used wherever a total is part of a contract.
inline double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 32) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

inline bool nearly_equal_rel(double a, double b, double rel_tol) {
    const double diff = a > b ? a - b : b - a;
    const double mag = (a < 0 ? -a : a) > (b < 0 ? -b : b) ? (a < 0 ? -a : a) : (b < 0 ? -b : b);
    return diff <= rel_tol * (mag > 1.0 ? mag : 1.0);
}

}  // namespace wsdt
