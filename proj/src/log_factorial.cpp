#include "bayestab/log_factorial.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace bayestab {

namespace {

constexpr long long kTableSize = 1 << 16;

const std::vector<double>& table() {
    static const std::vector<double> t = [] {
        std::vector<double> v(kTableSize);
        v[0] = 0.0;
        for (long long i = 1; i < kTableSize; ++i) v[i] = std::lgamma(static_cast<double>(i) + 1.0);
        return v;
    }();
    return t;
}

}  // namespace

double log_factorial(long long n) {
    if (n < 0) return -std::numeric_limits<double>::infinity();
    if (n < kTableSize) return table()[n];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_choose(long long n, long long k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

}  // namespace bayestab
