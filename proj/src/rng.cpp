#include "bayestab/rng.hpp"

#include <algorithm>

#include "bayestab/log_factorial.hpp"

namespace bayestab {

long long CounterRng::next_hypergeom(long long m, long long n, long long k) {
    const long long lo = std::max<long long>(0, k - n);
    const long long hi = std::min(k, m);
    if (lo >= hi) return lo;
    const double u = next_double();
    // pmf at the lower support point, then the ratio recurrence
    //   pmf(x+1)/pmf(x) = (m-x)(k-x) / ((x+1)(n-k+x+1)).
    double p = std::exp(log_choose(m, lo) + log_choose(n, k - lo) - log_choose(m + n, k));
    double cum = p;
    long long x = lo;
    while (cum <= u && x < hi) {
        p *= static_cast<double>((m - x) * (k - x)) /
             static_cast<double>((x + 1) * (n - k + x + 1));
        cum += p;
        ++x;
    }
    return x;
}

}  // namespace bayestab
