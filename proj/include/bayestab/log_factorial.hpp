#pragma once

namespace bayestab {

// log(n!) from a process-wide table (built once, 0..65535); lgamma beyond.
double log_factorial(long long n);

// log C(n, k); -inf outside 0 <= k <= n.
double log_choose(long long n, long long k);

}  // namespace bayestab
