#include "bayestab/events.hpp"

#include <cmath>

namespace bayestab {

bool simpson_contains(std::span<const double> p) {
    // flat index = 4x + 2y + z; theta < 1 compared as cross-products, which
    // handles 0 and inf without special cases and makes 0/0 fail both strict
    // inequalities (event false, as decided).
    const double n1 = p[0] * p[3], d1 = p[1] * p[2];
    const double n2 = p[4] * p[7], d2 = p[5] * p[6];
    const double m11 = p[0] + p[4], m12 = p[1] + p[5];
    const double m21 = p[2] + p[6], m22 = p[3] + p[7];
    return n1 < d1 && n2 < d2 && m11 * m22 > m12 * m21;
}

EventPredicate simpson_event() {
    return EventPredicate{"simpson", [](std::span<const double> p) { return simpson_contains(p); }};
}

bool epsilon_null_contains(std::span<const double> p, double exp_neg_eps, double exp_pos_eps) {
    const double n1 = p[0] * p[3], d1 = p[1] * p[2];
    const double n2 = p[4] * p[7], d2 = p[5] * p[6];
    if (!(n1 > 0.0) || !(d1 > 0.0) || !(n2 > 0.0) || !(d2 > 0.0)) return false;
    return n1 >= d1 * exp_neg_eps && n1 <= d1 * exp_pos_eps &&  //
           n2 >= d2 * exp_neg_eps && n2 <= d2 * exp_pos_eps;
}

EventPredicate epsilon_null_event(double epsilon) {
    if (!(epsilon > 0.0)) throw InputError("epsilon_null_event requires epsilon > 0");
    const double lo = std::exp(-epsilon), hi = std::exp(epsilon);
    return EventPredicate{"epsilon-null(eps=" + std::to_string(epsilon) + ")",
                          [lo, hi](std::span<const double> p) {
                              return epsilon_null_contains(p, lo, hi);
                          }};
}

bool concordance_contains(std::span<const double> p, int rows, int cols) {
    const ConcordancePair cp = concordance_probs(p, rows, cols);
    return cp.pi_c >= cp.pi_d;
}

EventPredicate concordance_event(int rows, int cols) {
    return EventPredicate{"concordance", [rows, cols](std::span<const double> p) {
                              return concordance_contains(p, rows, cols);
                          }};
}

bool positive_dependence_contains(std::span<const double> p, int rows, int cols) {
    // compare running conditional CDFs of adjacent rows at every cutpoint
    for (int i = 0; i + 1 < rows; ++i) {
        double mass_i = 0.0, mass_n = 0.0;
        for (int j = 0; j < cols; ++j) {
            mass_i += p[i * cols + j];
            mass_n += p[(i + 1) * cols + j];
        }
        if (!(mass_i > 0.0) || !(mass_n > 0.0))
            throw ZeroRowMassError("positive dependence undefined for zero row mass");
        double acc_i = 0.0, acc_n = 0.0;
        for (int j = 0; j + 1 < cols; ++j) {
            acc_i += p[i * cols + j];
            acc_n += p[(i + 1) * cols + j];
            // CDF_i(j) >= CDF_{i+1}(j), cross-multiplied to avoid divisions
            if (acc_i * mass_n < acc_n * mass_i) return false;
        }
    }
    return true;
}

EventPredicate positive_dependence_event(int rows, int cols) {
    return EventPredicate{"positive-dependence", [rows, cols](std::span<const double> p) {
                              return positive_dependence_contains(p, rows, cols);
                          }};
}

EventPredicate complement(const EventPredicate& e) {
    auto inner = e.contains;
    return EventPredicate{"not(" + e.name + ")",
                          [inner](std::span<const double> p) { return !inner(p); }};
}

}  // namespace bayestab
