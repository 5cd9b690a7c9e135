#pragma once

#include <functional>
#include <span>
#include <string>

#include "bayestab/table.hpp"

namespace bayestab {

// A named, total, deterministic event over probability vectors of a known
// shape. The raw-span form is the hot path for Monte Carlo kernels.
struct EventPredicate {
    std::string name;
    std::function<bool(std::span<const double>)> contains;

    bool operator()(std::span<const double> p) const { return contains(p); }
    bool operator()(const ProbabilityVector& p) const { return contains(p.span()); }
};

// Simpson's paradox event on [2,2,2]: both conditional Y-Z odds ratios
// strictly < 1 and the marginal strictly > 1. Indeterminate (0/0) odds
// ratios make the event false.
bool simpson_contains(std::span<const double> p8);
EventPredicate simpson_event();

// |log theta_YZ|X=s| <= eps for both strata (inclusive); odds ratio 0, inf,
// or 0/0 makes the event false.
bool epsilon_null_contains(std::span<const double> p8, double exp_neg_eps, double exp_pos_eps);
EventPredicate epsilon_null_event(double epsilon);

// Pi_C >= Pi_D on a two-way table (gamma >= 0 where defined; true when both
// are zero, by the inclusive inequality).
bool concordance_contains(std::span<const double> p, int rows, int cols);
EventPredicate concordance_event(int rows, int cols);

// Column distributions stochastically increasing in the row index: for every
// adjacent row pair and cutpoint j, CDF_i(j) >= CDF_{i+1}(j). Throws
// ZeroRowMassError if a row has zero mass.
bool positive_dependence_contains(std::span<const double> p, int rows, int cols);
EventPredicate positive_dependence_event(int rows, int cols);

// Logical complement with the same name decoration; used for the
// complement-consistency identity tests.
EventPredicate complement(const EventPredicate& e);

}  // namespace bayestab
