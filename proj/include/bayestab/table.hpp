#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bayestab/errors.hpp"

namespace bayestab {

// Cross-classified nonnegative counts with a fixed shape ([R,C] or [2,2,2]).
// Cells are stored row-major (last index fastest). Margins are computed on
// first use and cached; instances are immutable after construction.
class ContingencyTable {
   public:
    ContingencyTable(std::vector<long long> counts, std::vector<int> shape);

    const std::vector<int>& shape() const { return shape_; }
    const std::vector<long long>& counts() const { return counts_; }
    long long total() const { return total_; }
    int rank() const { return static_cast<int>(shape_.size()); }

    long long at(std::span<const int> index) const;

    // 2-D margins (valid for rank-2 tables only).
    const std::vector<long long>& row_sums() const;
    const std::vector<long long>& col_sums() const;

   private:
    std::vector<int> shape_;
    std::vector<long long> counts_;
    long long total_;
    mutable std::vector<long long> row_sums_, col_sums_;
};

ContingencyTable validate_table(std::span<const long long> raw_counts, std::span<const int> shape);

// Point on the probability simplex with a shape.
class ProbabilityVector {
   public:
    ProbabilityVector(std::vector<double> values, std::vector<int> shape);

    const std::vector<int>& shape() const { return shape_; }
    const std::vector<double>& values() const { return values_; }
    std::span<const double> span() const { return values_; }

   private:
    std::vector<int> shape_;
    std::vector<double> values_;
};

ProbabilityVector plugin_probs(const ContingencyTable& table);

// Conditional and marginal Y-Z odds ratios of a [2,2,2] vector, indices
// (x, y, z) with x the stratum. Extended reals: 0 and +inf are admitted,
// 0/0 throws IndeterminateOddsRatioError.
struct OddsRatioSet {
    double theta_yz_given_x1;
    double theta_yz_given_x2;
    double theta_yz_marginal;
};

OddsRatioSet odds_ratios_222(const ProbabilityVector& p);

struct ConcordancePair {
    double pi_c;
    double pi_d;
};

// Exact concordant/discordant pair probabilities of a two-way table,
//   Pi_C = 2 sum_ij p_ij sum_{h>i,k>j} p_hk,  Pi_D with k<j.
ConcordancePair concordance_probs(const ProbabilityVector& p);
ConcordancePair concordance_probs(std::span<const double> p, int rows, int cols);

// Kendall's gamma = (Pi_C - Pi_D)/(Pi_C + Pi_D); nullopt when Pi_C + Pi_D = 0.
std::optional<double> kendall_gamma(const ProbabilityVector& p);
std::optional<double> kendall_gamma(std::span<const double> p, int rows, int cols);

// Integer concordant/discordant pair counts of a count table (no factor 2, no
// normalization; both cancel in gamma and in gamma comparisons). Used for
// exact tie handling during enumeration.
struct ConcordanceCounts {
    long long concordant;
    long long discordant;
};

ConcordanceCounts concordance_counts(std::span<const long long> cells, int rows, int cols);

// true iff gamma(a) >= gamma(b) with exact rational comparison; undefined
// gamma ranks below every defined value and ties with undefined.
bool gamma_geq(const ConcordanceCounts& a, const ConcordanceCounts& b);

}  // namespace bayestab
