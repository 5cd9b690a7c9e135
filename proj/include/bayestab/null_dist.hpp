#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "bayestab/errors.hpp"
#include "bayestab/rng.hpp"
#include "bayestab/table.hpp"

namespace bayestab {

// log of the hypergeometric pmf C(m,x) C(n,k-x) / C(m+n,k); -inf out of
// support rather than an error, so sums over rectangular index boxes work.
double hypergeom_log_pmf(long long x, long long m, long long n, long long k);

// Fixed margins of one 2x2 stratum: rows (n_{s1+}, n_{s2+}), cols (n_{s+1}, n_{s+2}).
struct StratumMargins {
    long long row1, row2, col1, col2;
    long long total() const { return row1 + row2; }
};

// Margins of a stratified 2x2x2 table, one entry per stratum.
struct StratifiedMargins {
    StratumMargins stratum[2];

    static StratifiedMargins from_table(const ContingencyTable& table);
};

// One point of the stratified conditional space: the free cells (N_111, N_211).
struct StratifiedPoint {
    long long n111, n211;
    bool operator==(const StratifiedPoint&) const = default;
};

// Reconstructs the full 2x2x2 table determined by a point and the margins.
ContingencyTable stratified_point_table(const StratifiedPoint& pt, const StratifiedMargins& m);

// All (x, y) with x in stratum 1's admissible range and y in stratum 2's,
// lexicographic order.
std::vector<StratifiedPoint> enumerate_stratified_space(const StratifiedMargins& m);

// Product of the per-stratum hypergeometric pmfs; 0 outside the support.
double stratified_null_pmf(const StratifiedPoint& pt, const StratifiedMargins& m);

// Fixed row and column sums of an RxC table.
struct RxCMargins {
    std::vector<long long> rows, cols;

    static RxCMargins from_table(const ContingencyTable& table);
    void validate() const;
    long long total() const;
    int R() const { return static_cast<int>(rows.size()); }
    int C() const { return static_cast<int>(cols.size()); }
};

// log pmf of the fixed-both-margins multivariate hypergeometric,
//   log[ prod_i r_i! prod_j c_j! / ( n! prod_ij N_ij! ) ].
double rxc_log_pmf(const ContingencyTable& table);
double rxc_log_pmf(std::span<const long long> cells, const RxCMargins& m);

// Margin-constant part of the log pmf; subtract sum of log N_ij! per table.
double rxc_log_pmf_margin_term(const RxCMargins& m);

namespace detail {

// Enumerates completions of rows [row..R-1] given current column remainders,
// invoking visit(cells) for every full table. cells and colrem are scratch
// buffers mutated in place and restored on return.
template <class Visit>
uint64_t rxc_enumerate_rows(const RxCMargins& m, std::vector<long long>& cells, int row,
                            std::vector<long long>& colrem, Visit&& visit) {
    const int R = m.R(), C = m.C();
    if (row == R - 1) {
        for (int j = 0; j < C; ++j) cells[row * C + j] = colrem[j];
        visit(std::span<const long long>(cells));
        return 1;
    }
    // tails[j] = sum_{k>j} colrem[k]; cells right of j are untouched while
    // filling cell j, so these stay valid across the whole row.
    std::vector<long long> tails(C, 0);
    for (int j = C - 2; j >= 0; --j) tails[j] = tails[j + 1] + colrem[j + 1];

    uint64_t count = 0;
    auto fill_cell = [&](auto&& self, int j, long long rowrem) -> void {
        if (j == C - 1) {
            if (rowrem > colrem[j]) return;
            cells[row * C + j] = rowrem;
            colrem[j] -= rowrem;
            count += rxc_enumerate_rows(m, cells, row + 1, colrem, visit);
            colrem[j] += rowrem;
            return;
        }
        const long long lo = std::max<long long>(0, rowrem - tails[j]);
        const long long hi = std::min(rowrem, colrem[j]);
        for (long long x = lo; x <= hi; ++x) {
            cells[row * C + j] = x;
            colrem[j] -= x;
            self(self, j + 1, rowrem - x);
            colrem[j] += x;
        }
    };
    fill_cell(fill_cell, 0, m.rows[row]);
    return count;
}

}  // namespace detail

// Streams every table with the given margins through visit(cells) exactly
// once, in deterministic lexicographic order; returns the table count.
// cells are row-major, valid only for the duration of the call.
template <class Visit>
uint64_t rxc_enumerate(const RxCMargins& m, Visit&& visit) {
    m.validate();
    std::vector<long long> cells(static_cast<size_t>(m.R()) * m.C(), 0);
    std::vector<long long> colrem = m.cols;
    return detail::rxc_enumerate_rows(m, cells, 0, colrem, visit);
}

// The distinct first-row fillings, in lexicographic order. Each one roots an
// independent enumeration subtree; this is the unit of parallel work split.
std::vector<std::vector<long long>> first_row_compositions(const RxCMargins& m);

// Enumerates the subtree under a fixed first row.
template <class Visit>
uint64_t rxc_enumerate_under_first_row(const RxCMargins& m, std::span<const long long> first_row,
                                       Visit&& visit) {
    const int C = m.C();
    std::vector<long long> cells(static_cast<size_t>(m.R()) * C, 0);
    std::vector<long long> colrem = m.cols;
    for (int j = 0; j < C; ++j) {
        cells[j] = first_row[j];
        colrem[j] -= first_row[j];
    }
    if (m.R() == 1) {
        visit(std::span<const long long>(cells));
        return 1;
    }
    return detail::rxc_enumerate_rows(m, cells, 1, colrem, visit);
}

// Number of tables with the given margins, by dynamic programming over
// column-remainder states; never materializes tables.
uint64_t rxc_count(const RxCMargins& m);

// One exact draw from the fixed-margins multivariate hypergeometric by
// sequential conditional hypergeometric cell fills (row by row).
std::vector<long long> rxc_sample_cells(const RxCMargins& m, CounterRng& rng);
ContingencyTable rxc_sample(const RxCMargins& m, CounterRng& rng);

}  // namespace bayestab
