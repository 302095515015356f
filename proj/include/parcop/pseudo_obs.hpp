#pragma once

// Two-column data matrix and the rank transform to pseudo-observations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace parcop {

/// N x 2 data matrix; marginal scale is irrelevant downstream.
struct DataMatrix {
    std::vector<double> col1;
    std::vector<double> col2;

    std::size_t rows() const { return col1.size(); }
};

/// N x 2 normalized ranks, every entry strictly inside (0, 1).
struct PseudoSample {
    std::vector<double> u1;
    std::vector<double> u2;

    std::size_t rows() const { return u1.size(); }
};

inline void validate_data(const DataMatrix& x) {
    if (x.col1.size() != x.col2.size())
        throw std::invalid_argument("data matrix: columns differ in length");
    if (x.rows() < 2) throw std::invalid_argument("data matrix: need at least 2 rows");
    for (std::size_t i = 0; i < x.rows(); ++i)
        if (!std::isfinite(x.col1[i]) || !std::isfinite(x.col2[i]))
            throw std::domain_error("data matrix: non-finite value");
}

namespace detail {

/// Average ranks divided by (n+1). Ties are resolved to the mean rank of the
/// tied run; sorting is stable on the original index so the result is
/// deterministic.
inline std::vector<double> normalized_rank_column(const std::vector<double>& col) {
    const std::size_t n = col.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (col[a] != col[b]) return col[a] < col[b];
        return a < b;
    });
    std::vector<double> out(n);
    const double scale = 1.0 / (static_cast<double>(n) + 1.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && col[order[j + 1]] == col[order[i]]) ++j;
        // 1-based positions i+1 .. j+1 share the average rank
        const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        const double u = avg * scale;
        for (std::size_t k = i; k <= j; ++k) out[order[k]] = u;
        i = j + 1;
    }
    return out;
}

}  // namespace detail

/// u_ij = rank(x_ij within column j) / (N+1). Invariant under strictly
/// increasing transforms of either column.
inline PseudoSample normalized_ranks(const DataMatrix& x) {
    validate_data(x);
    PseudoSample p;
    p.u1 = detail::normalized_rank_column(x.col1);
    p.u2 = detail::normalized_rank_column(x.col2);
    return p;
}

inline void validate_pseudo_sample(const PseudoSample& u) {
    if (u.u1.size() != u.u2.size())
        throw std::invalid_argument("pseudo sample: columns differ in length");
    for (std::size_t i = 0; i < u.rows(); ++i) {
        const bool ok1 = u.u1[i] > 0.0 && u.u1[i] < 1.0;
        const bool ok2 = u.u2[i] > 0.0 && u.u2[i] < 1.0;
        if (!ok1 || !ok2)
            throw std::domain_error("pseudo sample: values must lie strictly in (0,1)");
    }
}

}  // namespace parcop
