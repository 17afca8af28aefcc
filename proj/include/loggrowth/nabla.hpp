#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "loggrowth/series.hpp"

/*
 * Rank-mu modules with connection over truncated series, and a dense
 * formal solver for horizontal sections.
 *
 * The connection acts on a row of basis vectors, so a horizontal section
 * with coordinate column g satisfies the ODE  g' = -G g.  Expanding in
 * powers of X gives the recursion
 *
 *     g_{m+1} = -(G g)_m / (m+1),
 *
 * which is run from the identity initial condition; the columns form a
 * fundamental solution basis.  For the family matrix (0, -f; 0, 0) the
 * second column is (antiderivative of f, 1): the solver exists to
 * cross-validate that closed form at low degree, not for asymptotics.
 *
 * The generic-point pullback needs only per-coefficient data: the
 * coefficient at (X-t)^{n+1} is recenter_coeff(f, n) divided by (n+1),
 * which shifts every term valuation down by v_p(n+1).
 */

namespace loggrowth {

/// Square matrix of dense series entries, all truncated at degree N.
struct ConnectionMatrix {
    std::uint64_t mu = 0;
    std::uint64_t degree_bound = 0; // N
    std::vector<std::vector<DenseSeries>> entries; // entries[i][j], each of length N+1

    static ConnectionMatrix zero(std::uint64_t mu, std::uint64_t N) {
        ConnectionMatrix G;
        G.mu = mu;
        G.degree_bound = N;
        G.entries.assign(mu, std::vector<DenseSeries>(mu, DenseSeries(N + 1, Rational(0))));
        return G;
    }
};

/// Fundamental solution basis: columns[j][i] is entry i of column j, degree <= N+1.
struct SolutionBasis {
    std::vector<std::vector<DenseSeries>> columns;
};

// Dense degree guard: entries are materialized as length-(N+1) vectors.
inline constexpr std::uint64_t kMaxDenseDegree = 1ull << 22;

/*
 * The family's connection matrix (0, -f; 0, 0) with -f materialized
 * densely through degree N.  Support indices of f beyond N are dropped;
 * every support index <= N is small enough to carry an exact coefficient.
 */
inline ConnectionMatrix family_connection(const FamilyParams& params, std::uint64_t N) {
    if (N > kMaxDenseDegree)
        throw std::invalid_argument("family_connection: dense degree bound too large");
    ConnectionMatrix G = ConnectionMatrix::zero(2, N);
    const SparseValSeries f = build_f(params);
    for (const SparseTerm& t : f.terms) {
        if (t.exponent > N) break;
        if (!t.coefficient)
            throw std::logic_error("family_connection: missing exact coefficient at low degree");
        G.entries[0][1][t.exponent.convert_to<std::size_t>()] = -*t.coefficient;
    }
    return G;
}

/*
 * Runs the horizontality recursion column-by-column from the identity.
 * Exact rational arithmetic; zero entries of G are skipped, so sparse
 * connection matrices solve in time proportional to their support.
 */
inline SolutionBasis solve_horizontal(const ConnectionMatrix& G) {
    const std::uint64_t mu = G.mu, N = G.degree_bound;

    // nonzero terms of each entry, gathered once
    struct Term { std::size_t d; Rational c; };
    std::vector<std::vector<std::vector<Term>>> sparse(mu, std::vector<std::vector<Term>>(mu));
    for (std::uint64_t i = 0; i < mu; ++i)
        for (std::uint64_t k = 0; k < mu; ++k)
            for (std::size_t d = 0; d < G.entries[i][k].size(); ++d)
                if (G.entries[i][k][d] != 0) sparse[i][k].push_back({d, G.entries[i][k][d]});

    SolutionBasis basis;
    basis.columns.assign(mu, std::vector<DenseSeries>(mu, DenseSeries(N + 2, Rational(0))));
    for (std::uint64_t j = 0; j < mu; ++j) basis.columns[j][j][0] = 1;

    for (std::uint64_t j = 0; j < mu; ++j) {
        auto& g = basis.columns[j];
        for (std::uint64_t m = 0; m <= N; ++m) {
            for (std::uint64_t i = 0; i < mu; ++i) {
                Rational conv(0);
                for (std::uint64_t k = 0; k < mu; ++k)
                    for (const Term& t : sparse[i][k]) {
                        if (t.d > m) break;
                        if (g[k][m - t.d] != 0) conv += t.c * g[k][m - t.d];
                    }
                if (conv != 0) g[i][m + 1] = -conv / Rational(m + 1);
            }
        }
    }
    return basis;
}

/// Checks g' + G g = 0 through degree N for every column of the basis.
inline bool horizontal_residual_ok(const ConnectionMatrix& G, const SolutionBasis& basis) {
    const std::uint64_t mu = G.mu, N = G.degree_bound;
    for (std::uint64_t j = 0; j < mu; ++j) {
        const auto& g = basis.columns[j];
        for (std::uint64_t m = 0; m <= N; ++m)
            for (std::uint64_t i = 0; i < mu; ++i) {
                Rational r = Rational(m + 1) * g[i][m + 1];
                for (std::uint64_t k = 0; k < mu; ++k)
                    for (std::size_t d = 0; d <= m && d < G.entries[i][k].size(); ++d)
                        if (G.entries[i][k][d] != 0 && g[k][m - d] != 0)
                            r += G.entries[i][k][d] * g[k][m - d];
                if (r != 0) return false;
            }
    }
    return true;
}

/*
 * Coefficient data of the generic solution at (X-t)^{n+1} for each
 * requested n: the recentered sum divided by (n+1).  Indices beyond the
 * truncated support yield an empty coefficient.
 */
inline std::vector<GenericCoeff> generic_pullback_coeffs(const FamilyParams& params,
                                                         const std::vector<BigInt>& n_list) {
    const SparseValSeries f = build_f(params);
    std::vector<GenericCoeff> out;
    out.reserve(n_list.size());
    for (const BigInt& n : n_list) {
        GenericCoeff c;
        if (n > f.truncation_bound) {
            c.n = n;
            c.r_range = params.r_max;
        } else {
            c = recenter_coeff(f, n, params);
        }
        const std::int64_t shift = vp_int(n + 1, params.p).value();
        for (TTerm& t : c.t_terms) t.valuation -= shift;
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace loggrowth
