#include "semiperm/modp_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <cblas.h>

#include "semiperm/ring.hpp"

namespace semiperm {

namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    return static_cast<std::uint32_t>(pow_mod(a, p - 2, p));
}

// Nullspace from an echelon form: pivot row j has its pivot at pivots[j] and
// row entries u(j, c) for c > pivots[j].
template <class RowAt>
NullspaceResult back_substitute(std::size_t cols, const std::vector<std::size_t>& pivots, RowAt u, std::uint32_t p) {
    NullspaceResult out;
    out.rank = pivots.size();
    std::vector<char> is_pivot(cols, 0);
    for (std::size_t c : pivots) is_pivot[c] = 1;
    std::vector<std::uint32_t> pivot_inv(pivots.size());
    for (std::size_t j = 0; j < pivots.size(); ++j) pivot_inv[j] = inv_mod(u(j, pivots[j]), p);
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<std::uint32_t> x(cols, 0);
        x[f] = 1;
        for (std::size_t jj = pivots.size(); jj-- > 0;) {
            const std::size_t c0 = pivots[jj];
            std::uint64_t s = 0;
            for (std::size_t c = c0 + 1; c < cols; ++c) {
                if (x[c] == 0) continue;
                s = (s + static_cast<std::uint64_t>(u(jj, c)) * x[c]) % p;
            }
            x[c0] = static_cast<std::uint32_t>((p - s) % p * static_cast<std::uint64_t>(pivot_inv[jj]) % p);
        }
        out.basis.push_back(std::move(x));
    }
    return out;
}

// v mod p into [0, p), for |v| < 2^53.
inline double reduce(double v, double p, double inv_p) {
    double r = v - p * std::floor(v * inv_p);
    if (r < 0) r += p;
    if (r >= p) r -= p;
    return r;
}

} // namespace

NullspaceResult nullspace_mod_scalar(ModMatrix a, std::uint32_t p) {
    const std::size_t m = a.rows;
    const std::size_t n = a.cols;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < m; ++c) {
        std::size_t piv = rank;
        while (piv < m && a(piv, c) == 0) ++piv;
        if (piv == m) continue;
        if (piv != rank) std::swap_ranges(&a(piv, 0), &a(piv, 0) + n, &a(rank, 0));
        const std::uint64_t inv = inv_mod(a(rank, c), p);
        for (std::size_t i = rank + 1; i < m; ++i) {
            if (a(i, c) == 0) continue;
            const std::uint64_t f = p - a(i, c) * inv % p;
            for (std::size_t j = c; j < n; ++j) a(i, j) = static_cast<std::uint32_t>((a(i, j) + f * a(rank, j)) % p);
        }
        pivots.push_back(c);
        ++rank;
    }
    return back_substitute(n, pivots, [&a](std::size_t i, std::size_t j) { return a(i, j); }, p);
}

NullspaceResult nullspace_mod(ModMatrix a, std::uint32_t p) {
    if (p < 2 || !is_prime(p)) throw std::invalid_argument("nullspace_mod: modulus must be prime");
    if (p >= kBlasPrimeLimit || a.rows < 64 || a.cols < 64) return nullspace_mod_scalar(std::move(a), p);

    const std::size_t m = a.rows;
    const std::size_t n = a.cols;
    const double dp = p;
    const double inv_p = 1.0 / dp;
    std::vector<double> w(a.data.begin(), a.data.end());
    auto at = [&](std::size_t i, std::size_t j) -> double& { return w[i * n + j]; };
    auto swap_rows = [&](std::size_t i, std::size_t k) {
        if (i != k) std::swap_ranges(&at(i, 0), &at(i, 0) + n, &at(k, 0));
    };

    // Products of two residues summed over kPanel terms stay below 2^53.
    constexpr std::size_t kPanel = 64;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    std::vector<double> lbuf;
    for (std::size_t c0 = 0; c0 < n && rank < m; c0 += kPanel) {
        const std::size_t c1 = std::min(n, c0 + kPanel);
        const std::size_t k0 = rank;
        // Panel: eliminate inside columns [c0, c1), storing multipliers in
        // the pivot columns below each pivot.
        std::vector<std::size_t> panel_pivots;
        for (std::size_t c = c0; c < c1 && rank < m; ++c) {
            std::size_t piv = rank;
            while (piv < m && at(piv, c) == 0) ++piv;
            if (piv == m) continue;
            swap_rows(piv, rank);
            const double inv = inv_mod(static_cast<std::uint32_t>(at(rank, c)), p);
            const double* prow = &at(rank, 0);
            for (std::size_t i = rank + 1; i < m; ++i) {
                double* row = &at(i, 0);
                if (row[c] == 0) continue;
                const double l = reduce(row[c] * inv, dp, inv_p);
                row[c] = l;
                for (std::size_t j = c + 1; j < c1; ++j) row[j] = reduce(row[j] - l * prow[j], dp, inv_p);
            }
            panel_pivots.push_back(c);
            pivots.push_back(c);
            ++rank;
        }
        const std::size_t np = panel_pivots.size();
        if (np == 0 || c1 == n) continue;
        const std::size_t tail = n - c1;
        // U12: forward substitution among the panel's pivot rows.
        for (std::size_t j = 1; j < np; ++j) {
            double* row = &at(k0 + j, c1);
            for (std::size_t i = 0; i < j; ++i) {
                const double l = at(k0 + j, panel_pivots[i]);
                if (l == 0) continue;
                const double* src = &at(k0 + i, c1);
                for (std::size_t t = 0; t < tail; ++t) row[t] = reduce(row[t] - l * src[t], dp, inv_p);
            }
        }
        // A22 -= L21 U12, then reduce.
        const std::size_t below = m - rank;
        if (below == 0) continue;
        lbuf.assign(below * np, 0.0);
        for (std::size_t i = 0; i < below; ++i)
            for (std::size_t j = 0; j < np; ++j) lbuf[i * np + j] = at(rank + i, panel_pivots[j]);
        cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(below), static_cast<int>(tail),
                    static_cast<int>(np), -1.0, lbuf.data(), static_cast<int>(np), &at(k0, c1), static_cast<int>(n),
                    1.0, &at(rank, c1), static_cast<int>(n));
        for (std::size_t i = rank; i < m; ++i) {
            double* row = &at(i, c1);
            for (std::size_t t = 0; t < tail; ++t) row[t] = reduce(row[t], dp, inv_p);
        }
    }
    // Row j of the echelon form: entries right of its pivot. Entries between
    // the pivot and the end of its panel were reduced in the panel loop, the
    // rest by the forward substitution.
    return back_substitute(
        n, pivots, [&](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>(at(i, j)); }, p);
}

std::vector<std::uint32_t> multiply_mod(const ModMatrix& a, const std::vector<std::uint32_t>& x, std::uint32_t p) {
    if (x.size() != a.cols) throw std::invalid_argument("multiply_mod: dimension mismatch");
    std::vector<std::uint32_t> y(a.rows, 0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < a.cols; ++j) s = (s + static_cast<std::uint64_t>(a(i, j)) * x[j]) % p;
        y[i] = static_cast<std::uint32_t>(s);
    }
    return y;
}

} // namespace semiperm
