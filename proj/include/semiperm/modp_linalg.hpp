#pragma once

// Dense linear algebra over Z/pZ.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace semiperm {

/// Row-major matrix of residues in [0, p).
struct ModMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint32_t> data;

    ModMatrix() = default;
    ModMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
    std::uint32_t& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    std::uint32_t operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Largest prime for which the floating point path is exact.
inline constexpr std::uint32_t kBlasPrimeLimit = 1U << 21;

struct NullspaceResult {
    std::size_t rank = 0;
    /// Basis of {x : A x = 0}: one vector per free column, with a 1 in that
    /// column and 0 in the other free columns. This basis depends only on the
    /// row space of A, not on pivoting.
    std::vector<std::vector<std::uint32_t>> basis;
};

/// Uses blocked elimination with double precision matrix products when
/// p < kBlasPrimeLimit, scalar 64-bit arithmetic otherwise. `p` must be prime.
NullspaceResult nullspace_mod(ModMatrix a, std::uint32_t p);

/// The scalar elimination, exposed so the two paths can be compared.
NullspaceResult nullspace_mod_scalar(ModMatrix a, std::uint32_t p);

/// A x mod p.
std::vector<std::uint32_t> multiply_mod(const ModMatrix& a, const std::vector<std::uint32_t>& x, std::uint32_t p);

} // namespace semiperm
