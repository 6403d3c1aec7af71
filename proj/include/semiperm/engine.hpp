#pragma once

// Dense coefficient-sequence engine.
//
// Walks are tracked in rotated coordinates u = i + j, v = i - j, where every
// simple step moves both u and v by +-1. At step n the reachable cells form an
// (n+1) x (n+1) square with no parity holes, and one step becomes the 2x2 box
// sum new[a][b] = old[a][b] + old[a-1][b] + old[a][b-1] + old[a-1][b-1],
// corrected on the two barrier lines and masked by the region. The update runs
// in place, several steps per sweep, so long sequences stay cache resident.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <type_traits>
#include <vector>

#include "semiperm/enumerate.hpp"
#include "semiperm/ring.hpp"

namespace semiperm {

enum class SequenceKind {
    Totals,  ///< number of admissible walks of length n
    Returns, ///< number of admissible walks of length n ending at the start
};

std::string_view to_string(SequenceKind k) noexcept;
SequenceKind parse_sequence_kind(std::string_view text);

/// Cells held by the dense engine for a sequence of length N+1.
std::size_t engine_cell_estimate(int order, SequenceKind kind) noexcept;

/// Residues modulo p, for any p < 2^31 (prime or not).
std::vector<std::uint32_t> walk_sequence_mod(const ModelSpec& m, int order, SequenceKind kind, std::uint32_t p,
                                             std::size_t budget = cell_budget());

/// Residues modulo p, for any p < 2^63.
std::vector<std::uint64_t> walk_sequence_mod64(const ModelSpec& m, int order, SequenceKind kind, std::uint64_t p,
                                               std::size_t budget = cell_budget());

/// Exact values, reconstructed by Chinese remaindering over 62-bit primes.
/// `threads` = 0 picks the hardware concurrency.
std::vector<Integer> walk_sequence_exact(const ModelSpec& m, int order, SequenceKind kind, unsigned threads = 0,
                                         std::size_t budget = cell_budget());

/// Natural logarithms of the terms, from a double precision run rescaled by
/// 1/4 per step. Zero terms come back as -infinity. Every cell is a sum of
/// nonnegative terms, so the relative error stays below about n * 2^-52.
std::vector<double> walk_sequence_log(const ModelSpec& m, int order, SequenceKind kind,
                                      std::size_t budget = cell_budget());

/// Primes just below 2^62, largest first.
const std::vector<std::uint64_t>& crt_primes(std::size_t count);

template <class Ring>
std::vector<typename Ring::value_type> walk_sequence(const ModelSpec& m, int order, SequenceKind kind,
                                                     const Ring& ring) {
    std::vector<typename Ring::value_type> out;
    if constexpr (std::is_same_v<Ring, ModPRing>) {
        for (std::uint32_t v : walk_sequence_mod(m, order, kind, ring.prime())) out.emplace_back(v, ring.prime());
    } else {
        for (auto& v : walk_sequence_exact(m, order, kind)) out.push_back(ring.from_integer(v));
    }
    return out;
}

/// a_n = number of admissible walks of length n, n = 0..order.
template <class Ring>
std::vector<typename Ring::value_type> totals(const ModelSpec& m, int order, const Ring& ring) {
    return walk_sequence(m, order, SequenceKind::Totals, ring);
}

/// b_n = number of admissible walks of length n returning to the start.
template <class Ring>
std::vector<typename Ring::value_type> returns_to_start(const ModelSpec& m, int order, const Ring& ring) {
    return walk_sequence(m, order, SequenceKind::Returns, ring);
}

} // namespace semiperm
