#pragma once

// On-disk coefficient sequences ("semiperm-terms v1").
//
//   semiperm-terms v1 model=S2 start=-1,-1 west=all south=all region=full ring=exact kind=totals order=3
//   1
//   4
//   14
//   48
//
// Exact values are unbounded decimals; mod-p values lie in [0, p).

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "semiperm/engine.hpp"
#include "semiperm/model.hpp"
#include "semiperm/ring.hpp"

namespace semiperm {

class TermCacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TermSequence {
    ModelSpec model;
    SequenceKind kind = SequenceKind::Totals;
    CoefficientRing ring = CoefficientRing::exact_integer();
    std::vector<Integer> values; ///< index 0..order

    [[nodiscard]] int order() const noexcept { return static_cast<int>(values.size()) - 1; }
    friend bool operator==(const TermSequence&, const TermSequence&) = default;
};

void write_terms(std::ostream& os, const TermSequence& seq);
/// Throws TermCacheError, naming the offending line.
TermSequence read_terms(std::istream& is);

void save_terms(const std::filesystem::path& path, const TermSequence& seq);
TermSequence load_terms(const std::filesystem::path& path);

/// Computes a sequence with the dense engine: exact for exact rings,
/// residues for mod:p.
TermSequence compute_terms(const ModelSpec& m, int order, SequenceKind kind, const CoefficientRing& ring,
                           unsigned threads = 0);

} // namespace semiperm
