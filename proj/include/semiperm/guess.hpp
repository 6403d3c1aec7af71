#pragma once

// Guessing linear recurrences and differential equations modulo a prime.
//
// A shape (r, d) asks for sum_{k<=r} p_k(n) a(n+k) = 0 with deg p_k <= d.
// Each known relation index n gives one linear equation in the (r+1)(d+1)
// unknown coefficients; the candidates are the nullspace of that system.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "semiperm/modp_linalg.hpp"
#include "semiperm/recurrence.hpp"

namespace semiperm {

class InsufficientTerms : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kGuessMargin = 10;
inline constexpr double kHoldoutFraction = 0.25;
inline constexpr std::uint32_t kSecondGuessPrime = 65521;

struct ModSequence {
    std::uint32_t prime = kDefaultPrime;
    std::vector<std::uint32_t> values;
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

ModSequence reduce_terms(const std::vector<Integer>& terms, std::uint32_t p);
std::vector<ModP> to_modp(const ModSequence& s);

/// Rows n = 0 .. rows-1, column k*(d+1)+e holds n^e a(n+k).
ModMatrix recurrence_matrix(const ModSequence& s, int r, int d, std::size_t rows);
/// Rows m = 0 .. rows-1, column i*(d+1)+e holds the t^m coefficient of t^e f^(i).
ModMatrix ode_matrix(const ModSequence& s, int r, int d, std::size_t rows);

/// Nullspace basis using every term, in canonical form; empty when only the
/// zero recurrence fits. Needs (r+1)(d+1) + r + margin terms.
std::vector<ModRecurrence> guess_recurrence(const ModSequence& s, int r, int d, int margin = kGuessMargin);
std::vector<DiffEquation<ModP>> guess_ode(const ModSequence& s, int r, int d, int margin = kGuessMargin);

enum class GuessKind { Recurrence, Differential };

/// A shape solved on the first `training` terms, then checked on the rest.
struct ShapeResult {
    int r = 0;
    int d = 0;
    std::size_t training_nullity = 0;
    /// Canonical basis of the candidates that also hold on every later term.
    std::vector<PolyOperator<ModP>> verified;
};

ShapeResult solve_shape(const ModSequence& s, GuessKind kind, int r, int d, std::size_t training,
                        int margin = kGuessMargin);

enum class Strength { Strong, Weak };

struct GuessCandidate {
    ModRecurrence rec;
    std::uint32_t prime = 0;
    bool holdout_verified = false;
    Strength strength = Strength::Weak;
};

struct ShapeRecord {
    std::uint32_t prime;
    int r;
    int d;
    std::size_t training_nullity;
    std::size_t verified_nullity;
};

struct GuessReport {
    int budget = 0;
    double holdout = kHoldoutFraction;
    int margin = kGuessMargin;
    std::vector<std::uint32_t> primes;
    std::size_t terms_used = 0;
    std::size_t terms_heldout = 0;
    std::size_t shapes_feasible = 0;
    std::size_t shapes_pruned = 0;
    std::optional<std::pair<int, int>> hit;
    std::vector<GuessCandidate> found;
    std::vector<ShapeRecord> solved;
};

/// Sweeps the shapes with (r+1)(d+1) <= budget in increasing (r+1)(d+1),
/// then r, and stops at the first shape with a candidate that survives the
/// held-out suffix. Every sequence (one per prime, equal lengths) is searched
/// separately; a candidate is strong when another prime verifies a candidate
/// with the same nonzero pattern at the same shape.
///
/// Shapes are checked at the maximal feasible corners first. A recurrence of
/// shape (r', d') with r' <= r and d' <= d is also one of shape (r, d), so
/// an empty corner rules out everything below it.
GuessReport guess_search(const std::vector<ModSequence>& sequences, int budget, double holdout = kHoldoutFraction,
                         int margin = kGuessMargin);

void to_json(nlohmann::json& j, const GuessReport& report);

} // namespace semiperm
