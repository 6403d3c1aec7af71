#pragma once

// Numeric fits of a_n ~ c * mu^n * n^alpha from positive term sequences.
//
// Everything runs on natural logarithms; big integers are never converted to
// double directly. Each constant is the limit of a derived sequence that has
// an expansion in 1/n, and is extrapolated with a Neville table in x = 1/n
// over nodes spread across the last three quarters of the index range.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "semiperm/ring.hpp"

namespace semiperm {

class AsymptoticsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kRichardsonDepth = 6;
inline constexpr std::size_t kMinAsymptoticTerms = 64;
// Snapping windows for identifying mu and alpha with small-denominator
// rationals before the constant is fitted.
inline constexpr int kSnapMaxDenominator = 6;
inline constexpr double kMuSnapWindow = 1e-5;    // relative
inline constexpr double kAlphaSnapWindow = 1e-2; // absolute

struct SnappedValue {
    long long num = 0;
    long long den = 1;
    [[nodiscard]] double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    [[nodiscard]] std::string to_string() const;
};

/// Nearest p/q with q <= max_den, if it lies within `window` of v.
std::optional<SnappedValue> snap_rational(double v, double window, int max_den = kSnapMaxDenominator);

/// Natural logs of positive integers (digit count plus leading mantissa).
std::vector<double> log_terms(const std::vector<Integer>& terms);
double log_integer(const Integer& v);

/// Logs at original indices index[0] < index[1] < ..., equally spaced.
struct LogSequence {
    std::vector<long long> index;
    std::vector<double> log;
    [[nodiscard]] std::size_t size() const noexcept { return index.size(); }
    [[nodiscard]] long long step() const;
};

LogSequence log_sequence(const std::vector<Integer>& terms);
/// Keeps the entries whose index is congruent to `residue` modulo `modulus`.
LogSequence subsequence(const LogSequence& s, long long modulus, long long residue);
/// Drops zero terms (log = -inf) and checks the survivors are equally spaced.
LogSequence strip_zeros(const std::vector<double>& logs);

struct Estimate {
    double value = 0;
    double uncertainty = 0;
    int depth = 0;
    bool stable = false;
    std::vector<double> columns;  // top entry of each Neville column
    std::vector<double> deltas;   // |columns[k] - columns[k-1]|
    std::vector<double> raw_tail; // last raw values before extrapolation
};

/// Limit of the sequence raw[m] taken along x = 1 / n[m].
Estimate extrapolate(const std::vector<long long>& n, const std::vector<double>& raw, double raw_noise,
                     int depth = kRichardsonDepth);

Estimate growth_rate(const LogSequence& s);
Estimate exponent(const LogSequence& s, double mu);
Estimate constant(const LogSequence& s, double mu, double alpha);

Estimate growth_rate(const std::vector<Integer>& terms);
Estimate exponent(const std::vector<Integer>& terms, double mu);
Estimate constant(const std::vector<Integer>& terms, double mu, double alpha);

struct AsymFit {
    std::string subsequence = "all";
    double mu = 0;
    double alpha = 0;
    double c = 0;
    Estimate mu_fit;
    Estimate alpha_fit;
    Estimate c_fit;
    std::optional<SnappedValue> mu_exact;
    std::optional<SnappedValue> alpha_exact;
    double c_raw = 0; // constant with the unsnapped mu and alpha
    std::size_t terms_used = 0;
    [[nodiscard]] bool stable() const noexcept { return mu_fit.stable && alpha_fit.stable && c_fit.stable; }
};

/// Fits mu and alpha; c uses their snapped values when snapping applies.
AsymFit fit(const LogSequence& s, std::string label = "all");

enum class AsymMode { Totals, Returns };
AsymMode parse_asym_mode(std::string_view s);

/// All fits attempted (one per parity class when both are present) and the
/// dominant one, chosen by the smaller exponent uncertainty.
struct AsymReport {
    AsymMode mode = AsymMode::Totals;
    std::vector<AsymFit> fits;
    std::size_t dominant = 0;
    [[nodiscard]] const AsymFit& best() const { return fits.at(dominant); }
};

AsymReport fit_asymptotics(const std::vector<Integer>& terms, AsymMode mode);
/// Same, from logs with -inf marking zero terms.
AsymReport fit_asymptotics_logs(const std::vector<double>& logs, AsymMode mode);

void to_json(nlohmann::json& j, const Estimate& e);
void to_json(nlohmann::json& j, const AsymFit& f);
void to_json(nlohmann::json& j, const AsymReport& r);

} // namespace semiperm
