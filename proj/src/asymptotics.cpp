#include "semiperm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace semiperm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string count_error(std::size_t have) {
    return "asymptotic fit needs at least " + std::to_string(kMinAsymptoticTerms) + " positive terms, got " +
           std::to_string(have);
}

// Positions of the Neville nodes: n close to N / (1 + j/2), so x = 1/n is
// equally spaced on [1/N, (1 + depth/2)/N].
std::vector<std::size_t> node_positions(const std::vector<long long>& n, int depth) {
    std::vector<std::size_t> pos;
    const double last = static_cast<double>(n.back());
    for (int j = 0; j <= depth; ++j) {
        const double target = last / (1.0 + 0.5 * j);
        const auto it = std::lower_bound(n.begin(), n.end(), static_cast<long long>(std::llround(target)));
        std::size_t p = it == n.end() ? n.size() - 1 : static_cast<std::size_t>(it - n.begin());
        if (!pos.empty() && p >= pos.back()) {
            if (pos.back() == 0) break;
            p = pos.back() - 1;
        }
        pos.push_back(p);
    }
    return pos;
}

double max_abs_log(const LogSequence& s) {
    double m = 1;
    for (double v : s.log) m = std::max(m, std::abs(v));
    return m;
}

void require_size(const LogSequence& s) {
    if (s.size() < kMinAsymptoticTerms / 2) throw AsymptoticsError(count_error(s.size()));
}

} // namespace

double log_integer(const Integer& v) {
    if (sgn(v) <= 0) throw AsymptoticsError("log_terms: nonpositive term");
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

std::vector<double> log_terms(const std::vector<Integer>& terms) {
    std::vector<double> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(log_integer(t));
    return out;
}

long long LogSequence::step() const {
    if (index.size() < 2) throw AsymptoticsError("sequence too short");
    return index[1] - index[0];
}

LogSequence log_sequence(const std::vector<Integer>& terms) {
    LogSequence s;
    s.log = log_terms(terms);
    for (std::size_t n = 0; n < terms.size(); ++n) s.index.push_back(static_cast<long long>(n));
    return s;
}

LogSequence subsequence(const LogSequence& s, long long modulus, long long residue) {
    LogSequence out;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (((s.index[k] % modulus) + modulus) % modulus == residue) {
            out.index.push_back(s.index[k]);
            out.log.push_back(s.log[k]);
        }
    }
    return out;
}

LogSequence strip_zeros(const std::vector<double>& logs) {
    LogSequence out;
    for (std::size_t n = 0; n < logs.size(); ++n) {
        if (std::isinf(logs[n]) && logs[n] < 0) continue;
        if (!std::isfinite(logs[n])) throw AsymptoticsError("non-finite log term at index " + std::to_string(n));
        out.index.push_back(static_cast<long long>(n));
        out.log.push_back(logs[n]);
    }
    // an isolated leading term (the empty walk) may break the spacing
    if (out.size() >= 3 && out.index[1] - out.index[0] != out.index[2] - out.index[1]) {
        out.index.erase(out.index.begin());
        out.log.erase(out.log.begin());
    }
    for (std::size_t k = 2; k < out.size(); ++k) {
        if (out.index[k] - out.index[k - 1] != out.index[1] - out.index[0]) {
            throw AsymptoticsError("nonzero terms are not equally spaced (index " + std::to_string(out.index[k]) + ")");
        }
    }
    return out;
}

Estimate extrapolate(const std::vector<long long>& n, const std::vector<double>& raw, double raw_noise, int depth) {
    if (n.size() != raw.size() || n.empty()) throw AsymptoticsError("extrapolate: size mismatch");
    if (n.front() <= 0) throw AsymptoticsError("extrapolate: indices must be positive");
    const auto pos = node_positions(n, depth);
    const std::size_t k_max = pos.size() - 1;
    std::vector<double> x, y;
    for (std::size_t p : pos) {
        x.push_back(1.0 / static_cast<double>(n[p]));
        y.push_back(raw[p]);
    }

    Estimate e;
    // Neville table evaluated at x = 0; the top entry of column k uses nodes 0..k.
    std::vector<double> col = y;
    e.columns.push_back(col[0]);
    for (std::size_t k = 1; k <= k_max; ++k) {
        for (std::size_t j = 0; j + k <= k_max; ++j)
            col[j] = (x[j] * col[j + 1] - x[j + k] * col[j]) / (x[j] - x[j + k]);
        e.columns.push_back(col[0]);
    }
    // Rounding amplification of column k: sum of |Lagrange basis at 0|.
    std::vector<double> amplification(k_max + 1, 1.0);
    for (std::size_t k = 1; k <= k_max; ++k) {
        double total = 0;
        for (std::size_t j = 0; j <= k; ++j) {
            double l = 1;
            for (std::size_t i = 0; i <= k; ++i)
                if (i != j) l *= x[i] / (x[i] - x[j]);
            total += std::abs(l);
        }
        amplification[k] = total;
    }

    e.depth = static_cast<int>(k_max);
    e.stable = true;
    for (std::size_t k = 1; k <= k_max; ++k) e.deltas.push_back(std::abs(e.columns[k] - e.columns[k - 1]));
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double delta = e.deltas[k - 1];
        const double floor = 4 * amplification[k] * raw_noise;
        if (delta <= floor) {
            e.depth = static_cast<int>(k);
            break;
        }
        if (k > 1 && delta > e.deltas[k - 2]) {
            e.depth = static_cast<int>(k - 1);
            e.stable = false;
            break;
        }
    }
    const auto d = static_cast<std::size_t>(e.depth);
    e.value = e.columns[d];
    e.uncertainty = d == 0 ? std::abs(raw.back() - raw[raw.size() - 2])
                           : std::max(e.deltas[d - 1], 4 * amplification[d] * raw_noise);
    if (k_max == 0) e.stable = false;
    for (std::size_t k = raw.size() >= 4 ? raw.size() - 4 : 0; k < raw.size(); ++k) e.raw_tail.push_back(raw[k]);
    return e;
}

Estimate growth_rate(const LogSequence& s) {
    require_size(s);
    const auto step = static_cast<double>(s.step());
    std::vector<long long> n;
    std::vector<double> raw;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        if (s.index[k] <= 0) continue;
        n.push_back(s.index[k]);
        raw.push_back((s.log[k + 1] - s.log[k]) / step);
    }
    Estimate e = extrapolate(n, raw, 2 * kEps * max_abs_log(s) / step);
    const double mu = std::exp(e.value);
    for (auto* v : {&e.columns, &e.raw_tail})
        for (double& x : *v) x = std::exp(x);
    for (double& x : e.deltas) x *= mu;
    e.value = mu;
    e.uncertainty *= mu;
    return e;
}

Estimate exponent(const LogSequence& s, double mu) {
    require_size(s);
    if (!(mu > 0)) throw AsymptoticsError("growth rate must be positive");
    const double lmu = std::log(mu);
    std::vector<long long> n;
    std::vector<double> raw;
    double noise = 0;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        if (s.index[k] <= 0) continue;
        const double dn = std::log(static_cast<double>(s.index[k + 1]) / static_cast<double>(s.index[k]));
        n.push_back(s.index[k]);
        raw.push_back((s.log[k + 1] - s.log[k] - static_cast<double>(s.index[k + 1] - s.index[k]) * lmu) / dn);
        noise = 2 * kEps * max_abs_log(s) / dn;
    }
    return extrapolate(n, raw, noise);
}

Estimate constant(const LogSequence& s, double mu, double alpha) {
    require_size(s);
    if (!(mu > 0)) throw AsymptoticsError("growth rate must be positive");
    const double lmu = std::log(mu);
    std::vector<long long> n;
    std::vector<double> raw;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s.index[k] <= 0) continue;
        const auto nn = static_cast<double>(s.index[k]);
        n.push_back(s.index[k]);
        raw.push_back(s.log[k] - nn * lmu - alpha * std::log(nn));
    }
    Estimate e = extrapolate(n, raw, 2 * kEps * max_abs_log(s));
    const double c = std::exp(e.value);
    for (auto* v : {&e.columns, &e.raw_tail})
        for (double& x : *v) x = std::exp(x);
    for (double& x : e.deltas) x *= c;
    e.value = c;
    e.uncertainty *= c;
    return e;
}

Estimate growth_rate(const std::vector<Integer>& terms) {
    if (terms.size() < kMinAsymptoticTerms) throw AsymptoticsError(count_error(terms.size()));
    return growth_rate(log_sequence(terms));
}

Estimate exponent(const std::vector<Integer>& terms, double mu) {
    if (terms.size() < kMinAsymptoticTerms) throw AsymptoticsError(count_error(terms.size()));
    return exponent(log_sequence(terms), mu);
}

Estimate constant(const std::vector<Integer>& terms, double mu, double alpha) {
    if (terms.size() < kMinAsymptoticTerms) throw AsymptoticsError(count_error(terms.size()));
    return constant(log_sequence(terms), mu, alpha);
}

std::string SnappedValue::to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::optional<SnappedValue> snap_rational(double v, double window, int max_den) {
    std::optional<SnappedValue> best;
    double best_err = window;
    for (long long q = 1; q <= max_den; ++q) {
        const auto p = static_cast<long long>(std::llround(v * static_cast<double>(q)));
        const double err = std::abs(v - static_cast<double>(p) / static_cast<double>(q));
        if (err <= best_err && std::gcd(p, q) == 1) {
            best = SnappedValue{p, q};
            best_err = err;
        }
    }
    return best;
}

AsymFit fit(const LogSequence& s, std::string label) {
    AsymFit f;
    f.subsequence = std::move(label);
    f.mu_fit = growth_rate(s);
    f.mu = f.mu_fit.value;
    f.alpha_fit = exponent(s, f.mu);
    f.alpha = f.alpha_fit.value;
    f.mu_exact = snap_rational(f.mu, kMuSnapWindow * f.mu);
    f.alpha_exact = snap_rational(f.alpha, kAlphaSnapWindow);
    f.c_raw = constant(s, f.mu, f.alpha).value;
    f.c_fit = constant(s, f.mu_exact ? f.mu_exact->value() : f.mu, f.alpha_exact ? f.alpha_exact->value() : f.alpha);
    f.c = f.c_fit.value;
    f.terms_used = s.size();
    return f;
}

AsymMode parse_asym_mode(std::string_view s) {
    if (s == "totals") return AsymMode::Totals;
    if (s == "returns") return AsymMode::Returns;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected totals or returns)");
}

AsymReport fit_asymptotics_logs(const std::vector<double>& logs, AsymMode mode) {
    LogSequence s;
    if (mode == AsymMode::Returns) {
        s = strip_zeros(logs);
    } else {
        for (std::size_t n = 0; n < logs.size(); ++n) {
            if (!std::isfinite(logs[n])) throw AsymptoticsError("log_terms: nonpositive term at index " + std::to_string(n));
            s.index.push_back(static_cast<long long>(n));
            s.log.push_back(logs[n]);
        }
    }
    if (s.size() < kMinAsymptoticTerms) throw AsymptoticsError(count_error(s.size()));

    AsymReport report;
    report.mode = mode;
    if (s.step() == 1) {
        report.fits.push_back(fit(subsequence(s, 2, 0), "even"));
        report.fits.push_back(fit(subsequence(s, 2, 1), "odd"));
    } else {
        report.fits.push_back(fit(s, "step " + std::to_string(s.step())));
    }
    for (std::size_t k = 1; k < report.fits.size(); ++k)
        if (report.fits[k].alpha_fit.uncertainty < report.fits[report.dominant].alpha_fit.uncertainty)
            report.dominant = k;
    return report;
}

AsymReport fit_asymptotics(const std::vector<Integer>& terms, AsymMode mode) {
    std::vector<double> logs;
    logs.reserve(terms.size());
    for (const auto& t : terms) {
        if (mode == AsymMode::Returns && sgn(t) == 0) {
            logs.push_back(-std::numeric_limits<double>::infinity());
        } else {
            logs.push_back(log_integer(t));
        }
    }
    return fit_asymptotics_logs(logs, mode);
}

void to_json(nlohmann::json& j, const Estimate& e) {
    j = {{"value", e.value},     {"uncertainty", e.uncertainty}, {"depth", e.depth},   {"stable", e.stable},
         {"columns", e.columns}, {"deltas", e.deltas},           {"raw_tail", e.raw_tail}};
}

void to_json(nlohmann::json& j, const AsymFit& f) {
    j = {{"subsequence", f.subsequence},
         {"mu", f.mu},
         {"alpha", f.alpha},
         {"c", f.c},
         {"uncertainty", {{"mu", f.mu_fit.uncertainty}, {"alpha", f.alpha_fit.uncertainty}, {"c", f.c_fit.uncertainty}}},
         {"mu_exact", f.mu_exact ? nlohmann::json(f.mu_exact->to_string()) : nlohmann::json(nullptr)},
         {"alpha_exact", f.alpha_exact ? nlohmann::json(f.alpha_exact->to_string()) : nlohmann::json(nullptr)},
         {"c_raw", f.c_raw},
         {"terms_used", f.terms_used},
         {"stable", f.stable()},
         {"diagnostics", {{"mu", f.mu_fit}, {"alpha", f.alpha_fit}, {"c", f.c_fit}}}};
}

void to_json(nlohmann::json& j, const AsymReport& r) {
    const AsymFit& best = r.best();
    j = best;
    j.erase("diagnostics");
    j["mode"] = r.mode == AsymMode::Totals ? "totals" : "returns";
    j["fits"] = r.fits;
}

} // namespace semiperm
