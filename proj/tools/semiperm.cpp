#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "semiperm/asymptotics.hpp"
#include "semiperm/engine.hpp"
#include "semiperm/guess.hpp"
#include "semiperm/kernel.hpp"
#include "semiperm/recurrence.hpp"
#include "semiperm/term_cache.hpp"

namespace fs = std::filesystem;
using namespace semiperm;

namespace {

enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kResource = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ModelSpec resolve_model(const std::string& arg) {
    for (const auto& m : model_catalog())
        if (m.id == arg) return m;
    if (!fs::exists(arg)) throw UsageError("unknown model '" + arg + "' (not a catalog id or a spec file)");
    std::ifstream in(arg);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(arg + ": " + e.what());
    }
    ModelSpec m = j.get<ModelSpec>();
    m.validate();
    return m;
}

template <class R>
std::optional<std::string> first_offence(const TSeries<R>& res) {
    const auto n = res.valuation();
    if (!n) return std::nullopt;
    const auto& [e, c] = *res[*n].begin();
    return "t^" + std::to_string(*n) + ", monomial " + LaurentPoly2<R>::monomial(e.x, e.y, c).to_string();
}

int report_check(const std::string& what, int order, const std::vector<std::pair<std::string, std::optional<std::string>>>& parts) {
    bool ok = true;
    for (const auto& [name, offence] : parts) {
        if (!offence) continue;
        ok = false;
        std::cout << "FAIL " << what << (name.empty() ? "" : " (" + name + ")") << ": first nonzero residual at "
                  << *offence << "\n";
    }
    if (ok) std::cout << "PASS " << what << " through t^" << order << "\n";
    return ok ? kOk : kCheckFailed;
}

template <class Ring>
int run_check(const std::string& what, int order, const ModelSpec& model, const std::optional<std::string>& interp,
              const Ring& ring) {
    using R = typename Ring::value_type;
    using Parts = std::vector<std::pair<std::string, std::optional<std::string>>>;
    auto keep = [](const TSeries<R>& f, auto pred) {
        return f.map([&pred](const LaurentPoly2<R>& p) { return p.filtered(pred); });
    };
    if (what == "kernel-q") {
        const auto dp = enumerate_series(catalog_model("QP"), order, ring);
        return report_check(what, order, {{"", first_offence(quarter_plane_Q(order, ring) - dp)}});
    }
    if (what == "s2-forms") {
        const auto f = enumerate_series(catalog_model("S2"), order, ring);
        const auto c = f_compartments_s2(order, ring);
        return report_check(
            what, order,
            Parts{{"F1", first_offence(c.f1 - keep(f, [](int i, int j) { return i < 0 && j < 0; }))},
                  {"F2", first_offence(c.f2 - keep(f, [](int i, int j) { return i < 0 && j >= 0; }))},
                  {"F3", first_offence(c.f3 - keep(f, [](int i, int j) { return i >= 0 && j < 0; }))},
                  {"F4", first_offence(c.f4 - keep(f, [](int i, int j) { return i >= 0 && j >= 0; }))}});
    }
    if (what == "s3-form") {
        const auto f = enumerate_series(catalog_model("S3"), order, ring);
        const auto outside = keep(f, [](int i, int j) { return !(i >= 0 && j >= 0); });
        const auto quadrant = keep(f, [](int i, int j) { return i >= 0 && j >= 0; });
        return report_check(what, order, {{"", first_offence(f2_s3(order, outside, ring) - quadrant)}});
    }
    if (what == "star") return report_check(what, order, {{"", first_offence(star_residual(order, ring))}});
    if (what == "x0-identity") return report_check(what, order - 1, {{"", first_offence(x0_f2l_identity(order, ring))}});
    if (what == "feq") {
        const Interpretation in = interp ? parse_interpretation(*interp) : matching_interpretation(model);
        return report_check(what + " " + model.id + " " + to_string(in), order,
                            {{"", first_offence(verify_functional_equation(model, in, order, ring))}});
    }
    if (what == "orbit-sum") {
        return report_check(what + " " + model.id, order, {{"", first_offence(orbit_sum_identity(model, order, ring))}});
    }
    throw UsageError("unknown check '" + what + "'");
}

TermSequence load_cache(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("no such cache file: " + path);
    return load_terms(path);
}

void emit(const nlohmann::json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw UsageError("cannot write " + out);
    f << j.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice walks with semipermeable barriers: enumeration, kernel-method checks, guessing, asymptotics"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Cap on worker threads (0 = hardware concurrency)");

    auto* models = app.add_subcommand("models", "List the catalog models");

    std::string model_arg, ring_arg = "exact", kind_arg = "totals", out;
    int order = 0;
    auto* enumerate = app.add_subcommand("enumerate", "Compute a term sequence and write a cache file");
    enumerate->add_option("model", model_arg, "Catalog id or JSON model spec file")->required();
    enumerate->add_option("--order", order, "Largest walk length")->required()->check(CLI::NonNegativeNumber);
    enumerate->add_option("--ring", ring_arg, "exact | mod:p");
    enumerate->add_option("--kind", kind_arg, "totals | returns");
    enumerate->add_option("--out", out, "Cache file (default: stdout)");

    std::string what, interp_arg, check_model = "S2", check_ring = "rational";
    int check_order = 10;
    auto* check = app.add_subcommand("check", "Compare a closed form or identity against the enumerator");
    check->add_option("--what", what, "kernel-q | s2-forms | s3-form | star | x0-identity | feq | orbit-sum")
        ->required();
    check->add_option("--order", check_order, "Truncation order in t")->check(CLI::NonNegativeNumber);
    check->add_option("--model", check_model, "Model for feq and orbit-sum");
    check->add_option("--interp", interp_arg, "Interpretation for feq, e.g. y-all,x-all");
    check->add_option("--ring", check_ring, "rational | exact | mod:p");

    std::string cache_path, rec_path;
    auto* verify = app.add_subcommand("verify-recurrence", "Check a recurrence against cached terms");
    verify->add_option("cache", cache_path)->required();
    verify->add_option("recurrence", rec_path, "File holding sum_k p_k(n) a(n+k) = 0")->required();

    int budget = 64, margin = kGuessMargin;
    double holdout = kHoldoutFraction;
    std::vector<std::uint32_t> primes;
    auto* guess = app.add_subcommand("guess", "Search for recurrences modulo primes");
    guess->add_option("cache", cache_path)->required();
    guess->add_option("--budget", budget, "Largest (r+1)(d+1)")->check(CLI::PositiveNumber);
    guess->add_option("--prime", primes, "Guessing prime (repeatable; default 45007 and 65521)");
    guess->add_option("--holdout", holdout, "Fraction of terms held out")->check(CLI::Range(0.0, 0.9));
    guess->add_option("--margin", margin, "Extra equations beyond the unknowns")->check(CLI::NonNegativeNumber);
    guess->add_option("--out", out, "Report file (default: stdout)");

    std::string mode_arg = "totals", asym_model;
    int asym_order = 0;
    auto* asym = app.add_subcommand("asymptotics", "Fit c * mu^n * n^alpha");
    asym->add_option("cache", cache_path, "Exact cache file");
    asym->add_option("--mode", mode_arg, "totals | returns");
    asym->add_option("--model", asym_model, "Compute log-scale terms with the floating engine instead of a cache");
    asym->add_option("--order", asym_order, "Largest walk length with --model");
    asym->add_option("--out", out, "Report file (default: stdout)");

    std::string start_arg;
    auto* orbit = app.add_subcommand("orbit-sum", "Print the orbit sum of x^a y^b");
    orbit->add_option("--start", start_arg, "a,b")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*models) {
            for (const auto& m : model_catalog()) std::cout << m.id << "  " << m.describe() << "\n";
            return kOk;
        }
        if (*enumerate) {
            const ModelSpec m = resolve_model(model_arg);
            const auto seq = compute_terms(m, order, parse_sequence_kind(kind_arg), CoefficientRing::parse(ring_arg),
                                           threads);
            if (out.empty()) {
                write_terms(std::cout, seq);
            } else {
                save_terms(out, seq);
            }
            return kOk;
        }
        if (*check) {
            const ModelSpec m = resolve_model(check_model);
            const std::optional<std::string> interp =
                interp_arg.empty() ? std::nullopt : std::optional<std::string>(interp_arg);
            return CoefficientRing::parse(check_ring).visit(
                [&](const auto& ring) { return run_check(what, check_order, m, interp, ring); });
        }
        if (*verify) {
            const auto seq = load_cache(cache_path);
            std::ifstream in(rec_path);
            if (!in) throw UsageError("cannot read " + rec_path);
            std::stringstream text;
            text << in.rdbuf();
            const ExactRecurrence rec = parse_recurrence(text.str());
            VerifyResult res;
            if (seq.ring.kind() == CoefficientRing::Kind::ModPrime) {
                const ModPRing ring(seq.ring.prime());
                std::vector<ModP> terms;
                for (const auto& v : seq.values) terms.push_back(ring.from_integer(v));
                res = verify_recurrence(reduce(rec, seq.ring.prime()), terms, ring);
            } else {
                res = verify_recurrence(rec, seq.values, IntegerRing{});
            }
            if (res.ok) {
                std::cout << "SUCCESS: recurrence holds for n = 0.." << res.checked - 1 << " (terms 0.."
                          << seq.order() << ", ring " << seq.ring.to_string() << ")\n";
                return kOk;
            }
            std::cout << "VIOLATION at n = " << res.first_violation << "\n";
            return kCheckFailed;
        }
        if (*guess) {
            const auto seq = load_cache(cache_path);
            if (primes.empty()) {
                primes = seq.ring.kind() == CoefficientRing::Kind::ModPrime
                             ? std::vector<std::uint32_t>{seq.ring.prime()}
                             : std::vector<std::uint32_t>{kDefaultPrime, kSecondGuessPrime};
            }
            std::vector<ModSequence> seqs;
            for (std::uint32_t p : primes) {
                if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
                if (seq.ring.kind() == CoefficientRing::Kind::ModPrime && p != seq.ring.prime())
                    throw UsageError("cache holds residues mod " + std::to_string(seq.ring.prime()) +
                                     ", cannot guess mod " + std::to_string(p));
                seqs.push_back(reduce_terms(seq.values, p));
            }
            const GuessReport report = guess_search(seqs, budget, holdout, margin);
            emit(report, out);
            return kOk;
        }
        if (*asym) {
            const AsymMode mode = parse_asym_mode(mode_arg);
            AsymReport report;
            if (!asym_model.empty()) {
                if (asym_order <= 0) throw UsageError("--model needs --order");
                const auto kind = mode == AsymMode::Totals ? SequenceKind::Totals : SequenceKind::Returns;
                report = fit_asymptotics_logs(walk_sequence_log(resolve_model(asym_model), asym_order, kind), mode);
            } else {
                if (cache_path.empty()) throw UsageError("asymptotics needs a cache file or --model");
                const auto seq = load_cache(cache_path);
                if (seq.ring.kind() == CoefficientRing::Kind::ModPrime)
                    throw UsageError("asymptotics needs exact terms, cache holds residues");
                report = fit_asymptotics(seq.values, mode);
            }
            emit(report, out);
            return kOk;
        }
        if (*orbit) {
            const auto comma = start_arg.find(',');
            if (comma == std::string::npos) throw UsageError("--start expects a,b");
            int a = 0, b = 0;
            try {
                a = std::stoi(start_arg.substr(0, comma));
                b = std::stoi(start_arg.substr(comma + 1));
            } catch (const std::exception&) {
                throw UsageError("--start expects two integers a,b");
            }
            const auto p = orbit_sum(LaurentPoly2<Integer>::monomial(a, b, Integer(1)));
            std::cout << (p.is_zero() ? std::string("0") : p.to_string()) << "\n";
            return kOk;
        }
    } catch (const ResourceLimitExceeded& e) {
        std::cerr << "error: " << e.what() << " (raise SEMIPERM_CELL_BUDGET to allow it)\n";
        return kResource;
    } catch (const RecurrenceParseError& e) {
        std::cerr << rec_path << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
