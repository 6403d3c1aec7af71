#include "semiperm/guess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace semiperm {

namespace {

std::size_t columns(int r, int d) { return static_cast<std::size_t>(r + 1) * static_cast<std::size_t>(d + 1); }

void require_terms(std::size_t have, int r, int d, int margin) {
    if (r < 0 || d < 0) throw std::invalid_argument("order and degree must be nonnegative");
    const std::size_t need = columns(r, d) + static_cast<std::size_t>(r) + static_cast<std::size_t>(margin);
    if (have < need) {
        throw InsufficientTerms("shape (" + std::to_string(r) + "," + std::to_string(d) + ") needs " +
                                std::to_string(need) + " terms, got " + std::to_string(have));
    }
}

PolyOperator<ModP> unflatten(const std::vector<std::uint32_t>& v, int r, int d, std::uint32_t p) {
    PolyOperator<ModP> op(r, d);
    for (int k = 0; k <= r; ++k)
        for (int e = 0; e <= d; ++e) op.coeffs[k][e] = ModP(v[static_cast<std::size_t>(k * (d + 1) + e)], p);
    return op;
}

ModMatrix build(const ModSequence& s, GuessKind kind, int r, int d, std::size_t first, std::size_t rows) {
    ModMatrix full = kind == GuessKind::Recurrence ? recurrence_matrix(s, r, d, first + rows)
                                                   : ode_matrix(s, r, d, first + rows);
    if (first == 0) return full;
    ModMatrix out(rows, full.cols);
    std::copy(full.data.begin() + static_cast<long>(first * full.cols), full.data.end(), out.data.begin());
    return out;
}

std::set<std::pair<int, int>> support(const PolyOperator<ModP>& op) {
    std::set<std::pair<int, int>> s;
    for (int k = 0; k <= op.order(); ++k)
        for (int e = 0; e < static_cast<int>(op.coeffs[k].size()); ++e)
            if (!op.coeffs[k][e].is_zero()) s.emplace(k, e);
    return s;
}

} // namespace

ModSequence reduce_terms(const std::vector<Integer>& terms, std::uint32_t p) {
    ModSequence s{p, {}};
    s.values.reserve(terms.size());
    for (const Integer& t : terms) s.values.push_back(static_cast<std::uint32_t>(mpz_fdiv_ui(t.get_mpz_t(), p)));
    return s;
}

std::vector<ModP> to_modp(const ModSequence& s) {
    std::vector<ModP> out;
    out.reserve(s.size());
    for (std::uint32_t v : s.values) out.emplace_back(v % s.prime, s.prime);
    return out;
}

ModMatrix recurrence_matrix(const ModSequence& s, int r, int d, std::size_t rows) {
    if (rows + static_cast<std::size_t>(r) > s.size()) throw InsufficientTerms("recurrence_matrix: too few terms");
    const std::uint64_t p = s.prime;
    ModMatrix m(rows, columns(r, d));
    for (std::size_t n = 0; n < rows; ++n) {
        for (int k = 0; k <= r; ++k) {
            std::uint64_t v = s.values[n + static_cast<std::size_t>(k)] % p;
            for (int e = 0; e <= d; ++e) {
                m(n, static_cast<std::size_t>(k * (d + 1) + e)) = static_cast<std::uint32_t>(v);
                v = v * (n % p) % p;
            }
        }
    }
    return m;
}

ModMatrix ode_matrix(const ModSequence& s, int r, int d, std::size_t rows) {
    if (rows + static_cast<std::size_t>(r) > s.size()) throw InsufficientTerms("ode_matrix: too few terms");
    const std::uint64_t p = s.prime;
    ModMatrix m(rows, columns(r, d));
    for (std::size_t row = 0; row < rows; ++row) {
        for (int e = 0; e <= d && static_cast<std::size_t>(e) <= row; ++e) {
            const std::size_t base = row - static_cast<std::size_t>(e); // t-power before differentiation
            std::uint64_t ff = 1;                                       // (base+i)(base+i-1)...(base+1)
            for (int i = 0; i <= r; ++i) {
                if (i > 0) ff = ff * ((base + static_cast<std::size_t>(i)) % p) % p;
                const std::uint64_t a = s.values[base + static_cast<std::size_t>(i)] % p;
                m(row, static_cast<std::size_t>(i * (d + 1) + e)) = static_cast<std::uint32_t>(ff * a % p);
            }
        }
    }
    return m;
}

std::vector<ModRecurrence> guess_recurrence(const ModSequence& s, int r, int d, int margin) {
    require_terms(s.size(), r, d, margin);
    const auto ns = nullspace_mod(recurrence_matrix(s, r, d, s.size() - static_cast<std::size_t>(r)), s.prime);
    std::vector<ModRecurrence> basis;
    for (const auto& v : ns.basis) {
        ModRecurrence rec;
        static_cast<PolyOperator<ModP>&>(rec) = unflatten(v, r, d, s.prime);
        basis.push_back(rec);
    }
    return canonicalize_basis(basis);
}

std::vector<DiffEquation<ModP>> guess_ode(const ModSequence& s, int r, int d, int margin) {
    require_terms(s.size(), r, d, margin);
    const auto ns = nullspace_mod(ode_matrix(s, r, d, s.size() - static_cast<std::size_t>(r)), s.prime);
    std::vector<DiffEquation<ModP>> out;
    for (const auto& v : ns.basis) {
        DiffEquation<ModP> eq;
        static_cast<PolyOperator<ModP>&>(eq) = unflatten(v, r, d, s.prime);
        out.push_back(eq);
    }
    return out;
}

ShapeResult solve_shape(const ModSequence& s, GuessKind kind, int r, int d, std::size_t training, int margin) {
    if (training > s.size()) throw std::invalid_argument("solve_shape: training prefix longer than the sequence");
    require_terms(training, r, d, margin);
    ShapeResult out{r, d, 0, {}};
    const std::uint32_t p = s.prime;
    const std::size_t cols = columns(r, d);
    const std::size_t train_rows = training - static_cast<std::size_t>(r);
    const std::size_t all_rows = s.size() - static_cast<std::size_t>(r);

    const auto trained = nullspace_mod(build(s, kind, r, d, 0, train_rows), p);
    out.training_nullity = trained.basis.size();
    if (trained.basis.empty()) return out;

    // Candidates are combinations B y of the training basis; keep those with
    // H B y = 0 on the held-out rows.
    std::vector<std::vector<std::uint32_t>> combos;
    if (all_rows > train_rows) {
        const ModMatrix h = build(s, kind, r, d, train_rows, all_rows - train_rows);
        ModMatrix hb(h.rows, trained.basis.size());
        for (std::size_t j = 0; j < trained.basis.size(); ++j) {
            const auto col = multiply_mod(h, trained.basis[j], p);
            for (std::size_t i = 0; i < h.rows; ++i) hb(i, j) = col[i];
        }
        combos = nullspace_mod(hb, p).basis;
    } else {
        for (std::size_t j = 0; j < trained.basis.size(); ++j) {
            std::vector<std::uint32_t> e(trained.basis.size(), 0);
            e[j] = 1;
            combos.push_back(e);
        }
    }
    std::vector<ModRecurrence> verified;
    for (const auto& y : combos) {
        std::vector<std::uint32_t> v(cols, 0);
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] == 0) continue;
            for (std::size_t c = 0; c < cols; ++c)
                v[c] = static_cast<std::uint32_t>((v[c] + static_cast<std::uint64_t>(y[j]) * trained.basis[j][c]) % p);
        }
        ModRecurrence rec;
        static_cast<PolyOperator<ModP>&>(rec) = unflatten(v, r, d, p);
        verified.push_back(rec);
    }
    for (auto& rec : canonicalize_basis(verified)) out.verified.push_back(std::move(rec));
    return out;
}

GuessReport guess_search(const std::vector<ModSequence>& sequences, int budget, double holdout, int margin) {
    if (sequences.empty()) throw std::invalid_argument("guess_search: no sequences");
    if (holdout < 0 || holdout >= 1) throw std::invalid_argument("hold-out fraction must lie in [0, 1)");
    const std::size_t total = sequences.front().size();
    for (const auto& s : sequences) {
        if (s.size() != total) throw std::invalid_argument("guess_search: sequences differ in length");
    }
    GuessReport report;
    report.budget = budget;
    report.holdout = holdout;
    report.margin = margin;
    report.terms_heldout = static_cast<std::size_t>(std::floor(static_cast<double>(total) * holdout));
    report.terms_used = total - report.terms_heldout;
    for (const auto& s : sequences) report.primes.push_back(s.prime);
    const std::size_t train = report.terms_used;

    // Feasible shapes in sweep order, and their maximal corners.
    std::vector<std::pair<int, int>> shapes;
    std::map<int, int> max_degree; // r -> largest feasible d
    for (int r = 0; columns(r, 0) <= static_cast<std::size_t>(std::max(budget, 0)); ++r) {
        for (int d = 0; columns(r, d) <= static_cast<std::size_t>(budget); ++d) {
            if (train < columns(r, d) + static_cast<std::size_t>(r + margin)) break;
            shapes.emplace_back(r, d);
            max_degree[r] = d;
        }
    }
    std::sort(shapes.begin(), shapes.end(), [](auto a, auto b) {
        const auto ca = columns(a.first, a.second);
        const auto cb = columns(b.first, b.second);
        return ca != cb ? ca < cb : a.first < b.first;
    });
    report.shapes_feasible = shapes.size();
    std::vector<std::pair<int, int>> corners;
    for (auto [r, d] : max_degree) {
        auto next = max_degree.find(r + 1);
        if (next == max_degree.end() || next->second < d) corners.emplace_back(r, d);
    }
    std::sort(corners.begin(), corners.end(), [](auto a, auto b) {
        const auto ca = columns(a.first, a.second);
        const auto cb = columns(b.first, b.second);
        return ca != cb ? ca < cb : a.first < b.first;
    });

    struct PerPrime {
        std::optional<std::pair<int, int>> hit;
        std::vector<PolyOperator<ModP>> verified;
    };
    std::vector<PerPrime> results(sequences.size());
    std::size_t pruned_total = 0;
    for (std::size_t si = 0; si < sequences.size(); ++si) {
        const ModSequence& s = sequences[si];
        std::map<std::pair<int, int>, ShapeResult> cache;
        auto solve = [&](int r, int d) -> const ShapeResult& {
            auto it = cache.find({r, d});
            if (it != cache.end()) return it->second;
            ShapeResult res = solve_shape(s, GuessKind::Recurrence, r, d, train, margin);
            report.solved.push_back({s.prime, r, d, res.training_nullity, res.verified.size()});
            return cache.emplace(std::pair{r, d}, std::move(res)).first->second;
        };
        std::vector<std::pair<int, int>> live_corners;
        for (auto [r, d] : corners) {
            if (!solve(r, d).verified.empty()) live_corners.emplace_back(r, d);
        }
        for (auto [r, d] : shapes) {
            const bool covered = std::any_of(live_corners.begin(), live_corners.end(),
                                             [&](auto c) { return r <= c.first && d <= c.second; });
            if (!covered) {
                ++pruned_total;
                continue;
            }
            const ShapeResult& res = solve(r, d);
            if (!res.verified.empty()) {
                results[si].hit = std::pair{r, d};
                results[si].verified = res.verified;
                break;
            }
        }
    }
    report.shapes_pruned = pruned_total;

    // The reported shape is the earliest hit over all primes.
    for (const auto& res : results) {
        if (!res.hit) continue;
        if (!report.hit) {
            report.hit = res.hit;
            continue;
        }
        const auto a = *res.hit;
        const auto b = *report.hit;
        const auto ca = columns(a.first, a.second);
        const auto cb = columns(b.first, b.second);
        if (ca < cb || (ca == cb && a.first < b.first)) report.hit = a;
    }
    if (!report.hit) return report;
    for (std::size_t si = 0; si < sequences.size(); ++si) {
        if (results[si].hit != report.hit) continue;
        for (const auto& op : results[si].verified) {
            GuessCandidate c;
            static_cast<PolyOperator<ModP>&>(c.rec) = op;
            c.prime = sequences[si].prime;
            c.holdout_verified = true;
            const auto pattern = support(op);
            for (std::size_t sj = 0; sj < sequences.size(); ++sj) {
                if (sj == si || sequences[sj].prime == sequences[si].prime || results[sj].hit != report.hit) continue;
                for (const auto& other : results[sj].verified) {
                    if (support(other) == pattern) c.strength = Strength::Strong;
                }
            }
            report.found.push_back(std::move(c));
        }
    }
    return report;
}

void to_json(nlohmann::json& j, const GuessReport& report) {
    nlohmann::json found = nlohmann::json::array();
    for (const auto& c : report.found) {
        nlohmann::json coeffs = nlohmann::json::array();
        for (const auto& poly : c.rec.coeffs) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& v : poly) row.push_back(v.value());
            coeffs.push_back(row);
        }
        found.push_back({{"prime", c.prime},
                         {"order", c.rec.order()},
                         {"degree", c.rec.degree()},
                         {"recurrence", to_string(c.rec)},
                         {"coefficients", coeffs},
                         {"holdout_verified", c.holdout_verified},
                         {"strength", c.strength == Strength::Strong ? "strong" : "weak"}});
    }
    nlohmann::json solved = nlohmann::json::array();
    for (const auto& s : report.solved) {
        solved.push_back({{"prime", s.prime},
                          {"r", s.r},
                          {"d", s.d},
                          {"training_nullity", s.training_nullity},
                          {"verified_nullity", s.verified_nullity}});
    }
    j = nlohmann::json{{"budget", report.budget},
                       {"holdout_fraction", report.holdout},
                       {"margin", report.margin},
                       {"primes", report.primes},
                       {"terms_used", report.terms_used},
                       {"terms_heldout", report.terms_heldout},
                       {"shapes_feasible", report.shapes_feasible},
                       {"shapes_pruned", report.shapes_pruned},
                       {"hit", report.hit ? nlohmann::json{{"r", report.hit->first}, {"d", report.hit->second}}
                                          : nlohmann::json(nullptr)},
                       {"found", found},
                       {"solved", solved}};
}

} // namespace semiperm
