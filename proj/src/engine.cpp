#include "semiperm/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

namespace semiperm {

std::size_t cell_budget() {
    if (const char* env = std::getenv("SEMIPERM_CELL_BUDGET"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultCellBudget;
}

std::string_view to_string(SequenceKind k) noexcept {
    return k == SequenceKind::Totals ? "totals" : "returns";
}

SequenceKind parse_sequence_kind(std::string_view text) {
    if (text == "totals") return SequenceKind::Totals;
    if (text == "returns") return SequenceKind::Returns;
    throw std::invalid_argument("unknown sequence kind '" + std::string(text) + "'");
}

namespace {

// Rows and columns live in [lo(n), hi(n)] at step n. Returns sequences keep
// only cells that can still reach the start in the remaining steps.
struct Band {
    int order;
    bool trimmed;
    [[nodiscard]] int lo(int n) const noexcept { return trimmed ? std::max(0, n - order / 2) : 0; }
    [[nodiscard]] int hi(int n) const noexcept { return trimmed ? std::min(n, order / 2) : n; }
    [[nodiscard]] bool contains(int n, int a) const noexcept { return a >= lo(n) && a <= hi(n); }
};

struct ModAdd32 {
    using word = std::uint32_t;
    std::uint32_t p;
    [[nodiscard]] word add(word x, word y) const noexcept {
        const word s = x + y;
        return std::min(s, s - p);
    }
    [[nodiscard]] word finish(word x) const noexcept { return x; }
    [[nodiscard]] word one() const noexcept { return 1 % p; }
    [[nodiscard]] word scaled(word x, int k) const noexcept {
        return static_cast<word>(static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(k) % p);
    }
    // 4 a - f
    [[nodiscard]] word next_total(word a, word f) const noexcept {
        return static_cast<word>((4 * static_cast<std::uint64_t>(a) + p - f) % p);
    }
};

struct ModAdd64 {
    using word = std::uint64_t;
    std::uint64_t p;
    [[nodiscard]] word add(word x, word y) const noexcept {
        const word s = x + y;
        return std::min(s, s - p);
    }
    [[nodiscard]] word finish(word x) const noexcept { return x; }
    [[nodiscard]] word one() const noexcept { return 1 % p; }
    [[nodiscard]] word scaled(word x, int k) const noexcept {
        return static_cast<word>(static_cast<unsigned __int128>(x) * static_cast<unsigned>(k) % p);
    }
    [[nodiscard]] word next_total(word a, word f) const noexcept {
        return static_cast<word>((4 * static_cast<unsigned __int128>(a) + p - f) % p);
    }
};

struct ScaledReal {
    using word = double;
    [[nodiscard]] word add(word x, word y) const noexcept { return x + y; }
    [[nodiscard]] word finish(word x) const noexcept { return 0.25 * x; }
    [[nodiscard]] word one() const noexcept { return 1.0; }
    [[nodiscard]] word scaled(word x, int k) const noexcept { return x * k; }
    // Both inputs carry the 4^-n scale of step n; the result carries 4^-(n+1).
    [[nodiscard]] word next_total(word a, word f) const noexcept { return a - 0.25 * f; }
};

template <class Policy>
class LatticeRun {
public:
    using word = typename Policy::word;

    LatticeRun(const ModelSpec& m, int order, SequenceKind kind, Policy pol)
        : m_(m), order_(order), kind_(kind), pol_(pol), band_{order, kind == SequenceKind::Returns},
          width_(static_cast<std::size_t>(band_.hi(order)) + 1), cells_(width_ * width_, word{}),
          t_(width_ + 2, word{}), out_(static_cast<std::size_t>(order) + 1, word{}),
          lost_(static_cast<std::size_t>(order) + 1, word{}) {}

    std::vector<word> run() {
        cells_[0] = pol_.one();
        record(0, 0);
        constexpr int kSweep = 24;
        for (int base = 0; base < order_; base += kSweep) {
            const int steps = std::min(kSweep, order_ - base);
            const int wmax = band_.hi(base + 1);
            const int wmin = band_.lo(base + 1) - (steps - 1);
            for (int w = wmax; w >= wmin; --w) {
                for (int s = 1; s <= steps; ++s) {
                    const int a = w + s - 1;
                    const int n = base + s;
                    if (band_.contains(n, a)) step_row(n, a);
                }
            }
        }
        if (kind_ == SequenceKind::Totals) {
            out_[0] = pol_.one();
            for (int n = 0; n < order_; ++n) out_[n + 1] = pol_.next_total(out_[n], lost_[n]);
        }
        return out_;
    }

private:
    word* row(int a) noexcept { return cells_.data() + static_cast<std::size_t>(a) * width_; }

    [[nodiscard]] long long coord_i(int n, int a, int b) const noexcept {
        return static_cast<long long>(m_.start.x) + a + b - n;
    }
    [[nodiscard]] long long coord_j(int a, int b) const noexcept { return static_cast<long long>(m_.start.y) + a - b; }

    // Value at (a, b) of step n-1, zero outside the band.
    word old_at(int n, int a, int b) noexcept {
        if (a < 0 || b < 0 || !band_.contains(n - 1, a) || !band_.contains(n - 1, b)) return word{};
        return row(a)[b];
    }

    // Row a of step n from rows a and a-1 of step n-1.
    void step_row(int n, int a) {
        const int olo = band_.lo(n - 1);
        const int ohi = band_.hi(n - 1);
        const int clo = band_.lo(n);
        const int chi = band_.hi(n);
        const bool cur_ok = a >= olo && a <= ohi;
        const bool prev_ok = a - 1 >= olo && a - 1 <= ohi;

        // Barrier cells, computed before the row is overwritten.
        int bw = -1;
        int bs = -1;
        word vw{};
        word vs{};
        {
            const int b = n - 1 - m_.start.x - a; // W source on the line i = 0
            if (b >= clo && b <= chi && b <= n - 1 && contains(m_.west_barrier, coord_j(a, b))) {
                bw = b;
                word v = pol_.add(old_at(n, a - 1, b), old_at(n, a - 1, b - 1));
                if (!m_.south_blocked(static_cast<int>(coord_i(n - 1, a, b - 1)), static_cast<int>(coord_j(a, b - 1))))
                    v = pol_.add(v, old_at(n, a, b - 1));
                vw = pol_.finish(v);
            }
        }
        {
            const int b = m_.start.y + a + 1; // S source on the line j = 0
            if (b >= clo && b <= chi && b >= 1 && contains(m_.south_barrier, coord_i(n - 1, a, b - 1))) {
                bs = b;
                word v = pol_.add(old_at(n, a - 1, b), old_at(n, a - 1, b - 1));
                if (!m_.west_blocked(static_cast<int>(coord_i(n - 1, a, b)), static_cast<int>(coord_j(a, b))))
                    v = pol_.add(v, old_at(n, a, b));
                vs = pol_.finish(v);
            }
        }

        word* t = t_.data() + 1; // t[-1] is addressable and zero
        word* cur = row(a);
        const word* prev = a > 0 ? row(a - 1) : nullptr;
        const int tlo = std::max(clo - 1, 0);
        t[-1] = word{};
        const int rlo = std::max(tlo, olo);
        const int rhi = std::min(chi, ohi);
        if (!cur_ok && !prev_ok) {
            for (int b = tlo; b <= chi; ++b) t[b] = word{};
        } else {
            for (int b = tlo; b < rlo; ++b) t[b] = word{};
            for (int b = std::max(rhi + 1, tlo); b <= chi; ++b) t[b] = word{};
        }
        if (cur_ok && prev_ok) {
            for (int b = rlo; b <= rhi; ++b) t[b] = pol_.add(cur[b], prev[b]);
        } else if (cur_ok) {
            for (int b = rlo; b <= rhi; ++b) t[b] = cur[b];
        } else if (prev_ok) {
            for (int b = rlo; b <= rhi; ++b) t[b] = prev[b];
        }
        for (int b = clo; b <= chi; ++b) cur[b] = pol_.finish(pol_.add(t[b], t[b - 1]));

        if (bw >= 0) cur[bw] = vw;
        if (bs >= 0) cur[bs] = vs;
        mask_region(n, a, clo, chi);
        record(n, a);
    }

    // i >= 0 and j >= 0 on row a of step n is the column range [b0, b1].
    void mask_region(int n, int a, int clo, int chi) {
        if (m_.region == PlaneRegion::FullPlane) return;
        const long long b0 = static_cast<long long>(n) - m_.start.x - a;
        const long long b1 = static_cast<long long>(a) + m_.start.y;
        word* cur = row(a);
        if (m_.region == PlaneRegion::QuarterPlane) {
            for (long long b = clo; b <= std::min<long long>(b0 - 1, chi); ++b) cur[b] = word{};
            for (long long b = std::max<long long>(b1 + 1, clo); b <= chi; ++b) cur[b] = word{};
        } else {
            const long long lo = std::max<long long>(b0, clo);
            const long long hi = std::min<long long>(b1, chi);
            for (long long b = lo; b <= hi; ++b) cur[b] = word{};
        }
    }

    // Number of the four steps that are forbidden from (i, j).
    [[nodiscard]] int forbidden_moves(long long i, long long j) const noexcept {
        int k = 0;
        if (!m_.admits(i + 1, j)) ++k;
        if (!m_.admits(i, j + 1)) ++k;
        if (m_.west_blocked(i, j) || !m_.admits(i - 1, j)) ++k;
        if (m_.south_blocked(i, j) || !m_.admits(i, j - 1)) ++k;
        return k;
    }

    // Totals satisfy a_{n+1} = 4 a_n - (weight of forbidden moves at step n).
    // Forbidden moves start only on the lines i = 0, -1 and j = 0, -1, each
    // of which meets a row in at most one cell.
    void record(int n, int a) {
        if (kind_ == SequenceKind::Returns) {
            if (n % 2 == 0 && a == n / 2) out_[n] = row(a)[a];
            return;
        }
        const int lo = band_.lo(n);
        const int hi = band_.hi(n);
        const word* cur = row(a);
        long long seen[4];
        int count = 0;
        auto visit = [&](long long b) {
            if (b < lo || b > hi) return;
            for (int k = 0; k < count; ++k)
                if (seen[k] == b) return;
            seen[count++] = b;
            const int moves = forbidden_moves(coord_i(n, a, static_cast<int>(b)), coord_j(a, static_cast<int>(b)));
            if (moves > 0) lost_[n] = pol_.add(lost_[n], pol_.scaled(cur[b], moves));
        };
        for (int line : {0, -1}) {
            visit(static_cast<long long>(n) + line - m_.start.x - a); // i = line
            visit(static_cast<long long>(m_.start.y) + a - line);     // j = line
        }
    }

    const ModelSpec& m_;
    int order_;
    SequenceKind kind_;
    Policy pol_;
    Band band_;
    std::size_t width_;
    std::vector<word> cells_;
    std::vector<word> t_;
    std::vector<word> out_;
    std::vector<word> lost_;
};

void check_budget(int order, SequenceKind kind, std::size_t budget) {
    if (order < 0) throw std::invalid_argument("order must be nonnegative");
    const std::size_t need = engine_cell_estimate(order, kind);
    if (need > budget) {
        throw ResourceLimitExceeded(std::string(to_string(kind)) + " to order " + std::to_string(order) +
                                    " needs " + std::to_string(need) + " cells, budget is " + std::to_string(budget));
    }
}

// Flush denormals to zero for the scaled floating point run: far-off cells
// underflow long before they could matter.
class FlushDenormals {
public:
    FlushDenormals() {
#if defined(__SSE__)
        saved_ = _mm_getcsr();
        _mm_setcsr(saved_ | 0x8040);
#endif
    }
    ~FlushDenormals() {
#if defined(__SSE__)
        _mm_setcsr(saved_);
#endif
    }
    FlushDenormals(const FlushDenormals&) = delete;
    FlushDenormals& operator=(const FlushDenormals&) = delete;

private:
    unsigned saved_ = 0;
};

} // namespace

std::size_t engine_cell_estimate(int order, SequenceKind kind) noexcept {
    const auto w = static_cast<std::size_t>(kind == SequenceKind::Returns ? order / 2 : order) + 1;
    return w * w;
}

std::vector<std::uint32_t> walk_sequence_mod(const ModelSpec& m, int order, SequenceKind kind, std::uint32_t p,
                                             std::size_t budget) {
    m.validate();
    if (p < 2 || p >= (1U << 31)) throw std::invalid_argument("modulus must lie in [2, 2^31)");
    check_budget(order, kind, budget);
    return LatticeRun<ModAdd32>(m, order, kind, ModAdd32{p}).run();
}

std::vector<std::uint64_t> walk_sequence_mod64(const ModelSpec& m, int order, SequenceKind kind, std::uint64_t p,
                                               std::size_t budget) {
    m.validate();
    if (p < 2 || p >= (std::uint64_t{1} << 63)) throw std::invalid_argument("modulus must lie in [2, 2^63)");
    check_budget(order, kind, budget);
    return LatticeRun<ModAdd64>(m, order, kind, ModAdd64{p}).run();
}

std::vector<double> walk_sequence_log(const ModelSpec& m, int order, SequenceKind kind, std::size_t budget) {
    m.validate();
    check_budget(order, kind, budget);
    std::vector<double> scaled;
    {
        FlushDenormals guard;
        scaled = LatticeRun<ScaledReal>(m, order, kind, ScaledReal{}).run();
    }
    const double log4 = std::log(4.0);
    std::vector<double> out(scaled.size());
    for (std::size_t n = 0; n < scaled.size(); ++n) {
        out[n] = scaled[n] > 0 ? std::log(scaled[n]) + static_cast<double>(n) * log4
                               : -std::numeric_limits<double>::infinity();
    }
    return out;
}

const std::vector<std::uint64_t>& crt_primes(std::size_t count) {
    static std::mutex mu;
    static std::vector<std::uint64_t> primes;
    std::lock_guard lock(mu);
    std::uint64_t c = primes.empty() ? (std::uint64_t{1} << 62) - 1 : primes.back() - 2;
    while (primes.size() < count) {
        if (is_prime(c)) primes.push_back(c);
        c -= 2;
    }
    return primes;
}

std::vector<Integer> walk_sequence_exact(const ModelSpec& m, int order, SequenceKind kind, unsigned threads,
                                         std::size_t budget) {
    m.validate();
    check_budget(order, kind, budget);
    // Every term is at most 4^n < 2^(2n+1); primes exceed 2^61. One extra
    // prime checks the reconstruction.
    const std::size_t needed = static_cast<std::size_t>(2 * order + 1) / 61 + 1;
    const std::vector<std::uint64_t> primes(crt_primes(needed + 1).begin(),
                                            crt_primes(needed + 1).begin() + static_cast<long>(needed + 1));

    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(primes.size()));
    // Each worker holds its own lattice.
    const std::size_t per = engine_cell_estimate(order, kind);
    threads = std::max<unsigned>(1, std::min<unsigned>(threads, static_cast<unsigned>(budget / std::max<std::size_t>(per, 1))));

    std::vector<std::vector<std::uint64_t>> residues(primes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < primes.size(); k = next++) {
            residues[k] = LatticeRun<ModAdd64>(m, order, kind, ModAdd64{primes[k]}).run();
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    // Garner, using only as many primes as each term needs.
    std::vector<Integer> out(static_cast<std::size_t>(order) + 1);
    for (int n = 0; n <= order; ++n) {
        const std::size_t k_n = static_cast<std::size_t>(2 * n + 1) / 61 + 1;
        Integer x = Integer(static_cast<unsigned long>(residues[0][n]));
        Integer mod = Integer(static_cast<unsigned long>(primes[0]));
        for (std::size_t k = 1; k < k_n; ++k) {
            const std::uint64_t p = primes[k];
            const std::uint64_t xr = mpz_fdiv_ui(x.get_mpz_t(), p);
            const std::uint64_t mr = mpz_fdiv_ui(mod.get_mpz_t(), p);
            const std::uint64_t diff = residues[k][n] >= xr ? residues[k][n] - xr : residues[k][n] + p - xr;
            const std::uint64_t coef = mul_mod(diff, pow_mod(mr, p - 2, p), p);
            x += mod * Integer(static_cast<unsigned long>(coef));
            mod *= Integer(static_cast<unsigned long>(p));
        }
        const std::uint64_t check = primes.back();
        if (mpz_fdiv_ui(x.get_mpz_t(), check) != residues.back()[n]) {
            throw std::logic_error("CRT reconstruction failed the check prime at n = " + std::to_string(n));
        }
        out[n] = std::move(x);
    }
    return out;
}

} // namespace semiperm
