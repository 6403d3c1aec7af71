#include "semiperm/recurrence.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <map>
#include <sstream>

namespace semiperm {

namespace {

template <class R>
void trim(PolyOperator<R>& op) {
    while (!op.coeffs.empty()) {
        const auto& top = op.coeffs.back();
        if (std::any_of(top.begin(), top.end(), [](const R& c) { return !is_zero(c); })) break;
        op.coeffs.pop_back();
    }
    if (op.coeffs.empty()) throw std::invalid_argument("the zero operator has no canonical form");
    int degree = 0;
    for (const auto& p : op.coeffs)
        for (int e = 0; e < static_cast<int>(p.size()); ++e)
            if (!is_zero(p[e])) degree = std::max(degree, e);
    for (auto& p : op.coeffs) p.resize(static_cast<std::size_t>(degree) + 1, R{});
}

// Leading coefficient of the leading polynomial.
template <class R>
const R& leading(const PolyOperator<R>& op) {
    const auto& top = op.coeffs.back();
    for (auto it = top.rbegin(); it != top.rend(); ++it)
        if (!is_zero(*it)) return *it;
    throw std::logic_error("trimmed operator with zero leading polynomial");
}

template <class R>
void bind_modulus(PolyOperator<R>& op, std::uint32_t p) {
    for (auto& poly : op.coeffs)
        for (auto& c : poly)
            if (c.modulus() == 0) c = ModP(0, p);
}

template <class R>
PolyOperator<R> mod_canonical(PolyOperator<R> op) {
    trim(op);
    const ModP inv = leading(op).inverse();
    bind_modulus(op, inv.modulus());
    for (auto& poly : op.coeffs)
        for (auto& c : poly) c *= inv;
    return op;
}

std::string integer_poly(const std::vector<Integer>& p, char var) {
    std::ostringstream os;
    bool first = true;
    for (int e = static_cast<int>(p.size()) - 1; e >= 0; --e) {
        if (sgn(p[e]) == 0) continue;
        Integer c = p[e];
        if (first) {
            if (sgn(c) < 0) os << '-';
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
        }
        c = abs(c);
        first = false;
        if (e == 0) {
            os << c.get_str();
            continue;
        }
        if (c != 1) os << c.get_str() << '*';
        os << var;
        if (e > 1) os << '^' << e;
    }
    if (first) os << '0';
    return os.str();
}

// Residues printed in (-p/2, p/2].
std::vector<Integer> symmetric(const std::vector<ModP>& p) {
    std::vector<Integer> out;
    for (const ModP& c : p) {
        long long v = c.value();
        if (c.modulus() != 0 && v > static_cast<long long>(c.modulus() / 2)) v -= c.modulus();
        out.emplace_back(static_cast<long>(v));
    }
    return out;
}

std::string shift_name(int k) { return k == 0 ? "a(n)" : "a(n+" + std::to_string(k) + ")"; }

std::string join_recurrence(const std::vector<std::vector<Integer>>& polys) {
    std::ostringstream os;
    bool first = true;
    for (int k = static_cast<int>(polys.size()) - 1; k >= 0; --k) {
        if (std::all_of(polys[k].begin(), polys[k].end(), [](const Integer& c) { return sgn(c) == 0; })) continue;
        if (!first) os << " + ";
        first = false;
        os << '(' << integer_poly(polys[k], 'n') << ")*" << shift_name(k);
    }
    if (first) os << '0';
    os << " = 0";
    return os.str();
}

// ---- parser --------------------------------------------------------------

// A parsed expression is linear in the a(n+k): key k for a(n+k), kScalar
// for the part free of a.
constexpr int kScalar = INT_MIN;
using Poly = std::vector<Integer>;
using Expr = std::map<int, Poly>;

Poly poly_add(const Poly& a, const Poly& b, int sign) {
    Poly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign * b[i];
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// p(n + c)
Poly poly_shift(const Poly& p, long c) {
    Poly r;
    const Poly lin{Integer(c), Integer(1)};
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = poly_add(poly_mul(r, lin), Poly{*it}, 1);
    return r;
}

struct Token {
    enum Kind { Number, N, A, LParen, RParen, Plus, Minus, Star, Caret, Equals, End } kind;
    Integer value;
    int line;
    int column;
};

class Parser {
public:
    explicit Parser(std::string_view text) { tokenize(text); }

    Expr equation() {
        Expr lhs = expr();
        if (peek().kind == Token::Equals) {
            next();
            Expr rhs = expr();
            lhs = add(lhs, rhs, -1);
        }
        if (peek().kind != Token::End) error(peek(), "unexpected token");
        return lhs;
    }

    [[noreturn]] void error(const Token& t, const std::string& what) {
        throw RecurrenceParseError(t.line, t.column, what);
    }
    const Token& last() const { return tokens_.back(); }

private:
    void tokenize(std::string_view s) {
        int line = 1;
        int col = 1;
        for (std::size_t i = 0; i < s.size();) {
            const char ch = s[i];
            if (ch == '\n') {
                ++line;
                col = 1;
                ++i;
                continue;
            }
            if (ch == '#') {
                while (i < s.size() && s[i] != '\n') ++i;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++i;
                ++col;
                continue;
            }
            Token t{Token::End, {}, line, col};
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                std::size_t j = i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                t.kind = Token::Number;
                t.value = Integer(std::string(s.substr(i, j - i)));
                col += static_cast<int>(j - i);
                i = j;
                tokens_.push_back(t);
                continue;
            }
            switch (ch) {
            case 'n': t.kind = Token::N; break;
            case 'a': t.kind = Token::A; break;
            case '(': t.kind = Token::LParen; break;
            case ')': t.kind = Token::RParen; break;
            case '+': t.kind = Token::Plus; break;
            case '-': t.kind = Token::Minus; break;
            case '*': t.kind = Token::Star; break;
            case '^': t.kind = Token::Caret; break;
            case '=': t.kind = Token::Equals; break;
            default: throw RecurrenceParseError(line, col, std::string("unexpected character '") + ch + "'");
            }
            tokens_.push_back(t);
            ++i;
            ++col;
        }
        tokens_.push_back(Token{Token::End, {}, line, col});
    }

    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    const Token& expect(Token::Kind k, const char* what) {
        if (peek().kind != k) error(peek(), std::string("expected ") + what);
        return next();
    }

    static Expr add(const Expr& a, const Expr& b, int sign) {
        Expr r = a;
        for (const auto& [k, p] : b) r[k] = poly_add(r[k], p, sign);
        return r;
    }

    Expr mul(const Expr& a, const Expr& b, const Token& where) {
        const bool a_lin = std::any_of(a.begin(), a.end(), [](const auto& kv) { return kv.first != kScalar; });
        const bool b_lin = std::any_of(b.begin(), b.end(), [](const auto& kv) { return kv.first != kScalar; });
        if (a_lin && b_lin) error(where, "product of two sequence terms");
        const Expr& lin = a_lin ? a : b;
        const Expr& sc = a_lin ? b : a;
        const Poly s = sc.count(kScalar) ? sc.at(kScalar) : Poly{};
        Expr r;
        for (const auto& [k, p] : lin) r[k] = poly_mul(p, s);
        return r;
    }

    Expr expr() {
        Expr acc;
        int sign = 1;
        if (peek().kind == Token::Plus || peek().kind == Token::Minus) sign = next().kind == Token::Minus ? -1 : 1;
        acc = add(acc, term(), sign);
        while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
            sign = next().kind == Token::Minus ? -1 : 1;
            acc = add(acc, term(), sign);
        }
        return acc;
    }

    static bool starts_factor(Token::Kind k) {
        return k == Token::Number || k == Token::N || k == Token::A || k == Token::LParen;
    }

    Expr term() {
        Expr acc = power();
        for (;;) {
            if (peek().kind == Token::Star) {
                const Token& t = next();
                acc = mul(acc, power(), t);
            } else if (starts_factor(peek().kind)) {
                const Token& t = peek();
                acc = mul(acc, power(), t);
            } else {
                return acc;
            }
        }
    }

    Expr power() {
        Expr base = atom();
        if (peek().kind != Token::Caret) return base;
        const Token& caret = next();
        const Token& e = expect(Token::Number, "an exponent");
        if (e.value > 64) error(e, "exponent too large");
        if (base.size() != 1 || base.begin()->first != kScalar) error(caret, "only polynomials in n can be raised to a power");
        Poly r{Integer(1)};
        for (long i = 0; i < e.value.get_si(); ++i) r = poly_mul(r, base.begin()->second);
        return Expr{{kScalar, r}};
    }

    Expr atom() {
        const Token& t = next();
        switch (t.kind) {
        case Token::Number: return Expr{{kScalar, Poly{t.value}}};
        case Token::N: return Expr{{kScalar, Poly{Integer(0), Integer(1)}}};
        case Token::LParen: {
            Expr e = expr();
            expect(Token::RParen, "')'");
            return e;
        }
        case Token::A: {
            expect(Token::LParen, "'(' after a");
            expect(Token::N, "n inside a(...)");
            long shift = 0;
            if (peek().kind == Token::Plus || peek().kind == Token::Minus) {
                const int sign = next().kind == Token::Minus ? -1 : 1;
                const Token& k = expect(Token::Number, "a shift");
                if (k.value > 100000) error(k, "shift too large");
                shift = sign * k.value.get_si();
            }
            expect(Token::RParen, "')' closing a(...)");
            return Expr{{static_cast<int>(shift), Poly{Integer(1)}}};
        }
        default: error(t, "expected a number, n, a(n+k) or '('");
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace

RecurrenceParseError::RecurrenceParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line), column_(column) {}

ExactRecurrence canonicalize(const ExactRecurrence& rec) {
    ExactRecurrence out = rec;
    trim(out);
    Integer g = 0;
    for (const auto& p : out.coeffs)
        for (const auto& c : p) g = gcd(g, c);
    if (sgn(leading(out)) < 0) g = -g;
    for (auto& p : out.coeffs)
        for (auto& c : p) c /= g;
    return out;
}

ModRecurrence canonicalize(const ModRecurrence& rec) {
    ModRecurrence out;
    static_cast<PolyOperator<ModP>&>(out) = mod_canonical(static_cast<const PolyOperator<ModP>&>(rec));
    return out;
}

DiffEquation<ModP> canonicalize(const DiffEquation<ModP>& eq) {
    DiffEquation<ModP> out;
    static_cast<PolyOperator<ModP>&>(out) = mod_canonical(static_cast<const PolyOperator<ModP>&>(eq));
    return out;
}

std::vector<ModRecurrence> canonicalize_basis(const std::vector<ModRecurrence>& basis) {
    if (basis.empty()) return {};
    int order = 0;
    int degree = 0;
    std::uint32_t p = 0;
    for (const auto& b : basis) {
        order = std::max(order, b.order());
        degree = std::max(degree, b.degree());
        for (const auto& poly : b.coeffs)
            for (const auto& c : poly)
                if (c.modulus() != 0) p = c.modulus();
    }
    if (p == 0) throw std::invalid_argument("canonicalize_basis: zero vectors only");
    // Flatten with the most significant position (highest shift, highest
    // power) first, then reduce to echelon form.
    const int width = (order + 1) * (degree + 1);
    auto index = [&](int k, int e) { return (order - k) * (degree + 1) + (degree - e); };
    std::vector<std::vector<ModP>> rows;
    for (const auto& b : basis) {
        std::vector<ModP> v(static_cast<std::size_t>(width), ModP(0, p));
        for (int k = 0; k <= b.order(); ++k)
            for (int e = 0; e < static_cast<int>(b.coeffs[k].size()); ++e) v[index(k, e)] += b.coeffs[k][e];
        rows.push_back(std::move(v));
    }
    std::size_t rank = 0;
    for (int col = 0; col < width && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        const ModP inv = rows[rank][col].inverse();
        for (auto& c : rows[rank]) c *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][col].is_zero()) continue;
            const ModP f = rows[i][col];
            for (int j = 0; j < width; ++j) rows[i][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    rows.resize(rank);
    std::vector<ModRecurrence> out;
    for (const auto& v : rows) {
        ModRecurrence rec(order, degree);
        for (int k = 0; k <= order; ++k)
            for (int e = 0; e <= degree; ++e) rec.coeffs[k][e] = v[index(k, e)];
        out.push_back(canonicalize(rec));
    }
    std::sort(out.begin(), out.end(), [](const ModRecurrence& a, const ModRecurrence& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        for (int k = a.order(); k >= 0; --k)
            for (int e = a.degree(); e >= 0; --e)
                if (a.coeffs[k][e].value() != b.coeffs[k][e].value()) return a.coeffs[k][e].value() < b.coeffs[k][e].value();
        return false;
    });
    return out;
}

ModRecurrence reduce(const ExactRecurrence& rec, std::uint32_t p) {
    const ModPRing ring(p);
    ModRecurrence out;
    for (const auto& poly : rec.coeffs) {
        std::vector<ModP> q;
        for (const auto& c : poly) q.push_back(ring.from_integer(c));
        out.coeffs.push_back(std::move(q));
    }
    return out;
}

std::string to_string(const ExactRecurrence& rec) { return join_recurrence(rec.coeffs); }

std::string to_string(const ModRecurrence& rec) {
    std::vector<std::vector<Integer>> polys;
    for (const auto& p : rec.coeffs) polys.push_back(symmetric(p));
    return join_recurrence(polys);
}

std::string to_string(const DiffEquation<ModP>& eq) {
    std::ostringstream os;
    bool first = true;
    for (int i = eq.order(); i >= 0; --i) {
        const auto poly = symmetric(eq.coeffs[i]);
        if (std::all_of(poly.begin(), poly.end(), [](const Integer& c) { return sgn(c) == 0; })) continue;
        if (!first) os << " + ";
        first = false;
        os << '(' << integer_poly(poly, 't') << ")*";
        if (i == 0) os << 'f';
        else if (i == 1) os << "D(f)";
        else os << "D^" << i << "(f)";
    }
    if (first) os << '0';
    os << " = 0";
    return os.str();
}

ExactRecurrence parse_recurrence(std::string_view text) {
    Parser parser(text);
    Expr e = parser.equation();
    if (auto it = e.find(kScalar); it != e.end()) {
        if (std::any_of(it->second.begin(), it->second.end(), [](const Integer& c) { return sgn(c) != 0; })) {
            parser.error(parser.last(), "terms without a(n+k) do not cancel");
        }
        e.erase(it);
    }
    if (e.empty()) parser.error(parser.last(), "no a(n+k) terms");
    const int lo = e.begin()->first;
    const int hi = e.rbegin()->first;
    ExactRecurrence rec;
    rec.coeffs.assign(static_cast<std::size_t>(hi - lo) + 1, {});
    for (auto& [k, p] : e) rec.coeffs[k - lo] = lo == 0 ? p : poly_shift(p, -lo);
    std::size_t width = 1;
    for (auto& p : rec.coeffs) width = std::max(width, p.size());
    for (auto& p : rec.coeffs) p.resize(width, Integer(0));
    bool any = false;
    for (const auto& p : rec.coeffs)
        for (const auto& c : p) any = any || sgn(c) != 0;
    if (!any) parser.error(parser.last(), "the recurrence is identically zero");
    // Keep the shape as written, minus all-zero top rows and degrees.
    trim(rec);
    return rec;
}

ExactRecurrence s2_totals_recurrence() {
    return parse_recurrence("(n+2)(n+4)(n+6)(n^2+2n-1) a(n+2)"
                            " - 4(n+3)(2n^3+9n^2+4n-18) a(n+1)"
                            " - 16(n+1)(n+2)(n+3)(n^2+4n+2) a(n) = 0");
}

} // namespace semiperm
