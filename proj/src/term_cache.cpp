#include "semiperm/term_cache.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace semiperm {

namespace {

constexpr std::string_view kMagic = "semiperm-terms v1";

[[noreturn]] void fail(int line, const std::string& what) {
    throw TermCacheError("terms file line " + std::to_string(line) + ": " + what);
}

int parse_int(std::string_view s, int line, const char* what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail(line, std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
}

} // namespace

void write_terms(std::ostream& os, const TermSequence& seq) {
    const ModelSpec& m = seq.model;
    os << kMagic << " model=" << (m.id.empty() ? "custom" : m.id) << " start=" << m.start.x << ',' << m.start.y
       << " west=" << to_string(m.west_barrier) << " south=" << to_string(m.south_barrier)
       << " region=" << to_string(m.region) << " ring=" << seq.ring.to_string() << " kind=" << to_string(seq.kind)
       << " order=" << seq.order() << '\n';
    for (const Integer& v : seq.values) os << v.get_str() << '\n';
}

TermSequence read_terms(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) fail(1, "empty file");
    if (!header.starts_with(kMagic)) fail(1, "missing 'semiperm-terms v1' header");

    std::map<std::string, std::string, std::less<>> fields;
    std::istringstream hs(header.substr(kMagic.size()));
    for (std::string tok; hs >> tok;) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) fail(1, "expected key=value, got '" + tok + "'");
        fields[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto field = [&](const char* key) -> const std::string& {
        auto it = fields.find(key);
        if (it == fields.end()) fail(1, std::string("missing field '") + key + "'");
        return it->second;
    };

    TermSequence seq;
    int order = 0;
    try {
        seq.model.id = field("model");
        const std::string& start = field("start");
        const auto comma = start.find(',');
        if (comma == std::string::npos) fail(1, "bad start '" + start + "'");
        seq.model.start = {parse_int(std::string_view(start).substr(0, comma), 1, "start"),
                           parse_int(std::string_view(start).substr(comma + 1), 1, "start")};
        seq.model.west_barrier = parse_domain(field("west"));
        seq.model.south_barrier = parse_domain(field("south"));
        seq.model.region = parse_region(field("region"));
        seq.ring = CoefficientRing::parse(field("ring"));
        seq.kind = parse_sequence_kind(field("kind"));
        order = parse_int(field("order"), 1, "order");
        seq.model.validate();
    } catch (const TermCacheError&) {
        throw;
    } catch (const std::exception& e) {
        fail(1, e.what());
    }
    if (order < 0) fail(1, "negative order");
    if (seq.ring.kind() == CoefficientRing::Kind::ExactRational) fail(1, "rational terms are not supported");

    const bool modular = seq.ring.kind() == CoefficientRing::Kind::ModPrime;
    seq.values.reserve(static_cast<std::size_t>(order) + 1);
    std::string text;
    int line = 1;
    while (std::getline(is, text)) {
        ++line;
        if (text.empty()) continue;
        if (static_cast<int>(seq.values.size()) > order) fail(line, "more values than order+1");
        Integer v;
        if (v.set_str(text, 10) != 0) fail(line, "not a decimal integer: '" + text + "'");
        if (modular && (sgn(v) < 0 || v >= seq.ring.prime())) fail(line, "residue outside [0, p)");
        seq.values.push_back(std::move(v));
    }
    if (static_cast<int>(seq.values.size()) != order + 1) {
        fail(line, "expected " + std::to_string(order + 1) + " values, found " + std::to_string(seq.values.size()));
    }
    return seq;
}

void save_terms(const std::filesystem::path& path, const TermSequence& seq) {
    std::ofstream os(path);
    if (!os) throw TermCacheError("cannot open " + path.string() + " for writing");
    write_terms(os, seq);
    if (!os) throw TermCacheError("write to " + path.string() + " failed");
}

TermSequence load_terms(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw TermCacheError("cannot open " + path.string());
    return read_terms(is);
}

TermSequence compute_terms(const ModelSpec& m, int order, SequenceKind kind, const CoefficientRing& ring,
                           unsigned threads) {
    TermSequence seq{m, kind, ring, {}};
    if (ring.kind() == CoefficientRing::Kind::ModPrime) {
        for (std::uint32_t v : walk_sequence_mod(m, order, kind, ring.prime())) seq.values.emplace_back(v);
    } else {
        seq.ring = CoefficientRing::exact_integer();
        seq.values = walk_sequence_exact(m, order, kind, threads);
    }
    return seq;
}

} // namespace semiperm
