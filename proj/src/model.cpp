#include "semiperm/model.hpp"

#include <array>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace semiperm {

namespace {

constexpr std::array<std::pair<DomainSpec, std::string_view>, 6> kDomainNames = {{
    {DomainSpec::All, "all"},
    {DomainSpec::Empty, "empty"},
    {DomainSpec::Pos, "pos"},
    {DomainSpec::Neg, "neg"},
    {DomainSpec::NonNeg, "nonneg"},
    {DomainSpec::NonPos, "nonpos"},
}};

constexpr std::array<std::pair<PlaneRegion, std::string_view>, 3> kRegionNames = {{
    {PlaneRegion::FullPlane, "full"},
    {PlaneRegion::QuarterPlane, "quarter"},
    {PlaneRegion::AvoidNonNegQuadrant, "avoid-quadrant"},
}};

constexpr std::array<std::pair<SignRegion, std::string_view>, 6> kSignNames = {{
    {SignRegion::All, "all"},
    {SignRegion::Pos, "pos"},
    {SignRegion::Neg, "neg"},
    {SignRegion::NonNeg, "nonneg"},
    {SignRegion::NonPos, "nonpos"},
    {SignRegion::Zero, "zero"},
}};

template <class E, std::size_t K>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, K>& table, E e) {
    for (const auto& [v, n] : table) {
        if (v == e) return n;
    }
    return "?";
}

template <class E, std::size_t K>
E parse_name(const std::array<std::pair<E, std::string_view>, K>& table, std::string_view text, const char* what) {
    for (const auto& [v, n] : table) {
        if (n == text) return v;
    }
    throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(text) + "'");
}

ModelSpec make(std::string id, Point start, DomainSpec west, DomainSpec south, PlaneRegion region) {
    ModelSpec m;
    m.id = std::move(id);
    m.start = start;
    m.west_barrier = west;
    m.south_barrier = south;
    m.region = region;
    return m;
}

} // namespace

std::string_view to_string(DomainSpec d) noexcept { return name_of(kDomainNames, d); }
DomainSpec parse_domain(std::string_view text) { return parse_name(kDomainNames, text, "barrier domain"); }
std::string_view to_string(PlaneRegion r) noexcept { return name_of(kRegionNames, r); }
PlaneRegion parse_region(std::string_view text) { return parse_name(kRegionNames, text, "region"); }
std::string_view to_string(SignRegion r) noexcept { return name_of(kSignNames, r); }
SignRegion parse_sign_region(std::string_view text) { return parse_name(kSignNames, text, "sign region"); }

void ModelSpec::validate() const {
    if (!admits(start.x, start.y)) {
        throw std::invalid_argument("model " + id + ": start (" + std::to_string(start.x) + "," +
                                    std::to_string(start.y) + ") lies outside region " +
                                    std::string(to_string(region)));
    }
}

ModelSpec ModelSpec::with_start(Point p) const {
    ModelSpec m = *this;
    m.start = p;
    m.validate();
    return m;
}

std::string ModelSpec::describe() const {
    std::ostringstream os;
    os << (id.empty() ? "custom" : id) << " start=" << start.x << "," << start.y << " west=" << to_string(west_barrier)
       << " south=" << to_string(south_barrier) << " region=" << to_string(region);
    return os.str();
}

const std::vector<ModelSpec>& model_catalog() {
    static const std::vector<ModelSpec> catalog = {
        make("S2", {-1, -1}, DomainSpec::All, DomainSpec::All, PlaneRegion::FullPlane),
        make("S3", {-1, -1}, DomainSpec::NonNeg, DomainSpec::NonNeg, PlaneRegion::FullPlane),
        make("S4a", {-1, -1}, DomainSpec::Neg, DomainSpec::Neg, PlaneRegion::FullPlane),
        make("S4b", {-1, -1}, DomainSpec::NonPos, DomainSpec::NonPos, PlaneRegion::FullPlane),
        make("S5", {-1, -1}, DomainSpec::Pos, DomainSpec::Pos, PlaneRegion::FullPlane),
        make("QP", {0, 0}, DomainSpec::Empty, DomainSpec::Empty, PlaneRegion::QuarterPlane),
        make("TQP", {-1, -1}, DomainSpec::Empty, DomainSpec::Empty, PlaneRegion::AvoidNonNegQuadrant),
    };
    return catalog;
}

const ModelSpec& catalog_model(std::string_view id) {
    for (const auto& m : model_catalog()) {
        if (m.id == id) return m;
    }
    throw std::invalid_argument("unknown model id '" + std::string(id) + "'");
}

void to_json(nlohmann::json& j, const ModelSpec& m) {
    j = nlohmann::json{{"id", m.id},
                       {"start", {m.start.x, m.start.y}},
                       {"west_barrier", std::string(to_string(m.west_barrier))},
                       {"south_barrier", std::string(to_string(m.south_barrier))},
                       {"region", std::string(to_string(m.region))}};
}

void from_json(const nlohmann::json& j, ModelSpec& m) {
    m = ModelSpec{};
    m.id = j.value("id", std::string("custom"));
    const auto& s = j.at("start");
    if (!s.is_array() || s.size() != 2) throw std::invalid_argument("model start must be a two-element array");
    m.start = {s[0].get<int>(), s[1].get<int>()};
    m.west_barrier = parse_domain(j.value("west_barrier", std::string("empty")));
    m.south_barrier = parse_domain(j.value("south_barrier", std::string("empty")));
    m.region = parse_region(j.value("region", std::string("full")));
    m.validate();
}

Interpretation parse_interpretation(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
        throw std::invalid_argument("interpretation must look like 'y-all,x-all'");
    }
    auto part = [](std::string_view p, char var) {
        if (p.size() < 3 || p[0] != var || p[1] != '-') {
            throw std::invalid_argument(std::string("expected '") + var + "-<domain>' in interpretation, got '" +
                                        std::string(p) + "'");
        }
        return parse_domain(p.substr(2));
    };
    return {part(text.substr(0, comma), 'y'), part(text.substr(comma + 1), 'x')};
}

std::string to_string(const Interpretation& in) {
    return "y-" + std::string(to_string(in.west)) + ",x-" + std::string(to_string(in.south));
}

} // namespace semiperm
