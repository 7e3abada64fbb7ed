#include "acta/codec.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

namespace acta {

std::int64_t InputVariableSpec::cardinality() const {
    if (kind == Kind::IntegerRange) return hi - lo + 1;
    return static_cast<std::int64_t>(categories.size());
}

void InputVariableSpec::validate() const {
    if (name.empty()) throw ConfigError("input variable with empty name");
    if (kind == Kind::IntegerRange) {
        if (lo >= hi) throw ConfigError("variable '" + name + "': lo must be < hi");
    } else {
        if (categories.empty()) throw ConfigError("variable '" + name + "': no categories");
        std::set<std::string> seen(categories.begin(), categories.end());
        if (seen.size() != categories.size()) {
            throw ConfigError("variable '" + name + "': duplicate categories");
        }
    }
}

std::uint64_t InputSpace::combination_count() const {
    std::uint64_t total = 1;
    for (const auto& v : variables) total *= static_cast<std::uint64_t>(v.cardinality());
    return total;
}

void InputSpace::validate() const {
    if (variables.empty()) throw ConfigError("input space has no variables");
    std::set<std::string> names;
    for (const auto& v : variables) {
        v.validate();
        if (!names.insert(v.name).second) throw ConfigError("duplicate variable name '" + v.name + "'");
    }
}

namespace {

// [0, cardinality) ordinal of the raw value
std::int64_t ordinal_of(const InputVariableSpec& v, std::int64_t value) {
    if (v.kind == InputVariableSpec::Kind::IntegerRange) return value - v.lo;
    return value;
}

bool value_in_domain(const InputVariableSpec& v, std::int64_t value) {
    const std::int64_t ord = ordinal_of(v, value);
    return ord >= 0 && ord < v.cardinality();
}

}  // namespace

bool point_valid(const InputSpace& space, const TestPoint& point) {
    if (point.values.size() != space.dimension()) return false;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        if (!value_in_domain(space.variables[i], point.values[i])) return false;
    }
    return true;
}

void require_valid(const InputSpace& space, const TestPoint& point) {
    if (point.values.size() != space.dimension()) {
        throw ShapeError(shape_msg("test point", space.dimension(), point.values.size()));
    }
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        if (!value_in_domain(space.variables[i], point.values[i])) {
            throw DomainError("value " + std::to_string(point.values[i]) + " outside domain of '" +
                              space.variables[i].name + "'");
        }
    }
}

EncodedTest encode(const InputSpace& space, const TestPoint& point) {
    require_valid(space, point);
    EncodedTest enc;
    enc.features.resize(space.dimension());
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto& v = space.variables[i];
        const std::int64_t span = v.cardinality() - 1;
        if (span == 0) {
            enc.features[i] = 0.0;  // single-valued categorical
            continue;
        }
        const double ord = static_cast<double>(ordinal_of(v, point.values[i]));
        enc.features[i] = 2.0 * ord / static_cast<double>(span) - 1.0;
    }
    return enc;
}

TestPoint decode(const InputSpace& space, const EncodedTest& enc) {
    if (enc.features.size() != space.dimension()) {
        throw ShapeError(shape_msg("encoded test", space.dimension(), enc.features.size()));
    }
    TestPoint point;
    point.values.resize(space.dimension());
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto& v = space.variables[i];
        const std::int64_t span = v.cardinality() - 1;
        double f = enc.features[i];
        if (!std::isfinite(f)) f = -1.0;
        const double ord_real = (f + 1.0) * 0.5 * static_cast<double>(span);
        std::int64_t ord = static_cast<std::int64_t>(std::floor(ord_real + 0.5));  // half-up
        if (ord < 0) ord = 0;
        if (ord > span) ord = span;
        point.values[i] = (v.kind == InputVariableSpec::Kind::IntegerRange) ? v.lo + ord : ord;
    }
    return point;
}

TestPoint uniform_point(const InputSpace& space, Rng& rng) {
    TestPoint point;
    point.values.resize(space.dimension());
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto& v = space.variables[i];
        const std::int64_t ord = rng.range(0, v.cardinality() - 1);
        point.values[i] = (v.kind == InputVariableSpec::Kind::IntegerRange) ? v.lo + ord : ord;
    }
    return point;
}

std::uint64_t point_index(const InputSpace& space, const TestPoint& point) {
    require_valid(space, point);
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto& v = space.variables[i];
        index = index * static_cast<std::uint64_t>(v.cardinality()) +
                static_cast<std::uint64_t>(ordinal_of(v, point.values[i]));
    }
    return index;
}

TestPoint point_from_index(const InputSpace& space, std::uint64_t index) {
    TestPoint point;
    point.values.resize(space.dimension());
    for (std::size_t i = space.dimension(); i-- > 0;) {
        const auto& v = space.variables[i];
        const std::uint64_t card = static_cast<std::uint64_t>(v.cardinality());
        const std::int64_t ord = static_cast<std::int64_t>(index % card);
        index /= card;
        point.values[i] = (v.kind == InputVariableSpec::Kind::IntegerRange) ? v.lo + ord : ord;
    }
    if (index != 0) throw DomainError("point index outside space");
    return point;
}

std::string value_string(const InputSpace& space, const TestPoint& point, std::size_t var) {
    const auto& v = space.variables.at(var);
    const std::int64_t value = point.values.at(var);
    if (v.kind == InputVariableSpec::Kind::IntegerRange) return std::to_string(value);
    if (!value_in_domain(v, value)) {
        throw DomainError("category index " + std::to_string(value) + " outside '" + v.name + "'");
    }
    return v.categories[static_cast<std::size_t>(value)];
}

std::string space_to_json(const InputSpace& space) {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : space.variables) {
        nlohmann::json j;
        j["name"] = v.name;
        if (v.kind == InputVariableSpec::Kind::IntegerRange) {
            j["kind"] = "range";
            j["lo"] = v.lo;
            j["hi"] = v.hi;
        } else {
            j["kind"] = "categorical";
            j["categories"] = v.categories;
        }
        vars.push_back(std::move(j));
    }
    return nlohmann::json{{"variables", vars}}.dump();
}

InputSpace space_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad input-space json: ") + e.what());
    }
    InputSpace space;
    try {
        for (const auto& jv : j.at("variables")) {
            InputVariableSpec v;
            v.name = jv.at("name").get<std::string>();
            const std::string kind = jv.at("kind").get<std::string>();
            if (kind == "range") {
                v.kind = InputVariableSpec::Kind::IntegerRange;
                v.lo = jv.at("lo").get<std::int64_t>();
                v.hi = jv.at("hi").get<std::int64_t>();
            } else if (kind == "categorical") {
                v.kind = InputVariableSpec::Kind::Categorical;
                v.categories = jv.at("categories").get<std::vector<std::string>>();
            } else {
                throw ConfigError("unknown variable kind '" + kind + "'");
            }
            space.variables.push_back(std::move(v));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad input-space json: ") + e.what());
    }
    space.validate();
    return space;
}

}  // namespace acta
