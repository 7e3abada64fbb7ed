#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acta/errors.hpp"
#include "acta/rng.hpp"

namespace acta {

struct InputVariableSpec {
    enum class Kind { IntegerRange, Categorical };

    std::string name;
    Kind kind = Kind::IntegerRange;
    std::int64_t lo = 0, hi = 0;          // inclusive bounds, IntegerRange only
    std::vector<std::string> categories;  // Categorical only, declaration order

    std::int64_t cardinality() const;
    void validate() const;
};

struct InputSpace {
    std::vector<InputVariableSpec> variables;

    std::size_t dimension() const { return variables.size(); }
    std::uint64_t combination_count() const;
    void validate() const;
};

/// One raw input-value combination. Integer-range slots hold the value itself;
/// categorical slots hold the category index in declaration order.
struct TestPoint {
    std::vector<std::int64_t> values;

    bool operator==(const TestPoint&) const = default;
};

/// The CGAN-side representation: one feature in [-1, 1] per variable.
struct EncodedTest {
    std::vector<double> features;

    bool operator==(const EncodedTest&) const = default;
};

/// Integer coding of the targeted performance requirement.
struct ConditionLabel {
    std::uint32_t id = 0;

    bool operator==(const ConditionLabel&) const = default;
};

bool point_valid(const InputSpace& space, const TestPoint& point);
void require_valid(const InputSpace& space, const TestPoint& point);

// Affine map of each value onto [-1, 1]. DomainError on out-of-domain values.
EncodedTest encode(const InputSpace& space, const TestPoint& point);

// Inverse affine map, round half-up, clamped into the domain. Total: any real
// input (including non-finite, mapped to the lower bound) yields a valid point.
TestPoint decode(const InputSpace& space, const EncodedTest& enc);

TestPoint uniform_point(const InputSpace& space, Rng& rng);

// Mixed-radix index of a point within the space's enumeration order, and back.
std::uint64_t point_index(const InputSpace& space, const TestPoint& point);
TestPoint point_from_index(const InputSpace& space, std::uint64_t index);

// Raw value as text: the integer for ranges, the category name for categoricals.
std::string value_string(const InputSpace& space, const TestPoint& point, std::size_t var);

std::string space_to_json(const InputSpace& space);
InputSpace space_from_json(const std::string& json_text);

}  // namespace acta
