#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace teamsem {

// A point of a finite structure. Base elements are the original domain
// points, indexed from 0. Fresh elements only exist in bloated models and
// carry the 1-based position at which bloating introduced them. The two
// namespaces never overlap.
class Element {
public:
    static Element base(std::uint32_t index) { return Element(false, index); }
    static Element fresh(std::uint32_t level) { return Element(true, level); }

    bool is_base() const { return !fresh_; }
    bool is_fresh() const { return fresh_; }

    // Base index, or fresh level (>= 1).
    std::uint32_t index() const { return index_; }

    // Base elements sort before fresh ones, then by index.
    auto operator<=>(const Element&) const = default;

    std::string str() const {
        return fresh_ ? "f" + std::to_string(index_) : std::to_string(index_);
    }

private:
    Element(bool fresh, std::uint32_t index) : fresh_(fresh), index_(index) {}

    bool fresh_;
    std::uint32_t index_;
};

using Tuple = std::vector<Element>;
using TupleSet = std::set<Tuple>;

std::string tuple_str(const Tuple& t);

struct ElementHash {
    std::size_t operator()(const Element& e) const {
        return std::hash<std::uint64_t>{}(
            (static_cast<std::uint64_t>(e.is_fresh()) << 32) | e.index());
    }
};

}  // namespace teamsem
