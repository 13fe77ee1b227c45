#include "teamsem/element.hpp"

namespace teamsem {

std::string tuple_str(const Tuple& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ",";
        out += t[i].str();
    }
    out += ")";
    return out;
}

}  // namespace teamsem
