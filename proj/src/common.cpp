#include "topos4/common.hpp"

#include <cstdlib>

namespace topos4 {

std::string set_to_string(const Subset& s) {
    std::string out = "{";
    bool first = true;
    for (size_t i = s.find_first(); i != Subset::npos; i = s.find_next(i)) {
        if (!first) out += ",";
        out += std::to_string(i);
        first = false;
    }
    return out + "}";
}

int default_letter_cap() {
    const char* env = std::getenv("TOPOS4_CAP");
    if (env == nullptr || *env == '\0') return 4;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 1 || v > 16) {
        throw PreconditionError("TOPOS4_CAP must be an integer in [1,16], got '" +
                                std::string(env) + "'");
    }
    return static_cast<int>(v);
}

}  // namespace topos4
