#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace topos4 {

// Subsets of a finite carrier {0, ..., n-1}. Bit i set means i is in.
using Subset = boost::dynamic_bitset<>;

inline Subset empty_set(size_t n) { return Subset(n); }

inline Subset full_set(size_t n) {
    Subset s(n);
    s.set();
    return s;
}

inline Subset make_set(size_t n, std::initializer_list<size_t> elems) {
    Subset s(n);
    for (size_t e : elems) s.set(e);
    return s;
}

inline Subset make_set(size_t n, const std::vector<size_t>& elems) {
    Subset s(n);
    for (size_t e : elems) s.set(e);
    return s;
}

inline std::vector<size_t> elements(const Subset& s) {
    std::vector<size_t> out;
    for (size_t i = s.find_first(); i != Subset::npos; i = s.find_next(i)) {
        out.push_back(i);
    }
    return out;
}

// "{0,2,5}" for diagnostics and reports.
std::string set_to_string(const Subset& s);

// Thrown when an operation would exceed a hard size bound (letter caps,
// powerset enumerations, family sizes). The CLI maps this to exit code 3.
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a caller violates a documented precondition: carrier or
// index out of range, relation not a preorder where one is required,
// modal input to an intuitionistic-only routine, malformed gluing spec.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a self-check the library promised to run fails on its own
// output. Indicates a bug in the library, not bad input. Exit code 4.
struct VerificationError : std::logic_error {
    using std::logic_error::logic_error;
};

// Letter cap for exhaustive valuation sweeps: TOPOS4_CAP if set, else 4.
int default_letter_cap();

}  // namespace topos4
