#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>

#include "nchodge/error.hpp"
#include "nchodge/scalar.hpp"

namespace test {

inline std::filesystem::path data_path(const std::string& rel) { return std::filesystem::path(NCHODGE_TEST_DATA_DIR) / rel; }

/// Runs f and returns the code of the nchodge::Error it throws, or "" if none.
template <class F>
std::string error_code(F&& f) {
    try {
        f();
    } catch (const nchodge::Error& e) {
        return e.code();
    }
    return "";
}

inline std::vector<nchodge::Rational> q(std::initializer_list<long> xs) {
    std::vector<nchodge::Rational> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace test
