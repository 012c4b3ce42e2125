#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace zerotf {

using cplx = std::complex<double>;

/// Input data is malformed (bad file, incompatible grids, ...).
struct data_error : std::runtime_error {
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical routine failed to reach its accuracy target.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

constexpr double pi = 3.14159265358979323846;

}  // namespace zerotf
