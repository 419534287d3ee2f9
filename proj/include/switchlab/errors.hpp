#pragma once

#include <stdexcept>
#include <string>

namespace switchlab {

// Input data (tick files, profile CSVs) violating the format contract.
// Carries the 1-based line number when known.
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg, long line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

// A statistic was requested on too little or degenerate data
// (undefined correlation, fewer fit points than parameters, ...).
class insufficient_data : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical routine could not meet its accuracy contract
// (quadrature budget exhausted, non-embeddable covariance, ...).
class numerics_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace switchlab
