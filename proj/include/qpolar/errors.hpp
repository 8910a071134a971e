#pragma once

#include <stdexcept>
#include <string>

namespace qpolar {

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ResourceBoundError : std::runtime_error {
    explicit ResourceBoundError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SelftestError : std::runtime_error {
    explicit SelftestError(const std::string& msg) : std::runtime_error(msg) {}
};

}
