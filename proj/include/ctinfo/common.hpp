#pragma once
#include <stdexcept>
#include <string>

namespace ctinfo {

inline constexpr const char* version = "0.1.0";

// Thrown for states the model declares impossible (bound violations, an observed
// event where the conditioning intensity is zero, filter instability, SDE blow-up).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a path/horizon is too short for the requested estimate.
struct insufficient_data : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter and domain violations map to std::invalid_argument.
inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace ctinfo
