// errors.hpp
// Exception types and numeric tolerances shared by every module

#pragma once

#include <stdexcept>
#include <string>

namespace catcool {

// Strict inequalities mean "left - right > kEps".
inline constexpr double kEps = 1e-12;
// Catalyst marginal must come back to within this after a plan runs.
inline constexpr double kCatalystTol = 1e-10;
// Cancellation noise below this is clamped to zero.
inline constexpr double kClampTol = 1e-15;

class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Inputs are well formed but outside the regime where a result exists.
class out_of_regime : public std::runtime_error {
public:
    explicit out_of_regime(const std::string& what) : std::runtime_error(what) {}
};

class no_loop : public out_of_regime {
public:
    explicit no_loop(const std::string& what) : out_of_regime(what) {}
};

class not_synthesizable : public out_of_regime {
public:
    explicit not_synthesizable(const std::string& what) : out_of_regime(what) {}
};

class verification_failure : public std::runtime_error {
public:
    explicit verification_failure(const std::string& what) : std::runtime_error(what) {}
};

class inconsistent_certificate : public verification_failure {
public:
    explicit inconsistent_certificate(const std::string& what) : verification_failure(what) {}
};

} // namespace catcool
