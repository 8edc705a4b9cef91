#pragma once

#include <stdexcept>
#include <string>

namespace classprime {

struct not_a_discriminant : std::domain_error {
    explicit not_a_discriminant(std::string const & what) : std::domain_error(what) {}
};

struct not_fundamental : std::domain_error {
    explicit not_fundamental(std::string const & what) : std::domain_error(what) {}
};

struct disc_mismatch : std::invalid_argument {
    explicit disc_mismatch(std::string const & what) : std::invalid_argument(what) {}
};

struct invalid_ideal_basis : std::invalid_argument {
    explicit invalid_ideal_basis(std::string const & what) : std::invalid_argument(what) {}
};

struct limit_too_large : std::out_of_range {
    explicit limit_too_large(std::string const & what) : std::out_of_range(what) {}
};

/* Raised when two algebraically equal routes (e.g. the class-side and
 * character-side variance) disagree beyond tolerance. */
struct identity_mismatch : std::logic_error {
    explicit identity_mismatch(std::string const & what) : std::logic_error(what) {}
};

struct arithmetic_overflow : std::overflow_error {
    explicit arithmetic_overflow(std::string const & what) : std::overflow_error(what) {}
};

} // namespace classprime
