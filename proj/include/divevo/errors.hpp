#ifndef DIVEVO_ERRORS_HPP
#define DIVEVO_ERRORS_HPP

#include <stdexcept>

namespace divevo {

    /// Bad user input: config values, map files, CLI flags.
    struct ConfigError : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    /// A caller broke a documented precondition.
    struct ContractViolation : std::logic_error {
        using std::logic_error::logic_error;
    };

} // namespace divevo

#endif
