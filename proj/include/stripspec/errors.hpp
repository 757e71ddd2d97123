#pragma once

#include <stdexcept>
#include <string>

namespace stripspec {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonIntegrable : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };
struct FactorizationFailed : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct InsufficientPairs : Error { using Error::Error; };
struct UnsupportedTail : Error { using Error::Error; };
struct BadSupport : Error { using Error::Error; };
struct OutsideNegativeRegion : Error { using Error::Error; };
struct NotPeriodic : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace stripspec
