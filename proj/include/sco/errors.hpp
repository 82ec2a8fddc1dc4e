#ifndef SCO_ERRORS_HPP
#define SCO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sco {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument: dimension mismatch, bad sizes, out-of-range values.
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& what) : Error(what) {}
};

// The acquisition is numerically zero over the whole pre-sample set
// (S_phi == 0), so no target density can be formed.
class DegenerateAcquisitionError : public Error {
public:
    explicit DegenerateAcquisitionError(const std::string& what) : Error(what) {}
};

// A site was looked up in a candidate pool that never cached it.
class MissingCacheError : public Error {
public:
    explicit MissingCacheError(const std::string& what) : Error(what) {}
};

// Resampling could not produce the requested number of distinct sites.
class DistinctSiteShortageError : public Error {
public:
    explicit DistinctSiteShortageError(const std::string& what) : Error(what) {}
};

// Covariance factorization failed even at the top of the nugget ladder.
class IllConditionedDataError : public Error {
public:
    explicit IllConditionedDataError(const std::string& what) : Error(what) {}
};

// Random-function generation failed (e.g. basin placement retry cap hit).
class GeneratorError : public Error {
public:
    explicit GeneratorError(const std::string& what) : Error(what) {}
};

// ARA is undefined because some |f_min| is zero.
class AraUndefinedError : public Error {
public:
    explicit AraUndefinedError(const std::string& what) : Error(what) {}
};

// Experiment configuration failed validation.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

} // namespace sco

#endif
