#ifndef SUMMER_ERRORS_HPP
#define SUMMER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace summer {

/// Invalid system description (counts, ranges, inconsistent dimensions).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid target scene (out-of-range indices, too many targets).
class scene_error : public std::runtime_error {
public:
    explicit scene_error(const std::string& what) : std::runtime_error(what) {}
};

/// Dimension mismatch between scene, configuration and data tensors.
class model_error : public std::runtime_error {
public:
    explicit model_error(const std::string& what) : std::runtime_error(what) {}
};

/// Failure in the sampling front end (insufficient oversampling, bad record).
class acquisition_error : public std::runtime_error {
public:
    explicit acquisition_error(const std::string& what) : std::runtime_error(what) {}
};

/// Matched-filter normalization hit a vanishing spectrum value.
class normalization_error : public std::runtime_error {
public:
    explicit normalization_error(const std::string& what) : std::runtime_error(what) {}
};

/// Sparse recovery failed (ill-posed atom system).
class recovery_error : public std::runtime_error {
public:
    explicit recovery_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file (config, scene, coefficient dump).
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace summer

#endif
