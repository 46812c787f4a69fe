#pragma once

#include <stdexcept>
#include <string>

namespace senti {

// Bad flags, missing files, impossible parameter combinations. Maps to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Failures while processing otherwise valid configuration. Maps to exit code 1.
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace senti
