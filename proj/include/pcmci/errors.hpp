#ifndef PCMCI_ERRORS_HPP
#define PCMCI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pcmci {

class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

class InsufficientData : public std::runtime_error {
public:
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pcmci

#endif  // PCMCI_ERRORS_HPP
