#pragma once

#include <stdexcept>
#include <string>

namespace nchodge {

/// Every failure raised by the library carries a module-qualified code such as
/// "algebra.AssociativityViolation" so reports can surface it verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string kind, const std::string& message)
        : std::runtime_error(message), module_(std::move(module)), kind_(std::move(kind)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& kind() const noexcept { return kind_; }
    std::string code() const { return module_ + "." + kind_; }

private:
    std::string module_;
    std::string kind_;
};

}  // namespace nchodge
