#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linform {

enum class ErrorKind {
    size_limit,
    dimension,
    domain,
    precision,
    bandwidth,
    structure,
    schema,
    numerical,
    consistency,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// Input problems (schema, domain, size) versus failures of a numerical method.
    bool is_numerical() const noexcept {
        return kind_ == ErrorKind::precision || kind_ == ErrorKind::bandwidth ||
               kind_ == ErrorKind::numerical;
    }

private:
    ErrorKind kind_;
};

}  // namespace linform
