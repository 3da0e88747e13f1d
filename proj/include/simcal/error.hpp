#pragma once

#include <stdexcept>
#include <string>

namespace simcal {

enum class Errc {
    invalid_argument,
    io,
    parse,
    no_overlap,
    degenerate_data,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace simcal
