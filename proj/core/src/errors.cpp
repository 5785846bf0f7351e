#include "opinf/errors.hpp"

namespace opinf {

Error::Error(std::string_view module, const std::string& what)
    : std::runtime_error(std::string(module) + ": " + what), module_(module) {}

}  // namespace opinf
