#include "tilepack/errors.hpp"

#include <utility>

namespace tilepack {

Error::Error(std::string module, std::string operation, const std::string& detail)
    : std::runtime_error(module + "/" + operation + ": " + detail),
      module_(std::move(module)),
      operation_(std::move(operation)),
      detail_(detail) {}

ParseError::ParseError(std::string operation, const std::string& field, const std::string& detail)
    : Error("substitution-rules", std::move(operation), field + ": " + detail), field_(field) {}

ConvergenceError::ConvergenceError(std::string operation, const std::string& detail,
                                   std::vector<double> history)
    : Error("circle-packing", std::move(operation), detail), history_(std::move(history)) {}

} // namespace tilepack
