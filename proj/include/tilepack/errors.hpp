#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tilepack {

// Every failure carries the module and operation it came from so the CLI can
// report "<module>/<operation>: <detail>".
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string operation, const std::string& detail);

    const std::string& module() const noexcept { return module_; }
    const std::string& operation() const noexcept { return operation_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string module_;
    std::string operation_;
    std::string detail_;
};

class ParseError : public Error {
public:
    ParseError(std::string operation, const std::string& field, const std::string& detail);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(std::string operation, const std::string& detail, std::vector<double> history);
    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

} // namespace tilepack
