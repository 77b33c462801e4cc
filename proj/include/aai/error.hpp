#pragma once

#include <stdexcept>
#include <string>

namespace aai {

// Engine error carrying the originating module and an optional record locus
// (file:line for ingested records).
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message, std::string locus = {})
        : std::runtime_error(format(module, message, locus)),
          module_(std::move(module)),
          locus_(std::move(locus)) {}

    [[nodiscard]] const std::string& module() const noexcept { return module_; }
    [[nodiscard]] const std::string& locus() const noexcept { return locus_; }

private:
    static std::string format(const std::string& module, const std::string& message,
                              const std::string& locus) {
        std::string out = "[" + module + "] ";
        if (!locus.empty()) out += locus + ": ";
        return out + message;
    }

    std::string module_;
    std::string locus_;
};

// Estimator has no usable input; distinct from a score of zero.
class NoData : public Error {
public:
    NoData(std::string module, const std::string& message)
        : Error(std::move(module), "no data: " + message) {}
};

}  // namespace aai
