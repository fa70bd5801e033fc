#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stj {

// Base for every library error.  `code()` is a stable identifier the CLI maps
// to exit statuses and machine-readable messages.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct out_of_domain : error {
    explicit out_of_domain(const std::string& w) : error("E_OUT_OF_DOMAIN", w) {}
};

struct domain_mismatch : error {
    explicit domain_mismatch(const std::string& w) : error("E_DOMAIN_MISMATCH", w) {}
};

struct unsupported_dirichlet : error {
    explicit unsupported_dirichlet(const std::string& w) : error("E_DIRICHLET", w) {}
};

struct irrational_root : error {
    explicit irrational_root(const std::string& w) : error("E_IRRATIONAL_ROOT", w) {}
};

struct non_monotone_piece : error {
    explicit non_monotone_piece(const std::string& w) : error("E_NON_MONOTONE", w) {}
};

struct not_increasing : error {
    explicit not_increasing(const std::string& w) : error("E_NOT_INCREASING", w) {}
};

struct endpoint_discontinuity : error {
    explicit endpoint_discontinuity(const std::string& w) : error("E_ENDPOINT_JUMP", w) {}
};

struct degree_overflow : error {
    explicit degree_overflow(const std::string& w) : error("E_DEGREE_CAP", w) {}
};

struct invalid_value : error {
    explicit invalid_value(const std::string& w) : error("E_INVALID_VALUE", w) {}
};

struct mesh_unachievable : error {
    explicit mesh_unachievable(const std::string& w) : error("E_MESH", w) {}
};

struct inexact_saltus : error {
    explicit inexact_saltus(const std::string& w) : error("E_INEXACT_SALTUS", w) {}
};

// Parse-time error with a source position; the CLI turns these into exit 2.
struct Diagnostic {
    int line = 0;
    int column = 0;
    std::string message;
    std::vector<std::string> expected;
};

class diagnostic_error : public error {
public:
    explicit diagnostic_error(Diagnostic d)
        : error("E_PARSE",
                "line " + std::to_string(d.line) + " col " + std::to_string(d.column) + ": " +
                    d.message),
          diag_(std::move(d)) {}
    const Diagnostic& diagnostic() const noexcept { return diag_; }

private:
    Diagnostic diag_;
};

}  // namespace stj
