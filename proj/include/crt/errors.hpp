#pragma once

#include <stdexcept>
#include <string>

namespace crt {

// Base class for all library errors. `code()` is a short machine-readable
// tag used by the CLI for its "ERROR <code>: <message>" convention.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct domain_error : error {
    explicit domain_error(const std::string& msg) : error("domain", msg) {}
};

struct shape_error : error {
    explicit shape_error(const std::string& msg) : error("shape", msg) {}
};

struct index_error : error {
    explicit index_error(const std::string& msg) : error("index", msg) {}
};

// Binary operation on sinograms with different weight exponents p.
struct weight_error : error {
    explicit weight_error(const std::string& msg) : error("weight", msg) {}
};

// Phantom support not contained in the requested grid.
struct support_error : error {
    explicit support_error(const std::string& msg) : error("support", msg) {}
};

// Ray truncated before it exits the phantom support.
struct truncation_error : error {
    explicit truncation_error(const std::string& msg) : error("truncation", msg) {}
};

// Bad magic / version / checksum / truncated payload in a data file.
struct format_error : error {
    explicit format_error(const std::string& msg) : error("format", msg) {}
};

struct parse_error : error {
    explicit parse_error(const std::string& msg) : error("parse", msg) {}
};

// Frequency not on the discrete lattice of the relevant grid.
struct lattice_error : error {
    explicit lattice_error(const std::string& msg) : error("lattice", msg) {}
};

} // namespace crt
