#pragma once

// JSON problem files and reports for the batch tool: field specs, mu
// matrices, (mu-)symmetric matrix lists, quadratic forms and presentations
// in, deterministic machine-readable reports out.  All scalars travel as
// exact string literals.

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

#include "sck/clifford.hpp"
#include "sck/points.hpp"
#include "sck/pointscheme.hpp"

namespace sck {

/// A malformed problem file; `path` names the offending JSON location.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct Problem {
    FieldPtr field;
    unsigned n = 0;
    MuPtr mu;
    std::vector<MuSymMatrix> matrices;
    std::optional<QuadraticPresentation> presentation;
    std::optional<SkewPoly> q;  // single quadratic form
    unsigned dmax = 12;
    unsigned hilbert_dmax = 5;
    std::string strategy = "pencil";
    std::vector<std::vector<Scalar>> candidates;
    std::uint64_t scan_p = 0;
    unsigned scan_e = 1;
};

Problem parse_problem(const nlohmann::json& j);

/// Dispatch one command.  `exit_code` follows the tool convention: 0 for
/// success (and Regular verdicts), 2 for a negative verdict, 3 inconclusive.
nlohmann::ordered_json run_command(const std::string& command, const Problem& problem,
                                   int& exit_code);

extern const char* const kToolVersion;

}  // namespace sck
