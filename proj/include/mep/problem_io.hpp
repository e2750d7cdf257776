#pragma once

// JSON problem files. Schema: docs/problem_format.md.

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "mep/problem.hpp"

namespace mep {

using Problem = std::variant<LinearMEP, PolynomialMEP2>;

nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// `where` is the field path used in error messages, e.g. "terms[2].matrix".
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json problem_to_json(const Problem& p);
Problem problem_from_json(const nlohmann::json& j);

std::string dump_problem(const Problem& p);
Problem parse_problem(const std::string& text);

/// Throws ParseError (unreadable or malformed) or ValidationError.
Problem load_problem(const std::filesystem::path& path);
void save_problem(const Problem& p, const std::filesystem::path& path);

}  // namespace mep
