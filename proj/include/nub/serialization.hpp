#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nub/basis.hpp"
#include "nub/qrac.hpp"
#include "nub/search.hpp"

namespace nub {

/// Raised on malformed basis-set documents; the message carries the
/// offending file/field context.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Basis-set document: {"d": int, "n": int, "bases": [...]} where
/// bases[y][j][k] = [re, im] is component k of vector j of basis y
/// (column-major: vectors are matrix columns).
nlohmann::ordered_json basis_set_to_json(const BasisSet& s);
BasisSet basis_set_from_json(const nlohmann::json& doc, double tol = kOrthoTol);

void save_basis_set(const std::filesystem::path& path, const BasisSet& s);
BasisSet load_basis_set(const std::filesystem::path& path, double tol = kOrthoTol);

/// A scan input file holds either one basis-set document or a JSON
/// array of them; labels are "<filename>" or "<filename>[i]".
std::vector<std::pair<std::string, BasisSet>> load_basis_set_list(
    const std::filesystem::path& path, double tol = kOrthoTol);

nlohmann::ordered_json asp_report_to_json(const AspReport& report);
nlohmann::ordered_json monte_carlo_to_json(const MonteCarloEstimate& estimate);

}  // namespace nub
