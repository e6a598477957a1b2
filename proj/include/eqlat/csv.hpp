#pragma once

#include <filesystem>
#include <string>

#include "eqlat/experiments.hpp"
#include "eqlat/pricing.hpp"

namespace eqlat {

/// 17 significant digits, lowercase scientific: "1.0000000000000000e+01".
/// NaN (undefined quantities such as alpha on terminal nodes) is written empty.
std::string format_number(double v);

/// Writes through a sibling temporary and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// One row per node: time index, shock history, regime history, C, S, gamma,
/// D, alpha, kernel from the parent and the ';'-joined child kernels.
std::string solution_csv(const Model& model, const PricingSolution& solution);

std::string table_csv(const FigureTable& table);

/// Flat JSON object of the table's provenance notes plus its column schema.
std::string provenance_json(const FigureTable& table);

}  // namespace eqlat
