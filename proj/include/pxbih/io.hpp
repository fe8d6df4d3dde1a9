#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "pxbih/minimizer.hpp"

namespace pxbih {

using json = nlohmann::json;

/// {"grid": {"dim", "counts", "extents"}, "values": [row-major reals]}
json field_to_json(const ScalarField& f);
ScalarField field_from_json(const json& j);
json grid_to_json(const Grid& g);
GridPtr grid_from_json(const json& j);

ScalarField read_field_file(const std::filesystem::path& path);
void write_field_file(const std::filesystem::path& path, const ScalarField& f);

/// Writes to a sibling temporary and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest text that parses back to the same double.
std::string format_real(double v);

json energy_to_json(const EnergyBreakdown& e);
/// Everything except wall-clock time, so equal runs serialize identically.
json solve_result_to_json(const SolveResult& r, double lambda);

/// Header "iter,eps,E,grad_norm,step", LF line endings.
std::string trace_to_csv(const std::vector<TraceRow>& trace);

}  // namespace pxbih
