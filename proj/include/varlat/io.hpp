#pragma once

#include "varlat/problems.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>

namespace varlat {

/// Shortest-round-trip-safe formatting (17 significant digits).
std::string format_double(double x);

/// "t,y1,...,yn" header, one row per node.
void write_arc_csv(std::ostream& out, const Arc& arc);
void write_points_csv(std::ostream& out, const std::vector<Vector>& points, const std::vector<std::string>& header);

nlohmann::json vector_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json arc_json(const Arc& arc);
Arc arc_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json to_json(const SolveReport& report, bool with_arc = false);
nlohmann::json to_json(const MultiplierReport& report, bool with_arc = false);
nlohmann::json to_json(const CertificationReport& report);

/// Infimizer with the problem configuration it was built from.
nlohmann::json infimizer_json(const InfimizerSet& M, const ProblemConfig& config);
/// Rebuilds problem and infimizer. The image infimum is recomputed from the entries.
std::pair<ProblemConfig, InfimizerSet> infimizer_from_json(const nlohmann::json& j);

/// Write text to a file, creating parent directories. Throws Error on failure.
void write_file(const std::string& path, const std::string& content);

} // namespace varlat
