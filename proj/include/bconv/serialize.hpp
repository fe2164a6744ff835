#ifndef BCONV_SERIALIZE_HPP
#define BCONV_SERIALIZE_HPP

#include <json.hpp>
#include <string>

#include "bconv/h_operator.hpp"
#include "bconv/measures.hpp"
#include "bconv/moment_engine.hpp"
#include "bconv/stats.hpp"

namespace bconv {

/// {"order": N, "arithmetic": "rational"|"float", "values": ["p/q",...]|[...]}
nlohmann::json to_json(const MomentVector& m);
MomentVector moment_vector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const KsReport& r);
nlohmann::json to_json(const CharacterizationReport& r);

/// Rationals serialized as "p/q" strings on the exact path.
nlohmann::json to_json(const ReconstructionReport& r);

void write_json_file(const std::string& path, const nlohmann::json& j);

/// One-line machine-parsable error object for the CLI's error stream.
std::string error_line(const std::string& message);

} // namespace bconv

#endif
