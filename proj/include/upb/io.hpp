#pragma once

#include <string>

#include <json.hpp>

#include "upb/constructions.hpp"
#include "upb/entanglement.hpp"
#include "upb/protocol.hpp"
#include "upb/verify.hpp"

namespace upb {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);
Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j);

/// {schema_version, dims, labels, family, layer, states: [{label, locals}]}.
Json state_set_to_json(const StateSet& set);
/// Throws std::invalid_argument on malformed or inconsistent input.
StateSet state_set_from_json(const Json& j);

void write_state_set(const StateSet& set, const std::string& path);
StateSet read_state_set(const std::string& path);

Json to_json(const ToleranceConfig& tol);
Json to_json(const OrthogonalityReport& r);
Json to_json(const CompletenessReport& r);
Json to_json(const SeesawResult& r, std::size_t restarts);
Json to_json(const NonlocalityReport& r);
Json to_json(const PPTReport& r);
Json to_json(const RunTrace& r);
Json to_json(const ResourceLedger& r);

void write_json(const Json& j, const std::string& path);

}  // namespace upb
