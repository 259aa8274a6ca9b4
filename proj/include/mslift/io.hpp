#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mslift/currents.hpp"
#include "mslift/decompose.hpp"
#include "mslift/lift.hpp"
#include "mslift/sbv.hpp"
#include "mslift/solver.hpp"

namespace mslift::io {

using Json = nlohmann::json;

/// Parses a file; syntax errors and unreadable files become ValidationError.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// Every reader rejects unknown fields and wrong types with a ValidationError
// naming the offending path, e.g. "$.terms[1].func.pieces[0].nodes".

Json to_json(const SbvFunction& u);
SbvFunction sbv_from_json(const Json& j, const std::string& path = "$");

/// {"terms":[{"weight":w,"func":...}]} with an optional "domain":[a,b], which
/// is required only when the list is empty.
Json to_json(const GraphCombination& t);
GraphCombination combination_from_json(const Json& j, const std::string& path = "$");

/// {"domain":[a,b],"inner":[a',b'],"boundary":<function>}
Json to_json(const DirichletSpec& s);
DirichletSpec dirichlet_from_json(const Json& j, const std::string& path = "$");

Json to_json(const ColumnProfile& p);
ColumnProfile profile_from_json(const Json& j, const std::string& path = "$");

Json to_json(const LiftReport& r);
LiftReport lift_report_from_json(const Json& j, const std::string& path = "$");

Json to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j, const std::string& path = "$");

Json to_json(const CertificateReport& r);
CertificateReport certificate_report_from_json(const Json& j, const std::string& path = "$");

/// {"func":...,"energy":e,"jumps":[...],"runtime_ms":t}
Json to_json(const MinimizeResult& r);
MinimizeResult minimize_result_from_json(const Json& j, const std::string& path = "$");

/// Header "x,a_i,a_{i+1},level", one row per profile interval.
void write_profile_csv(std::ostream& os, const LiftReport& r);

}  // namespace mslift::io
