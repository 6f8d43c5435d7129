#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "ipvar/action.hpp"
#include "ipvar/fermionic.hpp"
#include "ipvar/gauge.hpp"
#include "ipvar/optimize.hpp"

namespace ipvar {

using Json = nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Square matrix: {"dim": d, "entries": [[re,im], ...]} row-major.
Json matrix_to_json(const Matrix& A);
Matrix matrix_from_json(const Json& j);

// Structure: {"m": m, "n": n}.
Json structure_to_json(const SpaceTimeStructure& st);
SpaceTimeStructure structure_from_json(const Json& j);

// Frame: {"f": f, "mode": "...", "W": [[re,im], ...]} column-major. The CLI
// additionally embeds {"structure": {"m","n"}} so a frame file is
// self-contained; frame_from_json accepts either an embedded structure or an
// explicit one.
Json frame_to_json(const FermionicOperator& op, const SpaceTimeStructure& st);
FermionicOperator frame_from_json(const Json& j, const SpaceTimeStructure& st);
FermionicOperator frame_from_json(const Json& j);  // requires embedded structure
SpaceTimeStructure frame_structure_from_json(const Json& j);

Json gauge_to_json(const GaugeTransformation& g);
GaugeTransformation gauge_from_json(const Json& j);

Json action_report_to_json(const ActionReport& rep);

Json minimize_config_to_json(const MinimizeConfig& cfg);
MinimizeConfig minimize_config_from_json(const Json& j);

Json minimize_result_to_json(const MinimizeResult& res, const SpaceTimeStructure& st);

// CSV row "m,n,f,mu,total,constraint_value" with 17 significant digits.
std::string action_csv_row(const SpaceTimeStructure& st, const ActionReport& rep);

// Scan table with header "m,n,f,mu,I_hat,J_hat,monotone_ok".
std::string scan_to_csv(const std::vector<ScanRow>& rows, int f, int n, double mu);

std::string format_double(double v);  // 17 significant digits

}  // namespace ipvar
