#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mtf/current.hpp"
#include "mtf/landau.hpp"
#include "mtf/scales.hpp"
#include "mtf/solver.hpp"

namespace mtf {

using Json = nlohmann::ordered_json;

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

// {"provenance": ..., "result": ...} with two-space indentation.
void write_json(std::ostream& out, const Json& provenance, const Json& result);

// Provenance as one "# {...}" comment line, then the header row and rows.
void write_csv(std::ostream& out, const Json& provenance, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

Json to_json(const EnergyComponents& c);
Json to_json(const MtfSolution& sol);
Json to_json(const CurrentReport& r);
Json to_json(const MonteCarloEstimate& e);
Json to_json(const LengthScales& s);
Json to_json(const ConfinementErrors& e);
Json to_json(const SchurConstant& s);
Json to_json(const LtCheck& c);
Json to_json(const CutoffNorm& c);

// r, rho, v_eff columns.
std::vector<std::vector<double>> profile_rows(const MtfSolution& sol);

}  // namespace mtf
