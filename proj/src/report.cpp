#include "mtf/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mtf {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_json(std::ostream& out, const Json& provenance, const Json& result) {
  Json doc;
  doc["provenance"] = provenance;
  doc["result"] = result;
  out << doc.dump(2) << '\n';
}

void write_csv(std::ostream& out, const Json& provenance, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  out << "# " << provenance.dump() << '\n';
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::invalid_argument("csv row width does not match header");
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
    out << '\n';
  }
}

Json to_json(const EnergyComponents& c) {
  return Json{{"kinetic", c.kinetic}, {"attraction", c.attraction}, {"repulsion", c.repulsion}, {"total", c.total}};
}

Json to_json(const MtfSolution& sol) {
  Json j;
  j["N"] = sol.N;
  j["Z"] = sol.Z;
  j["B"] = sol.B;
  j["mu"] = sol.mu;
  j["energy"] = sol.energy_functional;
  j["energy_dual"] = sol.energy_dual;
  j["particle_number"] = sol.particle_number;
  j["components"] = to_json(sol.components);
  j["iterations"] = sol.iterations;
  j["residual"] = sol.residual;
  j["charge_residual"] = sol.charge_residual;
  return j;
}

Json to_json(const CurrentReport& r) {
  return Json{{"closed_form", r.closed_form}, {"j_kin", r.j_kin},   {"j_int", r.j_int},
              {"j_dens", r.j_dens},           {"residual", r.residual}, {"quad_error", r.quad_error}};
}

Json to_json(const MonteCarloEstimate& e) {
  return Json{{"mean", e.mean}, {"standard_error", e.standard_error}, {"samples", e.samples}};
}

Json to_json(const LengthScales& s) {
  return Json{{"ell", s.ell},
              {"L", s.L},
              {"magnetic", s.magnetic},
              {"heuristic",
               {{"regime", to_string(s.heuristic.regime)},
                {"a", s.heuristic.a},
                {"R", s.heuristic.R},
                {"L", s.heuristic.L},
                {"energy", s.heuristic.energy}}}};
}

Json to_json(const ConfinementErrors& e) {
  return Json{{"R1", e.R1},
              {"R2", e.R2},
              {"r1_in_range", e.r1_in_range},
              {"r2_in_range", e.r2_in_range},
              {"warnings", e.warnings}};
}

Json to_json(const SchurConstant& s) {
  return Json{{"value", s.value}, {"deviation", s.deviation}, {"kernel_mass", s.kernel_mass}};
}

Json to_json(const LtCheck& c) {
  return Json{{"sum_neg_eigs", c.sum_neg_eigs},
              {"bound", c.bound},
              {"satisfied", c.satisfied},
              {"slack", c.slack},
              {"bound_states", c.bound_states}};
}

Json to_json(const CutoffNorm& c) {
  return Json{{"norm", c.norm}, {"bound_ratio", c.bound_ratio}, {"box", c.box}, {"spacing", c.spacing},
              {"modes", c.modes}};
}

std::vector<std::vector<double>> profile_rows(const MtfSolution& sol) {
  const auto& g = sol.rho.grid();
  std::vector<std::vector<double>> rows(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rows[i] = {g[i], sol.rho[i], sol.v_eff[i]};
  return rows;
}

}  // namespace mtf
