#ifndef SGJMS_SERIALIZATION_HPP_
#define SGJMS_SERIALIZATION_HPP_

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

#include "sgjms/conformal_geometry.hpp"
#include "sgjms/integral_kernels.hpp"
#include "sgjms/lane_emden.hpp"
#include "sgjms/rayleigh_optimizer.hpp"
#include "sgjms/spectral_core.hpp"

namespace sgjms {

using Json = nlohmann::ordered_json;

// {n, m, K, coeffs}
Json to_json(const ZonalFunction& u);
ZonalFunction zonal_function_from_json(const Json& j);
// {n, m, K, lambda}
Json to_json(const GjmsSpectrum& s);
GjmsSpectrum gjms_spectrum_from_json(const Json& j);
// {n, m, K, mu}
Json to_json(const KernelSpectrum& s);
KernelSpectrum kernel_spectrum_from_json(const Json& j);

Json to_json(const MinimizationResult& r);
Json to_json(const SolveResult& r);
Json to_json(const ProbeReport& r);

// ---------------------------------------------------------------------------
// CSV (RFC 4180: comma separated, CRLF-tolerant, fields with ",\"\r\n" quoted,
// embedded quotes doubled). Numbers are written with 17 significant digits.

using CsvRow = std::vector<std::string>;

struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;
};

std::string csv_escape(const std::string& field);
std::string format_number(double x);
void write_csv(std::ostream& os, const CsvTable& table);
std::string to_csv(const CsvTable& table);
/// Throws DomainError on unterminated quotes or ragged rows.
CsvTable parse_csv(const std::string& text);

CsvTable to_csv_table(const RadialProfile& profile);          // r,u
CsvTable to_csv_table(const std::vector<TracePoint>& trace);  // iter,value,grad_norm

}  // namespace sgjms

#endif  // SGJMS_SERIALIZATION_HPP_
