#include "sgjms/serialization.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "sgjms/errors.hpp"

namespace sgjms {

namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SphereParams params_from(const Json& j) {
  return SphereParams::make(j.at("n").get<int>(), j.at("m").get<int>());
}

Eigen::VectorXd sized_array(const Json& j, const char* key, int K) {
  Eigen::VectorXd v = from_vector(j.at(key).get<std::vector<double>>());
  if (v.size() != K + 1)
    throw MismatchError(std::string("JSON field '") + key + "' has " + std::to_string(v.size()) +
                        " entries, expected K+1 = " + std::to_string(K + 1));
  return v;
}

Json params_json(const SphereParams& p, int K) {
  Json j;
  j["n"] = p.n;
  j["m"] = p.m;
  j["K"] = K;
  return j;
}

}  // namespace

Json to_json(const ZonalFunction& u) {
  Json j = params_json(u.params, u.degree());
  j["coeffs"] = to_vector(u.coeffs);
  return j;
}

ZonalFunction zonal_function_from_json(const Json& j) {
  return ZonalFunction{params_from(j), sized_array(j, "coeffs", j.at("K").get<int>())};
}

Json to_json(const GjmsSpectrum& s) {
  Json j = params_json(s.params, s.degree());
  j["lambda"] = to_vector(s.lambda);
  return j;
}

GjmsSpectrum gjms_spectrum_from_json(const Json& j) {
  return GjmsSpectrum{params_from(j), sized_array(j, "lambda", j.at("K").get<int>())};
}

Json to_json(const KernelSpectrum& s) {
  Json j = params_json(s.params, s.degree());
  j["mu"] = to_vector(s.mu);
  return j;
}

KernelSpectrum kernel_spectrum_from_json(const Json& j) {
  return KernelSpectrum{params_from(j), sized_array(j, "mu", j.at("K").get<int>())};
}

Json to_json(const MinimizationResult& r) {
  Json j;
  j["value"] = r.value;
  j["sharp_constant"] = r.sharp_constant;
  j["relative_error"] = std::abs(r.value - r.sharp_constant) / r.sharp_constant;
  j["grad_norm"] = r.grad_norm;
  j["iters"] = r.iters;
  j["converged"] = r.converged;
  j["distance_to_constant"] = r.distance_to_constant;
  j["best_start"] = r.best_start;
  j["minimizer"] = to_json(r.minimizer);
  Json starts = Json::array();
  for (const StartSummary& s : r.starts) {
    starts.push_back({{"index", s.index},
                      {"kind", s.kind},
                      {"value", s.value},
                      {"grad_norm", s.grad_norm},
                      {"iters", s.iters},
                      {"converged", s.converged},
                      {"distance_to_constant", s.distance_to_constant}});
  }
  j["starts"] = std::move(starts);
  return j;
}

Json to_json(const SolveResult& r) {
  Json j;
  j["classification"] = to_string(r.classification);
  j["converged"] = r.converged;
  j["residual"] = r.residual;
  j["iters"] = r.iters;
  j["negativity"] = r.negativity;
  j["damped"] = r.damped;
  j["distance_to_constant"] = r.distance_to_constant;
  j["mean_value"] = r.mean_value;
  j["solution"] = to_json(r.solution);
  return j;
}

Json to_json(const ProbeReport& r) {
  Json j;
  j["n"] = r.params.n;
  j["m"] = r.params.m;
  j["f"] = r.nonlinearity;
  j["growth"] = to_string(r.growth);
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["constant_value"] = r.constant_value;
  j["converged"] = r.converged;
  j["diverged"] = r.diverged;
  j["nonnegative"] = r.nonnegative;
  j["trivial"] = r.trivial;
  j["matched_constant"] = r.matched_constant;
  j["sign_changing"] = r.sign_changing;
  j["constant_fraction"] = r.constant_fraction();
  j["worst_constant_error"] = r.worst_constant_error;
  j["linear"] = r.linear;
  if (r.linear) j["kernel_dimension"] = r.kernel_dimension;
  Json outcomes = Json::array();
  for (const ProbeOutcome& o : r.outcomes) {
    outcomes.push_back({{"trial", o.trial},
                        {"classification", to_string(o.result.classification)},
                        {"converged", o.result.converged},
                        {"residual", o.result.residual},
                        {"iters", o.result.iters},
                        {"nonnegative", o.nonnegative},
                        {"trivial", o.trivial},
                        {"matches_constant", o.matches_constant},
                        {"constant_error", o.constant_error},
                        {"negativity", o.result.negativity}});
  }
  j["outcomes"] = std::move(outcomes);
  Json counter = Json::array();
  for (const SolveResult& s : r.counterexamples) counter.push_back(to_json(s));
  j["counterexamples"] = std::move(counter);
  return j;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  auto write_row = [&](const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << csv_escape(row[i]);
    }
    os << "\r\n";
  };
  write_row(table.header);
  for (const CsvRow& row : table.rows) write_row(row);
}

std::string to_csv(const CsvTable& table) {
  std::ostringstream os;
  write_csv(os, table);
  return os.str();
}

CsvTable parse_csv(const std::string& text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) throw DomainError("parse_csv: stray quote in unquoted field");
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) throw DomainError("parse_csv: unterminated quoted field");
  if (field_started || !row.empty()) end_row();

  CsvTable table;
  if (rows.empty()) return table;
  table.header = std::move(rows.front());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != table.header.size())
      throw DomainError("parse_csv: row " + std::to_string(i) + " has " +
                        std::to_string(rows[i].size()) + " fields, header has " +
                        std::to_string(table.header.size()));
    table.rows.push_back(std::move(rows[i]));
  }
  return table;
}

CsvTable to_csv_table(const RadialProfile& profile) {
  CsvTable t{{"r", "u"}, {}};
  for (std::size_t i = 0; i < profile.grid.size(); ++i)
    t.rows.push_back({format_number(profile.grid[i]), format_number(profile.values[i])});
  return t;
}

CsvTable to_csv_table(const std::vector<TracePoint>& trace) {
  CsvTable t{{"iter", "value", "grad_norm"}, {}};
  for (const TracePoint& p : trace)
    t.rows.push_back({std::to_string(p.iter), format_number(p.value), format_number(p.grad_norm)});
  return t;
}

}  // namespace sgjms
