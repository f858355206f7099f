#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nsf/diagnostics.hpp"
#include "nsf/mesh.hpp"
#include "nsf/uq.hpp"

namespace nsf {

/// Named cell field with `components` values per cell (1 or 2).
struct NamedField {
  std::string name;
  int components = 1;
  std::vector<double> values;
};

/// Legacy ASCII VTK, STRUCTURED_POINTS with CELL_DATA. Two-component fields
/// are written as VECTORS with a zero third component.
void write_vtk(const std::filesystem::path& path, const Mesh& mesh, const std::vector<NamedField>& fields,
               const std::string& title = "nsf");

/// Values on the horizontal line x2 = y at every cell-centre abscissa, linearly
/// interpolated between the two nearest cell rows (constant beyond the outer
/// centres). One entry per component.
std::vector<double> line_profile(const Mesh& mesh, const NamedField& field, double y);

/// CSV: x2, x1 and one column per field component (name, or name_1/name_2).
void write_line_profiles(const std::filesystem::path& path, const Mesh& mesh,
                         const std::vector<NamedField>& fields, const std::vector<double>& ordinates);

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& rows);

/// Convergence rows: h, count, then E1_<q>, E2_<q> for every quantity.
void write_convergence_csv(const std::filesystem::path& path, const ConvergenceTable& table);
/// Rates: quantity, rate_E1, rate_E2.
void write_rates_csv(const std::filesystem::path& path, const ConvergenceTable& table);
/// Reads the rows written by write_convergence_csv and refits the rates.
ConvergenceTable read_convergence_csv(const std::filesystem::path& path, const std::string& abscissa);

void write_tail_csv(const std::filesystem::path& path, const TailReport& tail);

/// One line per sample: index, parameters, sup Lambda, positivity, steps.
void write_samples_csv(const std::filesystem::path& path, const std::vector<SampleResult>& samples);

/// Fields of a state for VTK/line output: rho, theta, u.
std::vector<NamedField> state_fields(const State& s);

/// mean/variance/MAD of every quantity.
std::vector<NamedField> stats_fields(const EnsembleStats& st);

/// Throws IoError when the file cannot be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsf
