#include "nsf/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

}  // namespace

void write_vtk(const std::filesystem::path& path, const Mesh& mesh, const std::vector<NamedField>& fields,
               const std::string& title) {
  auto out = open_out(path);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << mesh.nx() + 1 << ' ' << mesh.ny() + 1 << " 1\n";
  out << "ORIGIN " << mesh.x1_min() << " -1 0\n";
  out << "SPACING " << mesh.h() << ' ' << mesh.h() << " 1\n";
  out << "CELL_DATA " << mesh.num_cells() << '\n';
  const auto cells = static_cast<std::size_t>(mesh.num_cells());
  for (const NamedField& f : fields) {
    const auto comps = static_cast<std::size_t>(f.components);
    if (f.values.size() != comps * cells) throw ConfigError("vtk: field '" + f.name + "' has the wrong size");
    if (comps == 1) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) out << v << '\n';
    } else {
      out << "VECTORS " << f.name << " double\n";
      for (std::size_t k = 0; k < cells; ++k) out << f.values[2 * k] << ' ' << f.values[2 * k + 1] << " 0\n";
    }
  }
  finish(out, path);
}

std::vector<double> line_profile(const Mesh& mesh, const NamedField& field, double y) {
  const double h = mesh.h();
  // Row centres sit at -1 + (j + 1/2) h.
  const double s = (y + 1.0) / h - 0.5;
  int j0 = static_cast<int>(std::floor(s));
  double w = s - j0;
  if (j0 < 0) {
    j0 = 0;
    w = 0.0;
  } else if (j0 >= mesh.ny() - 1) {
    j0 = mesh.ny() - 1;
    w = 0.0;
  }
  const int j1 = std::min(j0 + 1, mesh.ny() - 1);
  const auto comps = static_cast<std::size_t>(field.components);
  std::vector<double> out(static_cast<std::size_t>(mesh.nx()) * comps);
  for (int i = 0; i < mesh.nx(); ++i) {
    const auto a = static_cast<std::size_t>(mesh.cell_index(i, j0));
    const auto b = static_cast<std::size_t>(mesh.cell_index(i, j1));
    for (std::size_t c = 0; c < comps; ++c) {
      out[static_cast<std::size_t>(i) * comps + c] =
          (1.0 - w) * field.values[a * comps + c] + w * field.values[b * comps + c];
    }
  }
  return out;
}

void write_line_profiles(const std::filesystem::path& path, const Mesh& mesh,
                         const std::vector<NamedField>& fields, const std::vector<double>& ordinates) {
  auto out = open_out(path);
  out << "x2,x1";
  for (const NamedField& f : fields) {
    if (f.components == 1) {
      out << ',' << f.name;
    } else {
      for (int c = 1; c <= f.components; ++c) out << ',' << f.name << '_' << c;
    }
  }
  out << '\n';
  for (double y : ordinates) {
    std::vector<std::vector<double>> prof;
    for (const NamedField& f : fields) prof.push_back(line_profile(mesh, f, y));
    for (int i = 0; i < mesh.nx(); ++i) {
      out << y << ',' << mesh.barycenter(mesh.cell_index(i, 0)).x();
      for (std::size_t q = 0; q < fields.size(); ++q) {
        const auto comps = static_cast<std::size_t>(fields[q].components);
        for (std::size_t c = 0; c < comps; ++c) out << ',' << prof[q][static_cast<std::size_t>(i) * comps + c];
      }
      out << '\n';
    }
  }
  finish(out, path);
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& rows) {
  auto out = open_out(path);
  write_diagnostics_header(out);
  for (const auto& r : rows) write_diagnostics_row(out, r);
  finish(out, path);
}

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceTable& table) {
  auto out = open_out(path);
  out << "h," << (table.abscissa == "M" ? "M" : "n");
  for (Quantity q : kQuantities) out << ",E1_" << quantity_name(q) << ",E2_" << quantity_name(q);
  out << '\n';
  for (const auto& r : table.rows) {
    out << r.h << ',' << r.count;
    for (const auto& e : r.errors) out << ',' << e.e1 << ',' << e.e2;
    out << '\n';
  }
  finish(out, path);
}

void write_rates_csv(const std::filesystem::path& path, const ConvergenceTable& table) {
  auto out = open_out(path);
  out << "quantity,abscissa,rate_E1,rate_E2\n";
  for (Quantity q : kQuantities) {
    const auto i = static_cast<std::size_t>(q);
    out << quantity_name(q) << ',' << table.abscissa << ',' << table.rate_e1[i] << ',' << table.rate_e2[i] << '\n';
  }
  finish(out, path);
}

ConvergenceTable read_convergence_csv(const std::filesystem::path& path, const std::string& abscissa) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  const std::size_t expected = 2 + 2 * kNumQuantities;
  if (split(line).size() != expected) throw IoError("convergence csv: unexpected header");
  std::vector<ConvergenceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tok = split(line);
    if (tok.size() != expected) throw IoError("convergence csv: malformed row");
    ConvergenceRow r;
    r.h = std::stod(tok[0]);
    r.count = std::stoi(tok[1]);
    for (std::size_t q = 0; q < kNumQuantities; ++q) {
      r.errors[q].e1 = std::stod(tok[2 + 2 * q]);
      r.errors[q].e2 = std::stod(tok[3 + 2 * q]);
    }
    rows.push_back(r);
  }
  return convergence_table(std::move(rows), abscissa);
}

void write_tail_csv(const std::filesystem::path& path, const TailReport& tail) {
  auto out = open_out(path);
  out << "threshold,fraction_above,samples\n";
  for (std::size_t i = 0; i < tail.thresholds.size(); ++i) {
    out << tail.thresholds[i] << ',' << tail.fraction[i] << ',' << tail.samples << '\n';
  }
  finish(out, path);
}

void write_samples_csv(const std::filesystem::path& path, const std::vector<SampleResult>& samples) {
  auto out = open_out(path);
  const std::size_t dim = samples.empty() ? 0 : samples.front().param.size();
  out << "index";
  for (std::size_t d = 0; d < dim; ++d) out << ",Y" << d + 1;
  out << ",lambda_max,positive,steps\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << i;
    for (double p : samples[i].param) out << ',' << p;
    out << ',' << samples[i].lambda_max << ',' << (samples[i].positive ? 1 : 0) << ',' << samples[i].steps << '\n';
  }
  finish(out, path);
}

std::vector<NamedField> state_fields(const State& s) {
  NamedField u{"u", 2, {}};
  u.values.reserve(2 * s.u.size());
  for (const Vec2& v : s.u) {
    u.values.push_back(v.x());
    u.values.push_back(v.y());
  }
  return {{"rho", 1, s.rho}, {"theta", 1, s.theta}, std::move(u)};
}

std::vector<NamedField> stats_fields(const EnsembleStats& st) {
  std::vector<NamedField> out;
  for (Quantity q : kQuantities) {
    const FieldStats& f = st[q];
    const std::string name = quantity_name(q);
    out.push_back({"mean_" + name, f.components, f.mean});
    out.push_back({"var_" + name, 1, f.variance});
    out.push_back({"mad_" + name, 1, f.mad});
  }
  return out;
}

}  // namespace nsf
