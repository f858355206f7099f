#include "nsf/uq.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "nsf/errors.hpp"
#include "nsf/rng.hpp"
#include "nsf/simulation.hpp"

namespace nsf {

const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::density: return "rho";
    case Quantity::momentum: return "m";
    case Quantity::entropy: return "S";
    case Quantity::velocity: return "u";
    case Quantity::temperature: return "theta";
  }
  return "?";
}

int quantity_components(Quantity q) {
  return q == Quantity::momentum || q == Quantity::velocity ? 2 : 1;
}

SampleFields sample_fields(std::shared_ptr<const Mesh> mesh, const FluidParams& fluid, const State& s) {
  SampleFields out;
  const std::size_t n = s.rho.size();
  auto& rho = out.values[static_cast<std::size_t>(Quantity::density)];
  auto& m = out.values[static_cast<std::size_t>(Quantity::momentum)];
  auto& ent = out.values[static_cast<std::size_t>(Quantity::entropy)];
  auto& u = out.values[static_cast<std::size_t>(Quantity::velocity)];
  auto& theta = out.values[static_cast<std::size_t>(Quantity::temperature)];
  rho = s.rho;
  theta = s.theta;
  m.resize(2 * n);
  u.resize(2 * n);
  ent.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[2 * i] = s.u[i].x();
    u[2 * i + 1] = s.u[i].y();
    m[2 * i] = s.rho[i] * s.u[i].x();
    m[2 * i + 1] = s.rho[i] * s.u[i].y();
    ent[i] = s.rho[i] * entropy(s.rho[i], s.theta[i], fluid.cv());
  }
  out.mesh = std::move(mesh);
  return out;
}

namespace {

double cell_norm(const double* v, int comps) {
  if (comps == 1) return std::abs(v[0]);
  double acc = 0.0;
  for (int c = 0; c < comps; ++c) acc += v[c] * v[c];
  return std::sqrt(acc);
}

double cell_norm_diff(const double* a, const double* b, int comps) {
  double acc = 0.0;
  for (int c = 0; c < comps; ++c) acc += (a[c] - b[c]) * (a[c] - b[c]);
  return comps == 1 ? std::abs(a[0] - b[0]) : std::sqrt(acc);
}

}  // namespace

EnsembleStats ensemble_stats(const std::vector<SampleFields>& members) {
  if (members.empty()) throw ConfigError("ensemble_stats: empty ensemble");
  EnsembleStats st;
  st.mesh = members.front().mesh;
  st.members = static_cast<int>(members.size());
  const double inv = 1.0 / static_cast<double>(members.size());
  for (Quantity q : kQuantities) {
    const auto qi = static_cast<std::size_t>(q);
    const int comps = quantity_components(q);
    const std::size_t len = members.front().values[qi].size();
    const std::size_t cells = len / static_cast<std::size_t>(comps);
    FieldStats& fs = st.fields[qi];
    fs.components = comps;
    fs.mean.assign(len, 0.0);
    fs.variance.assign(cells, 0.0);
    fs.mad.assign(cells, 0.0);
    for (const SampleFields& s : members) {
      if (s.values[qi].size() != len) throw ConfigError("ensemble_stats: members on different meshes");
      for (std::size_t i = 0; i < len; ++i) fs.mean[i] += s.values[qi][i];
    }
    for (double& v : fs.mean) v *= inv;
    std::vector<double> diff(static_cast<std::size_t>(comps));
    for (const SampleFields& s : members) {
      for (std::size_t k = 0; k < cells; ++k) {
        double sq = 0.0;
        for (int c = 0; c < comps; ++c) {
          const std::size_t i = k * static_cast<std::size_t>(comps) + static_cast<std::size_t>(c);
          diff[static_cast<std::size_t>(c)] = s.values[qi][i] - fs.mean[i];
          sq += diff[static_cast<std::size_t>(c)] * diff[static_cast<std::size_t>(c)];
        }
        fs.variance[k] += sq;
        fs.mad[k] += cell_norm(diff.data(), comps);
      }
    }
    for (double& v : fs.variance) v *= inv;
    for (double& v : fs.mad) v *= inv;
  }
  return st;
}

std::vector<double> collocation_points(int n, double lo, double hi) {
  if (n < 1) throw ConfigError("collocation_points: n must be at least 1");
  if (!(lo <= hi)) throw ConfigError("collocation_points: need lo <= hi");
  std::vector<double> pts(static_cast<std::size_t>(n));
  const double w = (hi - lo) / n;
  for (int j = 1; j <= n; ++j) pts[static_cast<std::size_t>(j - 1)] = lo + w * (j - 0.5);
  return pts;
}

std::vector<std::vector<double>> draw_mc_samples(std::uint64_t seed, int count, int dim,
                                                 std::uint64_t group, double lo, double hi) {
  if (count < 1) throw ConfigError("draw_mc_samples: count must be at least 1");
  if (dim < 1) throw ConfigError("draw_mc_samples: dim must be at least 1");
  std::vector<std::vector<double>> out(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) {
    rng::Xoshiro256pp gen(rng::derive_seed(seed, group, static_cast<std::uint64_t>(m)));
    auto& v = out[static_cast<std::size_t>(m)];
    v.resize(static_cast<std::size_t>(dim));
    for (double& x : v) x = gen.uniform(lo, hi);
  }
  return out;
}

namespace {

std::string describe(std::size_t index, const std::vector<double>& param) {
  std::ostringstream os;
  os.precision(17);
  os << "sample " << index << " (omega =";
  for (double p : param) os << ' ' << p;
  os << "): ";
  return os.str();
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleSettings& settings, RandomModel model,
                            const std::vector<std::vector<double>>& params) {
  if (params.empty()) throw ConfigError("ensemble: no samples");
  if (settings.threads < 1) throw ConfigError("ensemble: threads must be at least 1");
  auto mesh = std::make_shared<const Mesh>(build_mesh(settings.nx, settings.ny, settings.x1_extent));
  settings.scheme.validate();
  settings.rb.validate();

  const int n = static_cast<int>(params.size());
  EnsembleResult out;
  out.samples.resize(params.size());
  std::vector<std::exception_ptr> errors(params.size());

  RunOptions opts;
  opts.final_time = settings.final_time;
  opts.exec = Exec::serial;
  opts.diagnostics = false;

#pragma omp parallel for schedule(dynamic, 1) num_threads(settings.threads)
  for (int j = 0; j < n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    try {
      const DataBundle data = rb_data(settings.rb, model, params[i], mesh);
      const RunResult res = run(data, settings.scheme, opts);
      SampleResult& s = out.samples[i];
      s.param = params[i];
      s.fields = sample_fields(mesh, data.fluid, res.final_state);
      s.lambda_max = res.lambda_max;
      s.positive = res.positive;
      s.steps = res.steps;
    } catch (const StepFailure& e) {
      errors[i] = std::make_exception_ptr(
          StepFailure(describe(i, params[i]) + e.what(), e.time(), e.residual_history()));
    } catch (const PositivityFailure& e) {
      errors[i] = std::make_exception_ptr(PositivityFailure(describe(i, params[i]) + e.what(), e.time()));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<SampleFields> fields;
  fields.reserve(out.samples.size());
  for (const SampleResult& s : out.samples) fields.push_back(s.fields);
  out.stats = ensemble_stats(fields);
  return out;
}

EnsembleResult run_sc(const EnsembleSettings& settings, int n, double lo, double hi) {
  std::vector<std::vector<double>> params;
  for (double y : collocation_points(n, lo, hi)) params.push_back({y});
  return run_ensemble(settings, RandomModel::collocation, params);
}

std::vector<EnsembleResult> run_mc(const EnsembleSettings& settings, int members, int groups,
                                   std::uint64_t seed) {
  if (members < 1 || groups < 1) throw ConfigError("run_mc: M and K must be at least 1");
  std::vector<std::vector<double>> params;
  for (int k = 0; k < groups; ++k) {
    auto g = draw_mc_samples(seed, members, 2, static_cast<std::uint64_t>(k));
    params.insert(params.end(), g.begin(), g.end());
  }
  // One pool over all K*M samples, split into groups afterwards.
  EnsembleResult all = run_ensemble(settings, RandomModel::monte_carlo, params);
  std::vector<EnsembleResult> out(static_cast<std::size_t>(groups));
  for (int k = 0; k < groups; ++k) {
    auto& g = out[static_cast<std::size_t>(k)];
    const auto first = all.samples.begin() + static_cast<std::ptrdiff_t>(k) * members;
    g.samples.assign(first, first + members);
    std::vector<SampleFields> fields;
    for (const auto& s : g.samples) fields.push_back(s.fields);
    g.stats = ensemble_stats(fields);
  }
  return out;
}

std::vector<double> prolong(const std::vector<double>& coarse, int components, const Mesh& from,
                            const Mesh& to) {
  if (to.nx() % from.nx() != 0 || to.ny() % from.ny() != 0 ||
      std::abs(to.x1_extent() - from.x1_extent()) > 1e-12 * from.x1_extent()) {
    throw ConfigError("prolong: meshes are not nested");
  }
  const auto comps = static_cast<std::size_t>(components);
  if (coarse.size() != comps * static_cast<std::size_t>(from.num_cells())) {
    throw ConfigError("prolong: field does not match the coarse mesh");
  }
  const int fx = to.nx() / from.nx();
  const int fy = to.ny() / from.ny();
  std::vector<double> fine(comps * static_cast<std::size_t>(to.num_cells()));
  for (int k = 0; k < to.num_cells(); ++k) {
    const int parent = from.cell_index(to.column(k) / fx, to.row(k) / fy);
    for (std::size_t c = 0; c < comps; ++c) {
      fine[static_cast<std::size_t>(k) * comps + c] = coarse[static_cast<std::size_t>(parent) * comps + c];
    }
  }
  return fine;
}

namespace {

double l1_distance(const std::vector<double>& a, const std::vector<double>& b, int comps, const Mesh& mesh) {
  const auto c = static_cast<std::size_t>(comps);
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size() / c; ++k) acc += cell_norm_diff(a.data() + k * c, b.data() + k * c, comps);
  return mesh.cell_measure() * acc;
}

}  // namespace

ErrorPair error_sc(const EnsembleStats& ensemble, const EnsembleStats& reference, Quantity q) {
  const Mesh& from = *ensemble.mesh;
  const Mesh& to = *reference.mesh;
  const FieldStats& e = ensemble[q];
  const FieldStats& r = reference[q];
  const std::vector<double> mean = prolong(e.mean, e.components, from, to);
  const std::vector<double> mad = prolong(e.mad, 1, from, to);
  return {l1_distance(mean, r.mean, e.components, to), l1_distance(mad, r.mad, 1, to)};
}

ErrorPair error_mc(const std::vector<EnsembleStats>& groups, const EnsembleStats& reference,
                   Quantity q) {
  if (groups.empty()) throw ConfigError("error_mc: no groups");
  ErrorPair acc;
  for (const EnsembleStats& g : groups) {
    const ErrorPair e = error_sc(g, reference, q);
    acc.e1 += e.e1;
    acc.e2 += e.e2;
  }
  const double k = static_cast<double>(groups.size());
  return {acc.e1 / k, acc.e2 / k};
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fit_slope: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceTable convergence_table(std::vector<ConvergenceRow> rows, const std::string& abscissa) {
  if (rows.size() < 2) throw ConfigError("convergence_table: need at least 2 levels");
  if (abscissa != "h" && abscissa != "M") throw ConfigError("convergence_table: abscissa must be h or M");
  ConvergenceTable t;
  t.abscissa = abscissa;
  t.rows = std::move(rows);
  std::vector<double> x;
  for (const auto& r : t.rows) x.push_back(abscissa == "h" ? r.h : static_cast<double>(r.count));
  const double sign = abscissa == "h" ? 1.0 : -1.0;
  for (std::size_t q = 0; q < kNumQuantities; ++q) {
    std::vector<double> e1, e2;
    for (const auto& r : t.rows) {
      e1.push_back(r.errors[q].e1);
      e2.push_back(r.errors[q].e2);
    }
    t.rate_e1[q] = sign * fit_slope(x, e1);
    t.rate_e2[q] = sign * fit_slope(x, e2);
  }
  return t;
}

ConvergenceTable sc_convergence(const EnsembleSettings& settings, const ScLadder& ladder) {
  if (ladder.levels < 3) throw ConfigError("sc convergence: at least 3 ladder levels are required");
  const auto cells_x = [&](int ny) {
    const double nx = settings.x1_extent * ny / 2.0;
    return static_cast<int>(std::lround(nx));
  };
  EnsembleSettings ref = settings;
  ref.ny = ladder.ny_ref;
  ref.nx = cells_x(ladder.ny_ref);
  const EnsembleResult reference = run_sc(ref, ladder.n_ref);

  std::vector<ConvergenceRow> rows;
  for (int l = 0; l < ladder.levels; ++l) {
    EnsembleSettings lv = settings;
    lv.ny = ladder.ny0 << l;
    lv.nx = cells_x(lv.ny);
    const int n = ladder.n0 << l;
    const EnsembleResult res = run_sc(lv, n);
    ConvergenceRow row;
    row.h = 2.0 / lv.ny;
    row.count = n;
    for (Quantity q : kQuantities) {
      row.errors[static_cast<std::size_t>(q)] = error_sc(res.stats, reference.stats, q);
    }
    rows.push_back(row);
  }
  return convergence_table(std::move(rows), "h");
}

McConvergence mc_convergence(const EnsembleSettings& settings, const McLadder& ladder) {
  if (ladder.members.size() < 3) throw ConfigError("mc convergence: at least 3 ladder levels are required");
  for (int m : ladder.members) {
    if (m < 1) throw ConfigError("mc convergence: M must be at least 1");
  }
  const int m_max = *std::max_element(ladder.members.begin(), ladder.members.end());

  McConvergence out;
  // Levels are nested: the first M samples of each group at the largest M.
  const std::vector<EnsembleResult> groups = run_mc(settings, m_max, ladder.groups, ladder.seed);
  const std::vector<EnsembleResult> reference =
      run_mc(settings, ladder.reference_members, 1, ladder.reference_seed);
  for (const auto& g : groups) {
    for (const auto& s : g.samples) {
      out.lambda.push_back(s.lambda_max);
      out.all_positive = out.all_positive && s.positive;
    }
  }
  for (const auto& s : reference.front().samples) {
    out.lambda.push_back(s.lambda_max);
    out.all_positive = out.all_positive && s.positive;
  }

  std::vector<ConvergenceRow> rows;
  for (int m : ladder.members) {
    std::vector<EnsembleStats> stats;
    for (const auto& g : groups) {
      std::vector<SampleFields> fields;
      for (int j = 0; j < m; ++j) fields.push_back(g.samples[static_cast<std::size_t>(j)].fields);
      stats.push_back(ensemble_stats(fields));
    }
    ConvergenceRow row;
    row.h = 2.0 / settings.ny;
    row.count = m;
    for (Quantity q : kQuantities) {
      row.errors[static_cast<std::size_t>(q)] = error_mc(stats, reference.front().stats, q);
    }
    rows.push_back(row);
  }
  out.table = convergence_table(std::move(rows), "M");
  return out;
}

}  // namespace nsf
