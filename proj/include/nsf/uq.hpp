#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nsf/mesh.hpp"
#include "nsf/rayleigh_benard.hpp"
#include "nsf/scheme.hpp"
#include "nsf/state.hpp"

namespace nsf {

/// Quantities compared in the error metrics: rho, m = rho u, S = rho s, u, theta.
enum class Quantity { density, momentum, entropy, velocity, temperature };
inline constexpr std::array<Quantity, 5> kQuantities{Quantity::density, Quantity::momentum,
                                                    Quantity::entropy, Quantity::velocity,
                                                    Quantity::temperature};
inline constexpr std::size_t kNumQuantities = kQuantities.size();

const char* quantity_name(Quantity q);
int quantity_components(Quantity q);

/// Cellwise values of every Quantity, `components` values per cell.
struct SampleFields {
  std::shared_ptr<const Mesh> mesh;
  std::array<std::vector<double>, kNumQuantities> values;

  const std::vector<double>& operator[](Quantity q) const { return values[static_cast<std::size_t>(q)]; }
};

SampleFields sample_fields(std::shared_ptr<const Mesh> mesh, const FluidParams& fluid, const State& s);

/// Population statistics of one quantity. For vector quantities `variance`
/// and `mad` are per cell (E|U - mean|^2 and E|U - mean| with the Euclidean norm).
struct FieldStats {
  int components = 1;
  std::vector<double> mean;  // components per cell
  std::vector<double> variance;
  std::vector<double> mad;
};

struct EnsembleStats {
  std::shared_ptr<const Mesh> mesh;
  int members = 0;
  std::array<FieldStats, kNumQuantities> fields;

  const FieldStats& operator[](Quantity q) const { return fields[static_cast<std::size_t>(q)]; }
};

/// Equal-weight statistics; summation runs in member order.
EnsembleStats ensemble_stats(const std::vector<SampleFields>& members);

/// Midpoints lo + (hi - lo)/n (j - 1/2), j = 1..n.
std::vector<double> collocation_points(int n, double lo = -0.1, double hi = 0.1);

/// M i.i.d. uniform vectors in [lo, hi]^dim. Member m of `group` draws its
/// components from xoshiro256++ seeded with derive_seed(seed, group, m).
std::vector<std::vector<double>> draw_mc_samples(std::uint64_t seed, int count, int dim,
                                                 std::uint64_t group = 0, double lo = -0.1,
                                                 double hi = 0.1);

/// Mesh, horizon and solver settings shared by all members of an ensemble.
struct EnsembleSettings {
  int nx = 32;
  int ny = 16;
  double x1_extent = 4.0;
  double final_time = 0.5;
  SchemeParams scheme{};
  RBConfig rb{};
  int threads = 1;  // concurrent samples
};

struct SampleResult {
  std::vector<double> param;
  SampleFields fields;
  double lambda_max = 0.0;
  bool positive = true;
  int steps = 0;
};

struct EnsembleResult {
  std::vector<SampleResult> samples;  // in parameter order
  EnsembleStats stats;
};

/// Runs one deterministic problem per parameter vector. Samples run concurrently,
/// each with serial kernels; results are stored and reduced in index order.
/// The first failing sample (lowest index) aborts the ensemble: StepFailure and
/// PositivityFailure are rethrown with the sample index and parameters prepended.
EnsembleResult run_ensemble(const EnsembleSettings& settings, RandomModel model,
                            const std::vector<std::vector<double>>& params);

/// Collocation ensemble on the n midpoints of [lo, hi].
EnsembleResult run_sc(const EnsembleSettings& settings, int n, double lo = -0.1, double hi = 0.1);

/// K independent groups of M Monte Carlo samples.
std::vector<EnsembleResult> run_mc(const EnsembleSettings& settings, int members, int groups,
                                   std::uint64_t seed);

/// Piecewise-constant injection onto a mesh refined by integer factors.
/// Throws ConfigError for non-nested meshes.
std::vector<double> prolong(const std::vector<double>& coarse, int components, const Mesh& from,
                            const Mesh& to);

struct ErrorPair {
  double e1 = 0.0;  // L1 error of the mean
  double e2 = 0.0;  // L1 error of the mean absolute deviation
};

/// Errors of one ensemble's statistics against reference statistics, after
/// prolongation to the reference mesh.
ErrorPair error_sc(const EnsembleStats& ensemble, const EnsembleStats& reference, Quantity q);

/// error_sc averaged over groups.
ErrorPair error_mc(const std::vector<EnsembleStats>& groups, const EnsembleStats& reference,
                   Quantity q);

/// Least-squares slope of log(y) against log(x).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceRow {
  double h = 0.0;
  int count = 0;  // n for collocation, M for Monte Carlo
  std::array<ErrorPair, kNumQuantities> errors;
};

/// Rates per quantity. For the collocation ladder the rate is d log E / d log h;
/// for Monte Carlo it is -d log E / d log M.
struct ConvergenceTable {
  std::string abscissa;  // "h" or "M"
  std::vector<ConvergenceRow> rows;
  std::array<double, kNumQuantities> rate_e1{};
  std::array<double, kNumQuantities> rate_e2{};
};

/// Fits the rates; throws ConfigError for fewer than 2 rows.
ConvergenceTable convergence_table(std::vector<ConvergenceRow> rows, const std::string& abscissa);

/// Collocation ladder: level l uses ny0 * 2^l cells across and n0 * 2^l
/// points; the reference uses (ny_ref, n_ref). Square cells on x1_extent.
struct ScLadder {
  int ny0 = 16;
  int n0 = 2;
  int levels = 3;
  int ny_ref = 128;
  int n_ref = 16;
};
ConvergenceTable sc_convergence(const EnsembleSettings& settings, const ScLadder& ladder);

/// Monte Carlo ladder on the settings' mesh.
struct McLadder {
  std::vector<int> members{4, 8, 16, 32};
  int groups = 5;
  std::uint64_t seed = 2024;
  int reference_members = 128;
  std::uint64_t reference_seed = 2025;
};
struct McConvergence {
  ConvergenceTable table;
  std::vector<double> lambda;  // sup-in-time Lambda of every sample run (groups, then reference)
  bool all_positive = true;
};
McConvergence mc_convergence(const EnsembleSettings& settings, const McLadder& ladder);

}  // namespace nsf
