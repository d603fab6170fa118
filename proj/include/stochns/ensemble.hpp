#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stochns/diagnostics.hpp"
#include "stochns/forcing.hpp"
#include "stochns/initial_conditions.hpp"
#include "stochns/integrator.hpp"
#include "stochns/structure_functions.hpp"

namespace stochns {

namespace fs = std::filesystem;

enum class IcKind { flat_vortex_sheet, fractional_brownian_bridge, taylor_green };

IcKind parse_ic_kind(const std::string& name);
std::string to_string(IcKind k);

struct InitialConditionSpec {
    IcKind kind = IcKind::flat_vortex_sheet;
    VortexSheetParams sheet;
    FbbParams fbb;
    double amplitude = 1.0;  // taylor_green
};

SpectralField make_initial_condition(const Grid& grid, const InitialConditionSpec& spec, RandomStream& rng);

struct EnsembleSpec {
    int realizations = 32;
    std::vector<double> viscosities;  // resolved values
    int grid_n = 256;
    std::uint64_t master_seed = 0;
    InitialConditionSpec ic;
    int n_b = 9;
    double sigma = 0.0;
    IntegratorConfig integrator;  // nu is set per cell
    std::vector<double> sf_radii;
    int sf_every = 10;  // steps between structure-function evaluations
    SfNormalization sf_normalization = SfNormalization::average;
    int n_rect = 10000;
    int aggregation_points = 512;
    int workers = 1;
    bool common_noise = false;
    bool skip_failed = false;
    bool write_snapshots = false;  // initial and final state of every realization

    void validate() const;
};

/// Geometric radii from 1/n to 1/2.
std::vector<double> default_sf_radii(int n, int count = 24);

/// Stream paths of one realization: {purpose, viscosity index, realization}.
std::array<std::uint64_t, 3> ic_stream_path(std::size_t realization);
std::array<std::uint64_t, 3> noise_stream_path(const EnsembleSpec& spec, std::size_t nu_index, std::size_t realization);

struct RealizationResult {
    std::size_t nu_index = 0;
    std::size_t realization = 0;
    bool failed = false;
    std::string error;
    std::vector<DiagnosticsRecord> records;
    std::vector<double> step_times;
    std::vector<double> step_grad_sq;
    std::vector<double> sf_times;
    std::vector<std::vector<double>> sf_values;  // S_2 per sf time, per radius
    std::optional<SpectralField> initial_state;  // kept when spec.write_snapshots
    std::optional<SpectralField> final_state;
};

RealizationResult run_realization(const EnsembleSpec& spec, std::size_t nu_index, std::size_t realization);

struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> std;  // divisor R - 1, zero for R = 1
    std::vector<double> sem;  // std / sqrt(R)
};

/// Pointwise statistics over equally long series.
SeriesStats aggregate(const std::vector<std::vector<double>>& series);

/// Piecewise-linear interpolation of (times, values) at the query points, clamped at the ends.
std::vector<double> interpolate(std::span<const double> times, std::span<const double> values,
                                std::span<const double> at);

struct CellStats {
    std::size_t nu_index = 0;
    double nu = 0.0;
    std::size_t realizations = 0;
    std::vector<std::size_t> failed;
    std::vector<double> times;
    std::vector<std::string> names;  // energy, grad_sq, enstrophy, cum_dissipation, noise_input_theoretical, energy_input
    std::vector<SeriesStats> series;
    StructureFunctionTable sf_initial;  // sqrt(E S_2(u(0); r)^2)
    StructureFunctionTable sf_mean;     // snapshot: at t_end; time-integrated: sqrt(E S_2^T(r)^2)
    double dissipation_riemann = 0.0;   // ensemble means at t_end
    double dissipation_trapezoid = 0.0;
    double dissipation_max_rel_diff = 0.0;  // max over realizations of |riemann - trapezoid| / trapezoid

    const SeriesStats& get(std::string_view name) const;
};

struct EnsembleStats {
    std::vector<CellStats> cells;
};

EnsembleStats aggregate_ensemble(const EnsembleSpec& spec, const std::vector<RealizationResult>& results);

struct BalanceResidual {
    double residual = 0.0;  // mean(E(t) + D(t) - E(0)) - sigma_bar t
    double sem = 0.0;       // Monte Carlo standard error of the left-hand combination
};

/// Energy-balance residual at time t, interpolated on the aggregation grid.
BalanceResidual energy_balance_residual(const CellStats& cell, const ForcingBasis& basis, double t);

/// All realizations of all cells. With a nonempty out_dir every realization writes
/// its raw files as it finishes and the statistics are written at the end.
EnsembleStats run_ensemble(const EnsembleSpec& spec, const fs::path& out_dir = {},
                           std::vector<RealizationResult>* raw = nullptr);

/// Human-readable run matrix with stream paths; runs nothing.
std::string describe_run_matrix(const EnsembleSpec& spec);

void write_realization(const fs::path& out_dir, const EnsembleSpec& spec, const RealizationResult& result);
RealizationResult read_realization(const fs::path& out_dir, const EnsembleSpec& spec, std::size_t nu_index,
                                   std::size_t realization);

/// mean_nu<i>.csv, sf_mean_nu<i>.csv, summary.json.
void write_statistics(const fs::path& out_dir, const EnsembleSpec& spec, const EnsembleStats& stats);

/// Recomputes the statistics from the raw outputs of a finished ensemble directory.
EnsembleStats analyze(const fs::path& out_dir);

/// Directory of cell i inside an ensemble output directory.
fs::path cell_dir(const fs::path& out_dir, std::size_t nu_index);

}  // namespace stochns
