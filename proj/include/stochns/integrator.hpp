#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stochns/diagnostics.hpp"
#include "stochns/fields.hpp"
#include "stochns/forcing.hpp"
#include "stochns/rng.hpp"

namespace stochns {

enum class Scheme {
    euler_maruyama,  // fully explicit, one stage
    imex_cn_em,      // exact viscous factor, SSP-RK3 advection, noise added after the update
};

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

struct IntegratorConfig {
    double nu = 0.0;
    std::optional<double> dt;  // empty: CFL-controlled
    double t_end = 1.0;
    Scheme scheme = Scheme::imex_cn_em;
    double cfl = 0.4;
    double dt_max = 1e-2;
    int record_every = 1;
    int snapshot_every = 0;  // 0: snapshots only at t = 0 and t_end
    bool keep_snapshots = false;
    Dealias dealias = Dealias::three_halves;
    bool project_every_step = true;

    void validate() const;
};

struct Snapshot {
    double t;
    SpectralField field;
};

struct Trajectory {
    explicit Trajectory(Grid g) : final_state(g) {}

    std::vector<double> times;
    std::vector<DiagnosticsRecord> records;
    // every step, starting at t = 0; feeds the dissipation quadratures
    std::vector<double> step_times;
    std::vector<double> step_grad_sq;
    std::vector<Snapshot> snapshots;
    SpectralField final_state;
    std::size_t steps = 0;
};

/// Non-finite state. Carries the failing step and the trajectory up to the last good step.
class UnstableRunError : public std::runtime_error {
public:
    UnstableRunError(std::size_t step, double t, std::shared_ptr<const Trajectory> partial);

    std::size_t step() const { return step_; }
    double time() const { return t_; }
    const Trajectory* partial() const { return partial_.get(); }

private:
    std::size_t step_;
    double t_;
    std::shared_ptr<const Trajectory> partial_;
};

/// One step of length noise.dt. f_det, when given, is a time-independent forcing.
SpectralField step(const SpectralField& u, const IntegratorConfig& cfg, const NoiseIncrement& noise,
                   const SpectralField* f_det = nullptr);

/// cfl * min(1/(n max|u| + eps), explicit viscous limit), capped by dt_max.
double auto_dt(const SpectralField& u, const IntegratorConfig& cfg);

using SnapshotObserver = std::function<void(double t, const SpectralField& u)>;

/// Integrates from t = 0 to cfg.t_end. With a fixed dt the step is shrunk uniformly
/// so that t_end is reached exactly. The observer sees t = 0, every snapshot_every
/// steps, and t_end.
Trajectory run(const Grid& grid, const SpectralField& ic, const IntegratorConfig& cfg, const ForcingBasis& basis,
               RandomStream& rng, const SnapshotObserver& observer = {}, const SpectralField* f_det = nullptr);

}  // namespace stochns
