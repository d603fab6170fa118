#include "stochns/integrator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stochns/spectral_ops.hpp"

namespace stochns {

namespace {

constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

bool finite(const SpectralField& u) {
    for (const auto& c : u.comp)
        for (auto z : c)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

class NonFiniteState : public std::runtime_error {
public:
    NonFiniteState() : std::runtime_error("non-finite state") {}
};

/// Per-mode viscous rates and cached exponential factors for one step length.
class Stepper {
public:
    Stepper(const Grid& grid, const IntegratorConfig& cfg) : grid_(grid), cfg_(cfg), rate_(grid.spectral_size()) {
        for (int a = 0; a < grid.n(); ++a)
            for (int b = 0; b < grid.half(); ++b) {
                const double k1 = grid.k1(a), k2 = grid.k2(b);
                rate_[grid.sidx(a, b)] = four_pi_sq * cfg.nu * (k1 * k1 + k2 * k2);
            }
    }

    SpectralField advance(const SpectralField& u, const NoiseIncrement& noise, const SpectralField* f_det) {
        const double dt = noise.dt;
        SpectralField next = cfg_.scheme == Scheme::euler_maruyama ? euler(u, dt, f_det) : ssprk3(u, dt, f_det);
        next += noise.field;
        if (cfg_.project_every_step) next = leray_project(std::move(next));
        next = fourier_truncate(std::move(next), grid_.max_retained(cfg_.dealias));
        if (!finite(next)) throw NonFiniteState();
        return next;
    }

private:
    SpectralField rhs(const SpectralField& u, const SpectralField* f_det) const {
        SpectralField r = nonlinear_term(u, cfg_.dealias);
        if (f_det) r += *f_det;
        return r;
    }

    SpectralField euler(const SpectralField& u, double dt, const SpectralField* f_det) const {
        SpectralField out = rhs(u, f_det);
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < rate_.size(); ++i)
                out.comp[c][i] = u.comp[c][i] + dt * (out.comp[c][i] - rate_[i] * u.comp[c][i]);
        return out;
    }

    void set_factors(double dt) {
        if (dt == factor_dt_) return;
        factor_dt_ = dt;
        full_.resize(rate_.size());
        half_.resize(rate_.size());
        inv_half_.resize(rate_.size());
        for (std::size_t i = 0; i < rate_.size(); ++i) {
            full_[i] = std::exp(-rate_[i] * dt);
            half_[i] = std::exp(-0.5 * rate_[i] * dt);
            inv_half_[i] = std::exp(0.5 * rate_[i] * dt);
        }
    }

    // Shu-Osher SSP-RK3 in the integrating-factor variables.
    SpectralField ssprk3(const SpectralField& u, double dt, const SpectralField* f_det) {
        set_factors(dt);
        const std::size_t m = rate_.size();

        SpectralField u1 = rhs(u, f_det);
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < m; ++i) u1.comp[c][i] = full_[i] * (u.comp[c][i] + dt * u1.comp[c][i]);

        SpectralField u2 = rhs(u1, f_det);
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < m; ++i)
                u2.comp[c][i] = 0.75 * half_[i] * u.comp[c][i] + 0.25 * inv_half_[i] * (u1.comp[c][i] + dt * u2.comp[c][i]);

        SpectralField out = rhs(u2, f_det);
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < m; ++i)
                out.comp[c][i] = (1.0 / 3.0) * full_[i] * u.comp[c][i] +
                                 (2.0 / 3.0) * half_[i] * (u2.comp[c][i] + dt * out.comp[c][i]);
        return out;
    }

    Grid grid_;
    IntegratorConfig cfg_;
    std::vector<double> rate_;
    double factor_dt_ = -1.0;
    std::vector<double> full_, half_, inv_half_;
};

}  // namespace

Scheme parse_scheme(const std::string& name) {
    if (name == "euler_maruyama") return Scheme::euler_maruyama;
    if (name == "imex_cn_em") return Scheme::imex_cn_em;
    throw ConfigError("unknown scheme '" + name + "' (expected euler_maruyama, imex_cn_em)");
}

std::string to_string(Scheme s) { return s == Scheme::euler_maruyama ? "euler_maruyama" : "imex_cn_em"; }

void IntegratorConfig::validate() const {
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("integrator.nu must be finite and >= 0");
    if (dt && !(*dt > 0.0)) throw ConfigError("integrator.dt must be > 0 or \"auto\"");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("integrator.t_end must be finite and >= 0");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("integrator.cfl must lie in (0, 1]");
    if (!(dt_max > 0.0)) throw ConfigError("integrator.dt_max must be > 0");
    if (record_every < 1) throw ConfigError("integrator.record_every must be >= 1");
    if (snapshot_every < 0) throw ConfigError("integrator.snapshot_every must be >= 0");
}

UnstableRunError::UnstableRunError(std::size_t step, double t, std::shared_ptr<const Trajectory> partial)
    : std::runtime_error("unstable run: non-finite state at step " + std::to_string(step) + " (t = " +
                         std::to_string(t) + ")"),
      step_(step), t_(t), partial_(std::move(partial)) {}

SpectralField step(const SpectralField& u, const IntegratorConfig& cfg, const NoiseIncrement& noise,
                   const SpectralField* f_det) {
    if (!(noise.field.grid == u.grid)) throw ConfigError("noise increment grid mismatch");
    Stepper stepper(u.grid, cfg);
    try {
        return stepper.advance(u, noise, f_det);
    } catch (const NonFiniteState&) {
        throw UnstableRunError(0, noise.dt, nullptr);
    }
}

double auto_dt(const SpectralField& u, const IntegratorConfig& cfg) {
    const double n = u.grid.n();
    double limit = 1.0 / (n * max_speed(u) + 1e-300);
    if (cfg.scheme == Scheme::euler_maruyama && cfg.nu > 0.0) {
        const double k = u.grid.max_retained(cfg.dealias);
        limit = std::min(limit, 2.0 / (four_pi_sq * cfg.nu * 2.0 * k * k));
    }
    return std::min(cfg.cfl * limit, cfg.dt_max);
}

Trajectory run(const Grid& grid, const SpectralField& ic, const IntegratorConfig& cfg, const ForcingBasis& basis,
               RandomStream& rng, const SnapshotObserver& observer, const SpectralField* f_det) {
    cfg.validate();
    if (!(ic.grid == grid) || !(basis.grid() == grid)) throw ConfigError("initial condition / forcing grid mismatch");

    Trajectory traj(grid);
    SpectralField u = fourier_truncate(ic, grid.max_retained(cfg.dealias));
    if (cfg.project_every_step) u = leray_project(std::move(u));

    const double sbar = basis.sigma_bar();
    double t = 0.0;
    double cumulative = 0.0;
    double grad_prev = grad_l2_norm_sq(u);

    auto record = [&](const SpectralField& state) {
        traj.times.push_back(t);
        traj.records.push_back(measure(state, t, cumulative, sbar));
    };
    auto snapshot = [&](const SpectralField& state) {
        if (observer) observer(t, state);
        if (cfg.keep_snapshots) traj.snapshots.push_back({t, state});
    };

    record(u);
    snapshot(u);
    traj.step_times.push_back(0.0);
    traj.step_grad_sq.push_back(grad_prev);

    std::size_t fixed_steps = 0;
    double fixed_dt = 0.0;
    if (cfg.dt && cfg.t_end > 0.0) {
        fixed_steps = static_cast<std::size_t>(std::ceil(cfg.t_end / *cfg.dt - 1e-9));
        fixed_dt = cfg.t_end / static_cast<double>(fixed_steps);
    }

    Stepper stepper(grid, cfg);
    std::size_t s = 0;
    while (t < cfg.t_end) {
        double dt = 0.0;
        bool last = false;
        if (cfg.dt) {
            dt = fixed_dt;
            last = s + 1 == fixed_steps;
        } else {
            dt = auto_dt(u, cfg);
            if (t + dt >= cfg.t_end * (1.0 - 1e-12)) {
                dt = cfg.t_end - t;
                last = true;
            }
        }
        const NoiseIncrement noise = sample_increment(basis, dt, rng);
        try {
            u = stepper.advance(u, noise, f_det);
        } catch (const NonFiniteState&) {
            traj.final_state = u;
            traj.steps = s;
            throw UnstableRunError(s + 1, t + dt, std::make_shared<const Trajectory>(std::move(traj)));
        }
        ++s;
        t = last ? cfg.t_end : (cfg.dt ? static_cast<double>(s) * fixed_dt : t + dt);

        const double grad = grad_l2_norm_sq(u);
        cumulative += cfg.nu * dt * (grad_prev + grad);
        grad_prev = grad;
        traj.step_times.push_back(t);
        traj.step_grad_sq.push_back(grad);

        if (s % static_cast<std::size_t>(cfg.record_every) == 0 || last) record(u);
        if ((cfg.snapshot_every > 0 && s % static_cast<std::size_t>(cfg.snapshot_every) == 0) || last) snapshot(u);
        if (last) break;
    }
    traj.final_state = std::move(u);
    traj.steps = s;
    return traj;
}

}  // namespace stochns
