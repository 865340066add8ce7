#include "rectenna/circuit/solver.hpp"

#include "mna.hpp"
#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rectenna::circuit {

using detail::CapState;
using detail::MatrixXd;
using detail::Mna;
using detail::Mode;
using detail::VectorXd;

double DcSolution::voltage(std::string_view node) const {
    auto it = node_voltages.find(node);
    if (it == node_voltages.end()) throw ArgumentError("no node '" + std::string(node) + "'");
    return it->second;
}

std::vector<double> Waveform::voltage(std::string_view node) const {
    if (node == "0") return std::vector<double>(size(), 0.0);
    auto it = std::find(node_names.begin(), node_names.end(), node);
    if (it == node_names.end()) throw ArgumentError("waveform has no node '" + std::string(node) + "'");
    return node_voltages[static_cast<std::size_t>(it - node_names.begin())];
}

const std::vector<double>& Waveform::current(std::string_view source) const {
    auto it = std::find(source_names.begin(), source_names.end(), source);
    if (it == source_names.end())
        throw ArgumentError("waveform has no source '" + std::string(source) + "'");
    return source_currents[static_cast<std::size_t>(it - source_names.begin())];
}

DcSolution solve_dc(const Netlist& netlist, const SolverConfig& config) {
    Mna mna(netlist, config);
    mna.check_dc_paths();
    VectorXd x = VectorXd::Zero(mna.size());
    const auto nr = mna.newton(x, 0.0, Mode::dc, 0.0, nullptr);

    DcSolution out;
    out.iterations = nr.iterations;
    out.max_residual = nr.max_residual;
    for (NodeId n = 0; n < netlist.node_count(); ++n) {
        const auto u = mna.unknown_of(n);
        out.node_voltages[netlist.node_name(n)] = u >= 0 ? x[u] : 0.0;
    }
    for (const auto& s : mna.sources()) out.source_currents[s.component->name] = x[s.branch];
    return out;
}

namespace {

class Recorder {
public:
    Recorder(const Mna& mna, double dt, std::size_t reserve) : mna_(mna) {
        wf_.dt = dt;
        const auto& nl = mna.netlist();
        for (NodeId n = 1; n < nl.node_count(); ++n) wf_.node_names.push_back(nl.node_name(n));
        wf_.node_voltages.resize(wf_.node_names.size());
        for (auto& v : wf_.node_voltages) v.reserve(reserve);
        for (const auto& s : mna.sources()) wf_.source_names.push_back(s.component->name);
        wf_.source_currents.resize(wf_.source_names.size());
        for (auto& v : wf_.source_currents) v.reserve(reserve);
    }

    void record(const VectorXd& x) {
        for (std::size_t k = 0; k < wf_.node_voltages.size(); ++k)
            wf_.node_voltages[k].push_back(x[mna_.unknown_of(static_cast<NodeId>(k + 1))]);
        for (std::size_t k = 0; k < wf_.source_currents.size(); ++k)
            wf_.source_currents[k].push_back(x[mna_.sources()[k].branch]);
    }

    Waveform take() { return std::move(wf_); }

private:
    const Mna& mna_;
    Waveform wf_;
};

Mode rule_mode(const SolverConfig& config) {
    return config.integration == IntegrationRule::trapezoidal ? Mode::trapezoidal
                                                              : Mode::backward_euler;
}

void check_step_size(const Netlist& netlist, double dt) {
    for (const auto& c : netlist.components()) {
        if (c.kind != ComponentKind::sine_source) continue;
        const double period = 1.0 / c.sine.frequency;
        if (dt > period / 50.0 * (1.0 + 1e-12))
            throw ArgumentError("dt " + format_number(dt) + " s exceeds period/50 of source '" +
                                c.name + "'");
    }
}

}  // namespace

Waveform run_transient(const Netlist& netlist, double dt, double t_end, const SolverConfig& config,
                       InitialState initial) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("dt must be positive");
    if (!(t_end >= dt) || !std::isfinite(t_end)) throw ArgumentError("t_end must be >= dt");
    Mna mna(netlist, config);
    check_step_size(netlist, dt);

    VectorXd x = VectorXd::Zero(mna.size());
    if (initial == InitialState::dc_operating_point) {
        mna.check_dc_paths();
        mna.newton(x, 0.0, Mode::dc, 0.0, nullptr);
    }
    CapState state{mna.capacitor_voltages(x), VectorXd::Zero(mna.capacitor_count())};

    const auto steps = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
    Recorder rec(mna, dt, steps + 1);
    rec.record(x);
    const Mode rule = rule_mode(config);
    for (std::size_t k = 1; k <= steps; ++k) {
        const Mode mode = k == 1 ? Mode::backward_euler : rule;
        const double t = static_cast<double>(k) * dt;
        const VectorXd h = mna.history(state, mode, dt);
        try {
            mna.newton(x, t, mode, dt, &h);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("transient step failed at t = " + format_number(t) + " s: " + e.what(),
                                   e.residual(), t);
        }
        state = mna.advance(state, x, mode, dt);
        rec.record(x);
    }
    return rec.take();
}

SteadyState extract_steady_state(std::span<const double> samples, double dt, double period) {
    if (!(dt > 0.0) || !(period > 0.0)) throw ArgumentError("dt and period must be positive");
    const auto per = static_cast<std::size_t>(std::llround(period / dt));
    if (per == 0) throw ArgumentError("period shorter than one sample");
    if (samples.size() < 3 * per + 1)
        throw ArgumentError("waveform spans fewer than 3 periods");

    const auto mean_of = [&](std::size_t begin) {
        double sum = 0.0;
        for (std::size_t k = begin; k < begin + per; ++k) sum += samples[k];
        return sum / static_cast<double>(per);
    };
    const std::size_t last = samples.size() - per;
    const std::size_t prev = last - per;

    SteadyState out;
    out.dc = mean_of(last);
    const auto [lo, hi] = std::minmax_element(samples.begin() + static_cast<std::ptrdiff_t>(last), samples.end());
    out.ripple = *hi - *lo;
    const double prev_dc = mean_of(prev);
    const double scale = std::max(std::abs(out.dc), std::abs(prev_dc));
    // 1e-12 V floor so a zero-mean signal with rounding noise still counts as settled
    out.settled = std::abs(out.dc - prev_dc) <= kSettleTolerance * scale + 1e-12;
    return out;
}

SteadyState extract_steady_state(const Waveform& waveform, std::string_view node, double period) {
    const auto v = waveform.voltage(node);
    return extract_steady_state(v, waveform.dt, period);
}

namespace {

struct PeriodMap {
    CapState end;
    VectorXd x_end;
    MatrixXd monodromy;  // d(end state)/d(start state), 2K x 2K
};

/// Integrates one period with the trapezoidal rule from a consistent
/// capacitor state, optionally propagating the state sensitivity.
PeriodMap integrate_period(const Mna& mna, const CapState& start, VectorXd x, int steps, double dt,
                           bool sensitivity, Recorder* rec) {
    const int k_caps = mna.capacitor_count();
    const VectorXd g = mna.companion_conductance(Mode::trapezoidal, dt);
    const MatrixXd& incidence = mna.capacitor_incidence();

    PeriodMap out;
    if (sensitivity) out.monodromy = MatrixXd::Identity(2 * k_caps, 2 * k_caps);
    CapState state = start;
    Eigen::PartialPivLU<MatrixXd> lu;
    MatrixXd step_map(2 * k_caps, 2 * k_caps);

    for (int k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const VectorXd h = mna.history(state, Mode::trapezoidal, dt);
        mna.newton(x, t, Mode::trapezoidal, dt, &h, sensitivity ? &lu : nullptr);
        state = mna.advance(state, x, Mode::trapezoidal, dt);
        if (rec != nullptr) rec->record(x);
        if (!sensitivity) continue;

        // W = D^T J^-1 D; per step [[W G, W], [G W G - G, G W - I]].
        const MatrixXd w = incidence.transpose() * lu.solve(incidence);
        const MatrixXd wg = w * g.asDiagonal();
        step_map.topLeftCorner(k_caps, k_caps) = wg;
        step_map.topRightCorner(k_caps, k_caps) = w;
        step_map.bottomLeftCorner(k_caps, k_caps) = g.asDiagonal() * wg;
        step_map.bottomLeftCorner(k_caps, k_caps) -= MatrixXd(g.asDiagonal());
        step_map.bottomRightCorner(k_caps, k_caps) = g.asDiagonal() * w;
        step_map.bottomRightCorner(k_caps, k_caps) -= MatrixXd::Identity(k_caps, k_caps);
        out.monodromy = step_map * out.monodromy;
    }
    out.end = std::move(state);
    out.x_end = std::move(x);
    return out;
}

VectorXd stack(const CapState& s) {
    VectorXd v(s.voltage.size() + s.current.size());
    v << s.voltage, s.current;
    return v;
}

CapState unstack(const VectorXd& v) {
    const auto k = v.size() / 2;
    return {v.head(k), v.tail(k)};
}

/// Largest period-map mismatch relative to per-quantity tolerances.
double shooting_error(const VectorXd& mismatch, const CapState& scale_from, const SolverConfig& config) {
    const auto k = mismatch.size() / 2;
    const double v_scale = scale_from.voltage.size() ? scale_from.voltage.cwiseAbs().maxCoeff() : 0.0;
    const double i_scale = scale_from.current.size() ? scale_from.current.cwiseAbs().maxCoeff() : 0.0;
    const double v_tol = config.voltage_reltol * v_scale + config.voltage_abstol;
    const double i_tol = config.voltage_reltol * i_scale + config.current_tolerance;
    double err = 0.0;
    for (Eigen::Index r = 0; r < mismatch.size(); ++r)
        err = std::max(err, std::abs(mismatch[r]) / (r < k ? v_tol : i_tol));
    return err;
}

}  // namespace

PeriodicResult solve_periodic(const Netlist& netlist, double frequency, const PeriodicOptions& options,
                              const SolverConfig& config) {
    if (!(frequency > 0.0)) throw ArgumentError("frequency must be positive");
    if (options.samples_per_period < 50)
        throw ArgumentError("samples_per_period must be >= 50");
    if (options.verify_periods < 3) throw ArgumentError("verify_periods must be >= 3");

    SolverConfig cfg = config;
    cfg.integration = IntegrationRule::trapezoidal;
    Mna mna(netlist, cfg);
    const double period = 1.0 / frequency;
    const int steps = options.samples_per_period;
    const double dt = period / steps;
    check_step_size(netlist, dt);

    PeriodicResult result;
    result.period = period;

    // Warm-up from rest: one backward-Euler step, then trapezoidal.
    VectorXd x = VectorXd::Zero(mna.size());
    CapState state{VectorXd::Zero(mna.capacitor_count()), VectorXd::Zero(mna.capacitor_count())};
    {
        const VectorXd h = mna.history(state, Mode::backward_euler, dt);
        mna.newton(x, dt, Mode::backward_euler, dt, &h);
        state = mna.advance(state, x, Mode::backward_euler, dt);
        // Finish the first period from t = dt.
        for (int k = 2; k <= steps; ++k) {
            const double t = static_cast<double>(k) * dt;
            const VectorXd hh = mna.history(state, Mode::trapezoidal, dt);
            mna.newton(x, t, Mode::trapezoidal, dt, &hh);
            state = mna.advance(state, x, Mode::trapezoidal, dt);
        }
        result.transient_periods = 1;
    }
    for (int p = 1; p < options.warmup_periods; ++p) {
        auto pm = integrate_period(mna, state, x, steps, dt, false, nullptr);
        state = std::move(pm.end);
        x = std::move(pm.x_end);
        ++result.transient_periods;
    }

    // Newton shooting with backtracking on the scaled period mismatch.
    if (mna.capacitor_count() > 0) {
        const auto dim = 2 * mna.capacitor_count();
        for (int it = 0; it < options.max_shooting_iterations; ++it) {
            auto pm = integrate_period(mna, state, x, steps, dt, true, nullptr);
            ++result.transient_periods;
            const VectorXd s0 = stack(state);
            const VectorXd mismatch = stack(pm.end) - s0;
            const double err = shooting_error(mismatch, pm.end, cfg);
            result.shooting_iterations = it + 1;
            const MatrixXd lhs = pm.monodromy - MatrixXd::Identity(dim, dim);
            const VectorXd delta = lhs.partialPivLu().solve(-mismatch);
            if (!delta.allFinite()) break;
            // Slow modes (load RC spanning many periods) leave a tiny
            // per-period mismatch far from the orbit, so the Newton
            // correction must be small as well.
            if (err <= 1.0 && shooting_error(delta, pm.end, cfg) <= 1.0) {
                state = std::move(pm.end);
                x = std::move(pm.x_end);
                result.shooting_converged = true;
                break;
            }

            double lambda = 1.0;
            bool accepted = false;
            for (int bt = 0; bt < 8; ++bt, lambda *= 0.5) {
                const CapState trial = unstack(s0 + lambda * delta);
                try {
                    auto tm = integrate_period(mna, trial, pm.x_end, steps, dt, false, nullptr);
                    ++result.transient_periods;
                    const double trial_err = shooting_error(stack(tm.end) - stack(trial), tm.end, cfg);
                    if (trial_err < err || bt == 7) {
                        state = trial;
                        x = pm.x_end;
                        accepted = true;
                        break;
                    }
                } catch (const ConvergenceError&) {
                    // shrink and retry
                }
            }
            if (!accepted) {
                // Fall back to the plain period map end state.
                state = std::move(pm.end);
                x = std::move(pm.x_end);
            }
        }
    } else {
        result.shooting_converged = true;
    }

    // Plain transient fallback: iterate the period map until the period
    // means of every node settle.
    if (!result.shooting_converged) {
        VectorXd prev_mean;
        for (int p = result.transient_periods; p < options.max_periods; ++p) {
            Recorder rec(mna, dt, static_cast<std::size_t>(steps));
            auto pm = integrate_period(mna, state, x, steps, dt, false, &rec);
            ++result.transient_periods;
            state = std::move(pm.end);
            x = std::move(pm.x_end);
            const Waveform wf = rec.take();
            VectorXd mean(static_cast<Eigen::Index>(wf.node_voltages.size()));
            for (std::size_t n = 0; n < wf.node_voltages.size(); ++n)
                mean[static_cast<Eigen::Index>(n)] =
                    std::accumulate(wf.node_voltages[n].begin(), wf.node_voltages[n].end(), 0.0) / steps;
            if (prev_mean.size() == mean.size()) {
                const double scale = std::max(mean.cwiseAbs().maxCoeff(), prev_mean.cwiseAbs().maxCoeff());
                if ((mean - prev_mean).cwiseAbs().maxCoeff() <= 0.1 * kSettleTolerance * scale + 1e-12)
                    break;
            }
            prev_mean = std::move(mean);
        }
    }

    Recorder rec(mna, dt, static_cast<std::size_t>(steps * options.verify_periods + 1));
    rec.record(x);
    for (int p = 0; p < options.verify_periods; ++p) {
        auto pm = integrate_period(mna, state, x, steps, dt, false, &rec);
        state = std::move(pm.end);
        x = std::move(pm.x_end);
        ++result.transient_periods;
    }
    result.waveform = rec.take();
    return result;
}

}  // namespace rectenna::circuit
