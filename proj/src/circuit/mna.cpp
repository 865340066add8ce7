#include "mna.hpp"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <cmath>
#include <numeric>

namespace rectenna::circuit::detail {

namespace {

void stamp_conductance(MatrixXd& m, Index a, Index b, double g) {
    if (a >= 0) m(a, a) += g;
    if (b >= 0) m(b, b) += g;
    if (a >= 0 && b >= 0) {
        m(a, b) -= g;
        m(b, a) -= g;
    }
}

double at(const VectorXd& x, Index i) { return i >= 0 ? x[i] : 0.0; }

}  // namespace

Mna::Mna(const Netlist& netlist, const SolverConfig& config)
    : netlist_(netlist), config_(config) {
    netlist.validate();

    node_unknown_.assign(netlist.node_count(), -1);
    int next = 0;
    for (NodeId n = 1; n < netlist.node_count(); ++n) node_unknown_[n] = next++;

    for (const auto& c : netlist.components()) {
        const Index a = node_unknown_[c.pos];
        const Index b = node_unknown_[c.neg];
        switch (c.kind) {
        case ComponentKind::resistor:
            conductances_.push_back({a, b, 1.0 / c.value});
            break;
        case ComponentKind::capacitor:
            caps_.push_back({a, b, c.value});
            break;
        case ComponentKind::diode: {
            const DiodeModel& m = *c.diode;
            Index junction_anode = a;
            if (m.series_resistance > 0.0) {
                junction_anode = next++;
                conductances_.push_back({a, junction_anode, 1.0 / m.series_resistance});
            }
            junctions_.push_back({junction_anode, b, &m, critical_voltage(m)});
            if (config_.gmin > 0.0) conductances_.push_back({junction_anode, b, config_.gmin});
            break;
        }
        case ComponentKind::dc_source:
        case ComponentKind::sine_source:
            sources_.push_back({a, b, -1, &c});
            break;
        }
    }
    // Junction capacitances follow the explicit capacitors.
    for (const auto& j : junctions_)
        if (j.model->junction_capacitance > 0.0)
            caps_.push_back({j.anode, j.cathode, j.model->junction_capacitance});

    for (auto& s : sources_) s.branch = next++;
    size_ = next;

    base_matrix_ = MatrixXd::Zero(size_, size_);
    for (const auto& g : conductances_) stamp_conductance(base_matrix_, g.a, g.b, g.g);
    for (const auto& s : sources_) {
        const int k = s.branch;
        if (s.pos >= 0) {
            base_matrix_(s.pos, k) += 1.0;
            base_matrix_(k, s.pos) += 1.0;
        }
        if (s.neg >= 0) {
            base_matrix_(s.neg, k) -= 1.0;
            base_matrix_(k, s.neg) -= 1.0;
        }
        if (s.component->kind == ComponentKind::sine_source)
            base_matrix_(k, k) -= s.component->sine.series_resistance;
    }

    cap_incidence_ = MatrixXd::Zero(size_, static_cast<int>(caps_.size()));
    for (int k = 0; k < static_cast<int>(caps_.size()); ++k) {
        if (caps_[k].a >= 0) cap_incidence_(caps_[k].a, k) = 1.0;
        if (caps_[k].b >= 0) cap_incidence_(caps_[k].b, k) = -1.0;
    }
}

void Mna::check_dc_paths() const {
    // Union-find over DC-conducting branches: resistors, diodes (gmin or
    // series path) and sources. Capacitors are open.
    const int nodes = static_cast<int>(netlist_.node_count());
    std::vector<int> parent(nodes);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (const auto& c : netlist_.components())
        if (c.kind != ComponentKind::capacitor)
            parent[root(static_cast<int>(c.pos))] = root(static_cast<int>(c.neg));
    for (int n = 1; n < nodes; ++n)
        if (root(n) != root(0)) {
            const auto& name = netlist_.node_name(static_cast<NodeId>(n));
            throw StructuralError("singular MNA matrix: node '" + name +
                                      "' has no DC path to ground",
                                  name);
        }
}

VectorXd Mna::companion_conductance(Mode mode, double dt) const {
    VectorXd g(caps_.size());
    const double scale = mode == Mode::trapezoidal ? 2.0 / dt : 1.0 / dt;
    for (std::size_t k = 0; k < caps_.size(); ++k)
        g[static_cast<int>(k)] = mode == Mode::dc ? 0.0 : scale * caps_[k].c;
    return g;
}

const MatrixXd& Mna::linear_matrix(Mode mode, double dt) const {
    if (mode == Mode::dc) return base_matrix_;
    if (cached_mode_ == mode && cached_dt_ == dt && cached_matrix_.size() > 0) return cached_matrix_;
    cached_matrix_ = base_matrix_;
    const VectorXd g = companion_conductance(mode, dt);
    for (std::size_t k = 0; k < caps_.size(); ++k)
        stamp_conductance(cached_matrix_, caps_[k].a, caps_[k].b, g[static_cast<int>(k)]);
    cached_mode_ = mode;
    cached_dt_ = dt;
    return cached_matrix_;
}

double Mna::source_value(const Source& s, double t, Mode mode) const {
    const Component& c = *s.component;
    if (c.kind == ComponentKind::dc_source) return c.value;
    if (mode == Mode::dc) return c.sine.offset;
    return c.sine.offset + c.sine.amplitude * std::sin(2.0 * kPi * c.sine.frequency * t + c.sine.phase);
}

VectorXd Mna::capacitor_voltages(const VectorXd& x) const {
    VectorXd v(caps_.size());
    for (std::size_t k = 0; k < caps_.size(); ++k)
        v[static_cast<int>(k)] = at(x, caps_[k].a) - at(x, caps_[k].b);
    return v;
}

VectorXd Mna::history(const CapState& s, Mode mode, double dt) const {
    const VectorXd g = companion_conductance(mode, dt);
    VectorXd h = g.cwiseProduct(s.voltage);
    if (mode == Mode::trapezoidal) h += s.current;
    return h;
}

CapState Mna::advance(const CapState& prev, const VectorXd& x, Mode mode, double dt) const {
    CapState next;
    next.voltage = capacitor_voltages(x);
    next.current = companion_conductance(mode, dt).cwiseProduct(next.voltage) - history(prev, mode, dt);
    return next;
}

NewtonResult Mna::newton(VectorXd& x, double t, Mode mode, double dt, const VectorXd* history,
                         Eigen::PartialPivLU<MatrixXd>* jacobian_lu) const {
    const MatrixXd& linear = linear_matrix(mode, dt);
    const int n_nodes = size_ - static_cast<int>(sources_.size());

    VectorXd rhs = VectorXd::Zero(size_);
    for (const auto& s : sources_) rhs[s.branch] = source_value(s, t, mode);
    if (mode != Mode::dc && history != nullptr && history->size() > 0) rhs += cap_incidence_ * *history;

    MatrixXd jac(size_, size_);
    VectorXd residual(size_);
    VectorXd step = VectorXd::Zero(size_);
    bool have_step = false;
    NewtonResult result;

    for (int it = 0; it <= config_.max_iterations; ++it) {
        jac = linear;
        residual.noalias() = linear * x - rhs;
        for (const auto& j : junctions_) {
            const double v = at(x, j.anode) - at(x, j.cathode);
            const double i = diode_current(*j.model, v);
            const double g = diode_conductance(*j.model, v);
            if (j.anode >= 0) residual[j.anode] += i;
            if (j.cathode >= 0) residual[j.cathode] -= i;
            stamp_conductance(jac, j.anode, j.cathode, g);
        }

        double max_residual = 0.0;
        for (int r = 0; r < size_; ++r) {
            if (!std::isfinite(residual[r]))
                throw ConvergenceError("non-finite residual in Newton iteration", residual[r], t);
            max_residual = std::max(max_residual, std::abs(residual[r]));
        }
        result.max_residual = max_residual;
        result.iterations = it;

        bool step_small = have_step;
        if (have_step) {
            for (int r = 0; r < size_; ++r) {
                const double floor = r < n_nodes ? config_.voltage_abstol : config_.current_tolerance;
                if (std::abs(step[r]) > config_.voltage_reltol * std::abs(x[r]) + floor) {
                    step_small = false;
                    break;
                }
            }
        }
        // A linear circuit converges in one full step; the residual test alone decides.
        const bool linear_circuit = junctions_.empty() && it > 0;
        if (max_residual <= config_.current_tolerance && (step_small || linear_circuit)) {
            if (jacobian_lu != nullptr) jacobian_lu->compute(jac);
            return result;
        }
        if (it == config_.max_iterations) break;

        Eigen::PartialPivLU<MatrixXd> lu(jac);
        step = lu.solve(-residual);
        if (!step.allFinite())
            throw StructuralError("singular MNA matrix", "");

        // Damp forward-biased junction updates to 2 n Vt per iteration.
        double alpha = 1.0;
        for (const auto& j : junctions_) {
            const double v_old = at(x, j.anode) - at(x, j.cathode);
            const double dv = at(step, j.anode) - at(step, j.cathode);
            const double limit = std::max(v_old, j.vcrit) + 2.0 * j.model->emission_voltage();
            if (v_old + dv > limit) alpha = std::min(alpha, (limit - v_old) / dv);
        }
        step *= alpha;
        x += step;
        have_step = true;
    }
    throw ConvergenceError("Newton iteration did not converge after " +
                               std::to_string(config_.max_iterations) +
                               " iterations (last residual " + format_number(result.max_residual) +
                               " A)",
                           result.max_residual, t);
}

}  // namespace rectenna::circuit::detail
