// mna.hpp - stamped MNA system shared by the DC, transient and shooting
// solvers. Internal to the circuit library.
#pragma once

#include "rectenna/circuit/netlist.hpp"
#include "rectenna/circuit/solver.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace rectenna::circuit::detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Unknown index, or -1 for ground.
using Index = int;

struct Conductance {
    Index a, b;
    double g;
};

struct Capacitor {
    Index a, b;
    double c;
};

struct Junction {
    Index anode, cathode;
    const DiodeModel* model;
    double vcrit;
};

struct Source {
    Index pos, neg;
    int branch;  // row/column of the branch current unknown
    const Component* component;
};

/// Capacitor companion state: voltage across and current through each
/// capacitor (a -> b), in Netlist order followed by junction capacitances.
struct CapState {
    VectorXd voltage;
    VectorXd current;
};

enum class Mode { dc, backward_euler, trapezoidal };

struct NewtonResult {
    int iterations = 0;
    double max_residual = 0.0;
};

class Mna {
public:
    Mna(const Netlist& netlist, const SolverConfig& config);

    int size() const { return size_; }
    int capacitor_count() const { return static_cast<int>(caps_.size()); }
    const Netlist& netlist() const { return netlist_; }
    const SolverConfig& config() const { return config_; }
    /// Unknown index of a declared node (-1 for ground).
    Index unknown_of(NodeId node) const { return node_unknown_[node]; }
    const std::vector<Source>& sources() const { return sources_; }

    /// Declared nodes with no DC path to ground, for DC solves.
    void check_dc_paths() const;

    /// Solves F(x) = 0 in place. In transient modes `history` holds the
    /// companion current injection per capacitor and `dt` the step. When
    /// `jacobian_lu` is supplied it receives the factorized Jacobian at the
    /// converged point. Throws ConvergenceError.
    NewtonResult newton(VectorXd& x, double t, Mode mode, double dt, const VectorXd* history,
                        Eigen::PartialPivLU<MatrixXd>* jacobian_lu = nullptr) const;

    VectorXd capacitor_voltages(const VectorXd& x) const;
    /// Incidence of capacitor k: +1 at a, -1 at b (size x K).
    const MatrixXd& capacitor_incidence() const { return cap_incidence_; }
    VectorXd companion_conductance(Mode mode, double dt) const;

    /// Companion injection h = geq*v + i (trapezoidal) or geq*v (BE).
    VectorXd history(const CapState& s, Mode mode, double dt) const;
    /// Current through each capacitor after a step that produced x.
    CapState advance(const CapState& prev, const VectorXd& x, Mode mode, double dt) const;

    double source_value(const Source& s, double t, Mode mode) const;

private:
    const MatrixXd& linear_matrix(Mode mode, double dt) const;
    Index internal_or_node(NodeId n) const { return node_unknown_[n]; }

    const Netlist& netlist_;
    SolverConfig config_;
    int size_ = 0;
    std::vector<Index> node_unknown_;
    std::vector<Conductance> conductances_;
    std::vector<Capacitor> caps_;
    std::vector<Junction> junctions_;
    std::vector<Source> sources_;
    MatrixXd cap_incidence_;
    MatrixXd base_matrix_;  // resistors, gmin, source branches
    mutable MatrixXd cached_matrix_;
    mutable Mode cached_mode_ = Mode::dc;
    mutable double cached_dt_ = -1.0;
};

}  // namespace rectenna::circuit::detail
