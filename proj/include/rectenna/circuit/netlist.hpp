// netlist.hpp - flat circuit description consumed by the MNA solver
#pragma once

#include "rectenna/circuit/diode.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace rectenna::circuit {

/// Index into Netlist::node_names(). Node 0 is ground, named "0".
using NodeId = std::size_t;
inline constexpr NodeId kGround = 0;

enum class ComponentKind { resistor, capacitor, diode, dc_source, sine_source };

std::string_view to_string(ComponentKind kind);

/// v(t) = offset + amplitude * sin(2 pi f t + phase), behind series_resistance.
struct SineSpec {
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
    double series_resistance = 0.0;
    double offset = 0.0;
};

struct Component {
    ComponentKind kind;
    std::string name;
    NodeId pos;  // anode for diodes
    NodeId neg;  // cathode for diodes
    double value = 0.0;  // ohms, farads or volts
    SineSpec sine{};
    std::shared_ptr<const DiodeModel> diode;
};

class Netlist {
public:
    Netlist();

    /// Returns the id of `name`, declaring it on first use.
    NodeId node(std::string_view name);
    /// Throws StructuralError for an undeclared node.
    NodeId find_node(std::string_view name) const;
    bool has_node(std::string_view name) const;
    const std::string& node_name(NodeId id) const { return node_names_.at(id); }
    std::size_t node_count() const { return node_names_.size(); }
    const std::vector<std::string>& node_names() const { return node_names_; }

    void add_resistor(std::string name, std::string_view a, std::string_view b, double ohms);
    void add_capacitor(std::string name, std::string_view a, std::string_view b, double farads);
    void add_diode(std::string name, std::string_view anode, std::string_view cathode,
                   std::shared_ptr<const DiodeModel> model);
    void add_dc_source(std::string name, std::string_view pos, std::string_view neg, double volts);
    void add_sine_source(std::string name, std::string_view pos, std::string_view neg,
                         const SineSpec& spec);

    const std::vector<Component>& components() const { return components_; }
    const Component& component(std::string_view name) const;
    std::size_t count(ComponentKind kind) const;

    /// Diode models referenced by name (text format `.model` lines land here).
    void add_model(std::shared_ptr<const DiodeModel> model);
    std::shared_ptr<const DiodeModel> model(std::string_view name) const;
    const std::map<std::string, std::shared_ptr<const DiodeModel>, std::less<>>& models() const {
        return models_;
    }

    /// Checks the structural invariants: positive finite R and C values,
    /// valid diode models, unique component names, every node reachable
    /// from ground through some component. Throws ArgumentError or
    /// StructuralError.
    void validate() const;

private:
    void push(Component c);

    std::vector<std::string> node_names_;
    std::map<std::string, NodeId, std::less<>> node_index_;
    std::vector<Component> components_;
    std::map<std::string, std::shared_ptr<const DiodeModel>, std::less<>> models_;
};

}  // namespace rectenna::circuit
