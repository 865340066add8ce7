#include "rectenna/circuit/netlist.hpp"

#include "rectenna/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace rectenna::circuit {

std::string_view to_string(ComponentKind kind) {
    switch (kind) {
    case ComponentKind::resistor: return "resistor";
    case ComponentKind::capacitor: return "capacitor";
    case ComponentKind::diode: return "diode";
    case ComponentKind::dc_source: return "dc_source";
    case ComponentKind::sine_source: return "sine_source";
    }
    return "?";
}

Netlist::Netlist() { node("0"); }

NodeId Netlist::node(std::string_view name) {
    if (name.empty()) throw ArgumentError("empty node name");
    if (auto it = node_index_.find(name); it != node_index_.end()) return it->second;
    const NodeId id = node_names_.size();
    node_names_.emplace_back(name);
    node_index_.emplace(std::string(name), id);
    return id;
}

NodeId Netlist::find_node(std::string_view name) const {
    auto it = node_index_.find(name);
    if (it == node_index_.end())
        throw StructuralError("undeclared node '" + std::string(name) + "'", std::string(name));
    return it->second;
}

bool Netlist::has_node(std::string_view name) const { return node_index_.contains(name); }

void Netlist::push(Component c) {
    if (c.name.empty()) throw ArgumentError("component without a name");
    components_.push_back(std::move(c));
}

void Netlist::add_resistor(std::string name, std::string_view a, std::string_view b, double ohms) {
    push({ComponentKind::resistor, std::move(name), node(a), node(b), ohms, {}, nullptr});
}

void Netlist::add_capacitor(std::string name, std::string_view a, std::string_view b,
                            double farads) {
    push({ComponentKind::capacitor, std::move(name), node(a), node(b), farads, {}, nullptr});
}

void Netlist::add_diode(std::string name, std::string_view anode, std::string_view cathode,
                        std::shared_ptr<const DiodeModel> model) {
    if (!model) throw ArgumentError("diode '" + name + "' has no model");
    if (!models_.contains(model->name)) models_.emplace(model->name, model);
    push({ComponentKind::diode, std::move(name), node(anode), node(cathode), 0.0, {},
          std::move(model)});
}

void Netlist::add_dc_source(std::string name, std::string_view pos, std::string_view neg,
                            double volts) {
    push({ComponentKind::dc_source, std::move(name), node(pos), node(neg), volts, {}, nullptr});
}

void Netlist::add_sine_source(std::string name, std::string_view pos, std::string_view neg,
                              const SineSpec& spec) {
    push({ComponentKind::sine_source, std::move(name), node(pos), node(neg), 0.0, spec, nullptr});
}

const Component& Netlist::component(std::string_view name) const {
    auto it = std::find_if(components_.begin(), components_.end(),
                           [&](const Component& c) { return c.name == name; });
    if (it == components_.end())
        throw ArgumentError("no component named '" + std::string(name) + "'");
    return *it;
}

std::size_t Netlist::count(ComponentKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        components_.begin(), components_.end(), [kind](const Component& c) { return c.kind == kind; }));
}

void Netlist::add_model(std::shared_ptr<const DiodeModel> model) {
    if (!model) throw ArgumentError("null diode model");
    models_[model->name] = std::move(model);
}

std::shared_ptr<const DiodeModel> Netlist::model(std::string_view name) const {
    auto it = models_.find(name);
    if (it == models_.end()) throw ArgumentError("unknown diode model '" + std::string(name) + "'");
    return it->second;
}

void Netlist::validate() const {
    std::set<std::string, std::less<>> names;
    for (const auto& c : components_) {
        if (!names.insert(c.name).second)
            throw ArgumentError("duplicate component name '" + c.name + "'");
        if (c.pos >= node_count() || c.neg >= node_count())
            throw StructuralError(c.name + " references an undeclared node", c.name);
        switch (c.kind) {
        case ComponentKind::resistor:
        case ComponentKind::capacitor:
            if (!(c.value > 0.0) || !std::isfinite(c.value))
                throw ArgumentError(std::string(to_string(c.kind)) + " '" + c.name +
                                    "' must have a positive finite value");
            break;
        case ComponentKind::diode:
            c.diode->validate();
            break;
        case ComponentKind::dc_source:
            if (!std::isfinite(c.value)) throw ArgumentError("source '" + c.name + "' is not finite");
            break;
        case ComponentKind::sine_source: {
            const auto& s = c.sine;
            if (!std::isfinite(s.amplitude) || !std::isfinite(s.phase) || !std::isfinite(s.offset))
                throw ArgumentError("source '" + c.name + "' is not finite");
            if (!(s.frequency > 0.0) || !std::isfinite(s.frequency))
                throw ArgumentError("source '" + c.name + "' needs a positive frequency");
            if (!(s.series_resistance >= 0.0) || !std::isfinite(s.series_resistance))
                throw ArgumentError("source '" + c.name + "' needs series_resistance >= 0");
            break;
        }
        }
    }

    // Union-find over component edges: every node must share a set with ground.
    std::vector<std::size_t> parent(node_count());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto root = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (const auto& c : components_) parent[root(c.pos)] = root(c.neg);
    for (NodeId n = 1; n < node_count(); ++n)
        if (root(n) != root(kGround))
            throw StructuralError("node '" + node_names_[n] + "' is not connected to ground",
                                  node_names_[n]);
}

}  // namespace rectenna::circuit
