#include "rectenna/circuit/netlist_io.hpp"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace rectenna::circuit {

namespace {

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

std::string strip_comment(std::string_view line) {
    return std::string(line.substr(0, line.find('#')));
}

double number_at(const std::vector<std::string>& tok, std::size_t i, int line_no) {
    auto v = try_parse_si(tok.at(i));
    if (!v)
        throw ArgumentError("line " + std::to_string(line_no) + ": bad number '" + tok[i] + "'");
    return *v;
}

DiodeModel model_from_tokens(const std::vector<std::string>& tok, int line_no) {
    if (tok.size() < 3 || upper(tok[2]) != "D")
        throw ArgumentError("line " + std::to_string(line_no) + ": expected '.model <name> D ...'");
    DiodeModel m;
    m.name = tok[1];
    for (std::size_t i = 3; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos)
            throw ArgumentError("line " + std::to_string(line_no) + ": expected KEY=value, got '" +
                                tok[i] + "'");
        const std::string key = upper(tok[i].substr(0, eq));
        auto v = try_parse_si(std::string_view(tok[i]).substr(eq + 1));
        if (!v) throw ArgumentError("line " + std::to_string(line_no) + ": bad number in '" + tok[i] + "'");
        if (key == "IS") m.saturation_current = *v;
        else if (key == "N") m.ideality = *v;
        else if (key == "RS") m.series_resistance = *v;
        else if (key == "CJO" || key == "CJ0") m.junction_capacitance = *v;
        else if (key == "VT") m.thermal_voltage = *v;
        else throw ArgumentError("line " + std::to_string(line_no) + ": unknown model key '" + key + "'");
    }
    m.validate();
    return m;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Netlist parse_netlist(std::string_view text) {
    struct Line {
        int no;
        std::vector<std::string> tok;
    };
    std::vector<Line> lines;
    {
        std::istringstream in{std::string(text)};
        std::string raw;
        int no = 0;
        while (std::getline(in, raw)) {
            ++no;
            auto tok = tokenize(strip_comment(raw));
            if (!tok.empty()) lines.push_back({no, std::move(tok)});
        }
    }

    Netlist net;
    // Models first so components may reference a model declared later.
    for (const auto& l : lines)
        if (upper(l.tok[0]) == ".MODEL")
            net.add_model(std::make_shared<const DiodeModel>(model_from_tokens(l.tok, l.no)));

    for (const auto& [no, tok] : lines) {
        const std::string kind = upper(tok[0]);
        if (kind == ".MODEL") continue;
        auto need = [&, no = no](std::size_t lo, std::size_t hi) {
            if (tok.size() < lo || tok.size() > hi)
                throw ArgumentError("line " + std::to_string(no) + ": wrong field count for " + kind);
        };
        if (kind == "R") {
            need(5, 5);
            net.add_resistor(tok[1], tok[2], tok[3], number_at(tok, 4, no));
        } else if (kind == "C") {
            need(5, 5);
            net.add_capacitor(tok[1], tok[2], tok[3], number_at(tok, 4, no));
        } else if (kind == "D") {
            need(5, 5);
            std::shared_ptr<const DiodeModel> m;
            try {
                m = net.model(tok[4]);
            } catch (const ArgumentError& e) {
                throw ArgumentError("line " + std::to_string(no) + ": " + e.what());
            }
            net.add_diode(tok[1], tok[2], tok[3], m);
        } else if (kind == "V") {
            need(5, 5);
            net.add_dc_source(tok[1], tok[2], tok[3], number_at(tok, 4, no));
        } else if (kind == "VSIN") {
            need(6, 9);
            SineSpec s;
            s.amplitude = number_at(tok, 4, no);
            s.frequency = number_at(tok, 5, no);
            if (tok.size() > 6) s.phase = number_at(tok, 6, no);
            if (tok.size() > 7) s.series_resistance = number_at(tok, 7, no);
            if (tok.size() > 8) s.offset = number_at(tok, 8, no);
            net.add_sine_source(tok[1], tok[2], tok[3], s);
        } else {
            throw ArgumentError("line " + std::to_string(no) + ": unknown component kind '" + tok[0] + "'");
        }
    }
    net.validate();
    return net;
}

Netlist read_netlist(const std::filesystem::path& path) { return parse_netlist(slurp(path)); }

DiodeModel parse_diode_model(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        auto tok = tokenize(strip_comment(raw));
        if (!tok.empty() && upper(tok[0]) == ".MODEL") return model_from_tokens(tok, no);
    }
    throw ArgumentError("no .model line found");
}

DiodeModel read_diode_model(const std::filesystem::path& path) {
    try {
        return parse_diode_model(slurp(path));
    } catch (const ArgumentError& e) {
        throw ArgumentError(path.string() + ": " + e.what());
    }
}

std::string format_diode_model(const DiodeModel& m) {
    return ".model " + m.name + " D IS=" + format_exact(m.saturation_current) +
           " N=" + format_exact(m.ideality) + " RS=" + format_exact(m.series_resistance) +
           " CJO=" + format_exact(m.junction_capacitance) + " VT=" + format_exact(m.thermal_voltage);
}

std::string write_netlist(const Netlist& netlist) {
    std::ostringstream out;
    for (const auto& [name, model] : netlist.models()) out << format_diode_model(*model) << '\n';
    for (const auto& c : netlist.components()) {
        const auto& a = netlist.node_name(c.pos);
        const auto& b = netlist.node_name(c.neg);
        switch (c.kind) {
        case ComponentKind::resistor:
            out << "R " << c.name << ' ' << a << ' ' << b << ' ' << format_exact(c.value);
            break;
        case ComponentKind::capacitor:
            out << "C " << c.name << ' ' << a << ' ' << b << ' ' << format_exact(c.value);
            break;
        case ComponentKind::diode:
            out << "D " << c.name << ' ' << a << ' ' << b << ' ' << c.diode->name;
            break;
        case ComponentKind::dc_source:
            out << "V " << c.name << ' ' << a << ' ' << b << ' ' << format_exact(c.value);
            break;
        case ComponentKind::sine_source:
            out << "VSIN " << c.name << ' ' << a << ' ' << b << ' ' << format_exact(c.sine.amplitude)
                << ' ' << format_exact(c.sine.frequency) << ' ' << format_exact(c.sine.phase) << ' '
                << format_exact(c.sine.series_resistance) << ' ' << format_exact(c.sine.offset);
            break;
        }
        out << '\n';
    }
    return out.str();
}

void write_waveform_csv(std::ostream& out, const Waveform& wf) {
    out << "time_s";
    for (const auto& n : wf.node_names) out << ",node_" << n << "_V";
    for (const auto& s : wf.source_names) out << ",src_" << s << "_A";
    out << '\n';
    for (std::size_t k = 0; k < wf.size(); ++k) {
        out << format_number(wf.time(k));
        for (const auto& v : wf.node_voltages) out << ',' << format_number(v[k]);
        for (const auto& i : wf.source_currents) out << ',' << format_number(i[k]);
        out << '\n';
    }
}

}  // namespace rectenna::circuit
