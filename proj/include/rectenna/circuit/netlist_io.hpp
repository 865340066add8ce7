// netlist_io.hpp - netlist text format and waveform CSV
//
// One component per line:
//
//   R    name n+ n- ohms
//   C    name n+ n- farads
//   D    name anode cathode model
//   V    name n+ n- volts
//   VSIN name n+ n- amplitude frequency [phase [series_resistance [offset]]]
//   .model name D IS=.. N=.. RS=.. CJO=.. VT=..
//
// '#' starts a comment, numbers take SI suffixes (f p n u m k M G), node
// "0" is ground.
#pragma once

#include "rectenna/circuit/netlist.hpp"
#include "rectenna/circuit/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace rectenna::circuit {

/// Throws ArgumentError with the 1-based line number on malformed input.
Netlist parse_netlist(std::string_view text);
Netlist read_netlist(const std::filesystem::path& path);

/// Parses the first `.model` line of a model file (e.g. data/sms7621.model).
DiodeModel parse_diode_model(std::string_view text);
DiodeModel read_diode_model(const std::filesystem::path& path);
std::string format_diode_model(const DiodeModel& model);

/// Serializes in the text format above; parse_netlist(write_netlist(n))
/// reproduces n exactly.
std::string write_netlist(const Netlist& netlist);

/// `time_s,node_<id>_V,...,src_<name>_A` header, one row per sample.
void write_waveform_csv(std::ostream& out, const Waveform& waveform);

}  // namespace rectenna::circuit
