#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lna/errors.hpp"
#include "lna/util.hpp"

namespace lna {

using NodeId = int; // 0 is ground

struct Resistor {
    NodeId a, b;
    double ohms;
};

struct Capacitor {
    NodeId a, b;
    double farads;
};

/// Inductor with optional losses: a fixed series resistance plus, when q > 0,
/// a frequency-dependent series term omega*L/q evaluated at each analysis
/// frequency.
struct Inductor {
    NodeId a, b;
    double henries;
    double loss_ohms = 0.0;
    double q = 0.0; // 0 disables the omega*L/q term
};

/// Voltage-controlled current source: current g*(v(cp)-v(cm)) flows from
/// out_p through the source to out_m.
struct Vccs {
    NodeId cp, cm;
    NodeId out_p, out_m;
    double siemens;
};

/// MOS small-signal stamp: gm (gate-source controlled, drain-source output),
/// gds, cgs, cgd, plus the channel-noise coefficient gamma for 4kT*gamma*gm.
struct MosStamp {
    NodeId gate, source, drain;
    double gm, gds, cgs, cgd;
    double gamma = 1.0;
};

/// Explicit noise current source: one-sided spectral density in A^2/Hz
/// between two nodes, tagged with its physical origin. Inert in ordinary AC
/// analysis; contributes only to noise_figure().
struct NoiseSource {
    NodeId a, b;
    double density; // A^2/Hz
    std::string tag;
};

using Element = std::variant<Resistor, Capacitor, Inductor, Vccs, MosStamp, NoiseSource>;

struct Port {
    NodeId node;
    double z0; // ohms, real and strictly positive
};

/// Linear RF network: named nodes with a distinguished ground (id 0),
/// elements, and ordered ports. Value-like; safe to copy between threads.
class Netlist {
public:
    Netlist();

    /// Returns the id for a named node, creating it on first use.
    /// "0", "gnd" and "GND" all map to ground.
    NodeId node(const std::string& name);
    NodeId ground() const { return 0; }

    /// Number of nodes including ground.
    std::size_t node_count() const { return names_.size(); }
    const std::string& node_name(NodeId id) const { return names_.at(static_cast<std::size_t>(id)); }

    void add_resistor(NodeId a, NodeId b, double ohms);
    void add_capacitor(NodeId a, NodeId b, double farads);
    void add_inductor(NodeId a, NodeId b, double henries, double loss_ohms = 0.0, double q = 0.0);
    void add_vccs(NodeId cp, NodeId cm, NodeId out_p, NodeId out_m, double siemens);
    void add_mos(NodeId gate, NodeId source, NodeId drain, double gm, double gds,
                 double cgs, double cgd, double gamma = 1.0);
    void add_noise(NodeId a, NodeId b, double density_a2_per_hz, const std::string& tag);

    /// Declares a port (analysis reference plane) at a node.
    int add_port(NodeId node, double z0);

    /// Marks which port's reference resistance is the noise-figure source.
    void set_source_noise_port(int port);
    std::optional<int> source_noise_port() const { return source_noise_port_; }

    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<Port>& ports() const { return ports_; }

    /// Serializes to the JSON document schema (nodes, elements, ports).
    std::string to_json() const;
    static Netlist from_json_text(const std::string& text);
    static Netlist from_json_file(const std::string& path);

private:
    void check_node(NodeId id, const char* what) const;

    std::vector<std::string> names_; // index = NodeId
    std::vector<Element> elements_;
    std::vector<Port> ports_;
    std::optional<int> source_noise_port_;
};

} // namespace lna
