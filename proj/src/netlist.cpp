#include "lna/netlist.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace lna {

Netlist::Netlist() { names_.push_back("0"); }

NodeId Netlist::node(const std::string& name) {
    if (name == "0" || name == "gnd" || name == "GND")
        return 0;
    for (std::size_t i = 1; i < names_.size(); ++i)
        if (names_[i] == name)
            return static_cast<NodeId>(i);
    names_.push_back(name);
    return static_cast<NodeId>(names_.size() - 1);
}

void Netlist::check_node(NodeId id, const char* what) const {
    if (id < 0 || static_cast<std::size_t>(id) >= names_.size())
        throw InvalidArgument(std::string(what) + ": references an undeclared node");
}

void Netlist::add_resistor(NodeId a, NodeId b, double ohms) {
    check_node(a, "resistor");
    check_node(b, "resistor");
    if (!(ohms > 0.0))
        throw InvalidArgument("resistor value must be strictly positive");
    elements_.push_back(Resistor{a, b, ohms});
}

void Netlist::add_capacitor(NodeId a, NodeId b, double farads) {
    check_node(a, "capacitor");
    check_node(b, "capacitor");
    if (!(farads > 0.0))
        throw InvalidArgument("capacitor value must be strictly positive");
    elements_.push_back(Capacitor{a, b, farads});
}

void Netlist::add_inductor(NodeId a, NodeId b, double henries, double loss_ohms, double q) {
    check_node(a, "inductor");
    check_node(b, "inductor");
    if (!(henries > 0.0))
        throw InvalidArgument("inductor value must be strictly positive");
    if (loss_ohms < 0.0 || q < 0.0)
        throw InvalidArgument("inductor loss must be non-negative");
    elements_.push_back(Inductor{a, b, henries, loss_ohms, q});
}

void Netlist::add_vccs(NodeId cp, NodeId cm, NodeId out_p, NodeId out_m, double siemens) {
    check_node(cp, "vccs");
    check_node(cm, "vccs");
    check_node(out_p, "vccs");
    check_node(out_m, "vccs");
    elements_.push_back(Vccs{cp, cm, out_p, out_m, siemens});
}

void Netlist::add_mos(NodeId gate, NodeId source, NodeId drain, double gm, double gds,
                      double cgs, double cgd, double gamma) {
    check_node(gate, "mos");
    check_node(source, "mos");
    check_node(drain, "mos");
    if (!(gm > 0.0) || gds < 0.0 || !(cgs > 0.0) || cgd < 0.0 || gamma < 0.0)
        throw InvalidArgument("mos stamp values out of range");
    elements_.push_back(MosStamp{gate, source, drain, gm, gds, cgs, cgd, gamma});
}

void Netlist::add_noise(NodeId a, NodeId b, double density, const std::string& tag) {
    check_node(a, "noise source");
    check_node(b, "noise source");
    if (density < 0.0)
        throw InvalidArgument("noise density must be non-negative");
    elements_.push_back(NoiseSource{a, b, density, tag});
}

int Netlist::add_port(NodeId node, double z0) {
    check_node(node, "port");
    if (node == 0)
        throw InvalidArgument("port cannot sit at the ground node");
    if (!(z0 > 0.0) || !std::isfinite(z0))
        throw InvalidArgument("port reference impedance must be real and strictly positive");
    ports_.push_back(Port{node, z0});
    return static_cast<int>(ports_.size() - 1);
}

void Netlist::set_source_noise_port(int port) {
    if (port < 0 || static_cast<std::size_t>(port) >= ports_.size())
        throw InvalidPort("set_source_noise_port: no such port");
    source_noise_port_ = port;
}

// ---------------------------------------------------------------------------
// JSON document form
// ---------------------------------------------------------------------------

std::string Netlist::to_json() const {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (std::size_t i = 1; i < names_.size(); ++i)
        j["nodes"].push_back(names_[i]);

    j["elements"] = nlohmann::json::array();
    for (const auto& el : elements_) {
        nlohmann::json e;
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Resistor>) {
                    e = {{"type", "resistor"},
                         {"nodes", {node_name(x.a), node_name(x.b)}},
                         {"ohms", x.ohms}};
                } else if constexpr (std::is_same_v<T, Capacitor>) {
                    e = {{"type", "capacitor"},
                         {"nodes", {node_name(x.a), node_name(x.b)}},
                         {"farads", x.farads}};
                } else if constexpr (std::is_same_v<T, Inductor>) {
                    e = {{"type", "inductor"},
                         {"nodes", {node_name(x.a), node_name(x.b)}},
                         {"henries", x.henries},
                         {"loss_ohms", x.loss_ohms},
                         {"q", x.q}};
                } else if constexpr (std::is_same_v<T, Vccs>) {
                    e = {{"type", "vccs"},
                         {"control", {node_name(x.cp), node_name(x.cm)}},
                         {"output", {node_name(x.out_p), node_name(x.out_m)}},
                         {"siemens", x.siemens}};
                } else if constexpr (std::is_same_v<T, MosStamp>) {
                    e = {{"type", "mos"},
                         {"gate", node_name(x.gate)},
                         {"source", node_name(x.source)},
                         {"drain", node_name(x.drain)},
                         {"gm", x.gm},
                         {"gds", x.gds},
                         {"cgs", x.cgs},
                         {"cgd", x.cgd},
                         {"gamma", x.gamma}};
                } else if constexpr (std::is_same_v<T, NoiseSource>) {
                    e = {{"type", "noise"},
                         {"nodes", {node_name(x.a), node_name(x.b)}},
                         {"a2_per_hz", x.density},
                         {"tag", x.tag}};
                }
            },
            el);
        j["elements"].push_back(e);
    }

    j["ports"] = nlohmann::json::array();
    for (const auto& p : ports_)
        j["ports"].push_back({{"node", node_name(p.node)}, {"z0", p.z0}});
    if (source_noise_port_)
        j["source_noise_port"] = *source_noise_port_;
    return j.dump(2);
}

namespace {

double field(const nlohmann::json& e, const char* key) {
    if (!e.contains(key) || !e[key].is_number())
        throw InvalidArgument(std::string("netlist element: missing numeric field '") + key + "'");
    return e[key].get<double>();
}

std::string node_field(const nlohmann::json& e, const char* key) {
    if (!e.contains(key) || !e[key].is_string())
        throw InvalidArgument(std::string("netlist element: missing node field '") + key + "'");
    return e[key].get<std::string>();
}

std::pair<std::string, std::string> node_pair(const nlohmann::json& e, const char* key) {
    if (!e.contains(key) || !e[key].is_array() || e[key].size() != 2)
        throw InvalidArgument(std::string("netlist element: field '") + key +
                              "' must name two nodes");
    return {e[key][0].get<std::string>(), e[key][1].get<std::string>()};
}

} // namespace

Netlist Netlist::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("netlist document: ") + e.what());
    }

    Netlist nl;
    if (j.contains("nodes"))
        for (const auto& n : j["nodes"])
            nl.node(n.get<std::string>());

    if (!j.contains("elements") || !j["elements"].is_array())
        throw InvalidArgument("netlist document: missing 'elements' array");
    for (const auto& e : j["elements"]) {
        const std::string type = e.value("type", "");
        if (type == "resistor") {
            auto [a, b] = node_pair(e, "nodes");
            nl.add_resistor(nl.node(a), nl.node(b), field(e, "ohms"));
        } else if (type == "capacitor") {
            auto [a, b] = node_pair(e, "nodes");
            nl.add_capacitor(nl.node(a), nl.node(b), field(e, "farads"));
        } else if (type == "inductor") {
            auto [a, b] = node_pair(e, "nodes");
            nl.add_inductor(nl.node(a), nl.node(b), field(e, "henries"),
                            e.value("loss_ohms", 0.0), e.value("q", 0.0));
        } else if (type == "vccs") {
            auto [cp, cm] = node_pair(e, "control");
            auto [op, om] = node_pair(e, "output");
            nl.add_vccs(nl.node(cp), nl.node(cm), nl.node(op), nl.node(om),
                        field(e, "siemens"));
        } else if (type == "mos") {
            nl.add_mos(nl.node(node_field(e, "gate")), nl.node(node_field(e, "source")),
                       nl.node(node_field(e, "drain")), field(e, "gm"), field(e, "gds"),
                       field(e, "cgs"), field(e, "cgd"), e.value("gamma", 1.0));
        } else if (type == "noise") {
            auto [a, b] = node_pair(e, "nodes");
            nl.add_noise(nl.node(a), nl.node(b), field(e, "a2_per_hz"), e.value("tag", ""));
        } else {
            throw InvalidArgument("netlist document: unknown element type '" + type + "'");
        }
    }

    if (!j.contains("ports") || !j["ports"].is_array())
        throw InvalidArgument("netlist document: missing 'ports' array");
    for (const auto& p : j["ports"])
        nl.add_port(nl.node(p.at("node").get<std::string>()), p.at("z0").get<double>());

    if (j.contains("source_noise_port"))
        nl.set_source_noise_port(j["source_noise_port"].get<int>());
    return nl;
}

Netlist Netlist::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open netlist file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

} // namespace lna
