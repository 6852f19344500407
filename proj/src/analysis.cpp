#include "lna/analysis.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace lna {

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Stamps an admittance y between nodes a and b into the reduced nodal matrix
// (ground row/column dropped; matrix index = NodeId - 1).
void stamp_admittance(CMat& m, NodeId a, NodeId b, Complex y) {
    if (a > 0) m(a - 1, a - 1) += y;
    if (b > 0) m(b - 1, b - 1) += y;
    if (a > 0 && b > 0) {
        m(a - 1, b - 1) -= y;
        m(b - 1, a - 1) -= y;
    }
}

// Transconductance stamp: current g*(v(cp)-v(cm)) from out_p to out_m.
void stamp_vccs(CMat& m, NodeId cp, NodeId cm, NodeId op, NodeId om, double g) {
    auto add = [&](NodeId row, NodeId col, double val) {
        if (row > 0 && col > 0) m(row - 1, col - 1) += val;
    };
    add(op, cp, g);
    add(op, cm, -g);
    add(om, cp, -g);
    add(om, cm, g);
}

Complex inductor_admittance(const Inductor& ind, double omega) {
    const double r = ind.loss_ohms + (ind.q > 0.0 ? omega * ind.henries / ind.q : 0.0);
    return 1.0 / Complex(r, omega * ind.henries);
}

// Builds the reduced nodal admittance matrix at omega, with every port
// terminated in its reference impedance.
CMat build_matrix(const Netlist& nl, double omega) {
    const auto n = static_cast<Eigen::Index>(nl.node_count()) - 1;
    CMat m = CMat::Zero(n, n);
    for (const auto& el : nl.elements()) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Resistor>) {
                    stamp_admittance(m, x.a, x.b, Complex(1.0 / x.ohms, 0.0));
                } else if constexpr (std::is_same_v<T, Capacitor>) {
                    stamp_admittance(m, x.a, x.b, Complex(0.0, omega * x.farads));
                } else if constexpr (std::is_same_v<T, Inductor>) {
                    stamp_admittance(m, x.a, x.b, inductor_admittance(x, omega));
                } else if constexpr (std::is_same_v<T, Vccs>) {
                    stamp_vccs(m, x.cp, x.cm, x.out_p, x.out_m, x.siemens);
                } else if constexpr (std::is_same_v<T, MosStamp>) {
                    stamp_vccs(m, x.gate, x.source, x.drain, x.source, x.gm);
                    stamp_admittance(m, x.drain, x.source, Complex(x.gds, 0.0));
                    stamp_admittance(m, x.gate, x.source, Complex(0.0, omega * x.cgs));
                    stamp_admittance(m, x.gate, x.drain, Complex(0.0, omega * x.cgd));
                }
                // NoiseSource: inert in deterministic AC analysis.
            },
            el);
    }
    for (const auto& p : nl.ports())
        stamp_admittance(m, p.node, 0, Complex(1.0 / p.z0, 0.0));
    return m;
}

// A zero right-hand side can mask an exactly singular block (floating node,
// resonant island): the solve returns zeros with zero residual. Inspect the
// U diagonal of the factorization instead.
void check_pivots(const Eigen::PartialPivLU<CMat>& lu, const CMat& m, double freq) {
    const double scale = m.cwiseAbs().maxCoeff();
    if (!(scale > 0.0))
        throw SingularSystem(freq, "empty nodal matrix");
    const auto& plu = lu.matrixLU();
    for (Eigen::Index k = 0; k < plu.rows(); ++k)
        if (!(std::abs(plu(k, k)) > 1e-14 * scale))
            throw SingularSystem(freq, "nodal matrix is singular (floating node?)");
}

struct FactoredSystem {
    CMat m;
    Eigen::PartialPivLU<CMat> lu;
    double freq;

    explicit FactoredSystem(const Netlist& nl, double freq)
        : m(build_matrix(nl, 2.0 * constants::pi * freq)), lu(m), freq(freq) {
        check_pivots(lu, m, freq);
    }

    // Solves m*v = rhs and enforces the residual contract.
    CVec solve(const CVec& rhs) const {
        CVec v = lu.solve(rhs);
        if (!v.allFinite())
            throw SingularSystem(freq, "non-finite solution");
        const double rhs_norm = rhs.lpNorm<Eigen::Infinity>();
        const double resid = (m * v - rhs).lpNorm<Eigen::Infinity>();
        if (rhs_norm > 0.0 && !(resid <= 1e-10 * rhs_norm))
            throw SingularSystem(freq, "solver residual above contract");
        return v;
    }
};

void check_ports(const Netlist& nl, const char* what) {
    if (nl.ports().empty())
        throw InvalidPort(std::string(what) + ": netlist has no ports");
}

void check_port_index(const Netlist& nl, int port, const char* what) {
    if (port < 0 || static_cast<std::size_t>(port) >= nl.ports().size())
        throw InvalidPort(std::string(what) + ": port index out of range");
}

CVec excitation_rhs(const Netlist& nl, int port) {
    CVec rhs = CVec::Zero(static_cast<Eigen::Index>(nl.node_count()) - 1);
    const Port& p = nl.ports()[static_cast<std::size_t>(port)];
    if (p.node > 0)
        rhs(p.node - 1) = Complex(1.0 / p.z0, 0.0); // Norton form of 1 V behind z0
    return rhs;
}

AcSolution to_solution(const Netlist& nl, double freq, const CVec& v) {
    AcSolution sol;
    sol.freq = freq;
    sol.v.assign(nl.node_count(), Complex(0.0, 0.0));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        sol.v[static_cast<std::size_t>(i) + 1] = v(i);
    return sol;
}

} // namespace

AcSolution solve_ac(const Netlist& netlist, double freq, int excited_port) {
    if (!(freq > 0.0))
        throw InvalidArgument("solve_ac: frequency must be positive");
    check_ports(netlist, "solve_ac");
    check_port_index(netlist, excited_port, "solve_ac");
    FactoredSystem sys(netlist, freq);
    return to_solution(netlist, freq, sys.solve(excitation_rhs(netlist, excited_port)));
}

TwoPortParams extract_two_port(const Netlist& netlist, const std::vector<double>& freq_grid,
                               double z0, SingularPolicy policy) {
    if (netlist.ports().size() != 2)
        throw InvalidPort("extract_two_port: netlist must have exactly two ports");
    for (const auto& p : netlist.ports())
        if (std::abs(p.z0 - z0) > 1e-12 * z0)
            throw InvalidPort("extract_two_port: port reference impedance differs from z0");
    if (freq_grid.empty())
        throw InvalidArgument("extract_two_port: empty frequency grid");
    for (std::size_t i = 1; i < freq_grid.size(); ++i)
        if (!(freq_grid[i] > freq_grid[i - 1]))
            throw InvalidArgument("extract_two_port: grid must be strictly increasing");

    TwoPortParams out;
    out.z0 = z0;
    out.freqs.reserve(freq_grid.size());
    out.s.reserve(freq_grid.size());

    const auto& ports = netlist.ports();
    for (double f : freq_grid) {
        if (!(f > 0.0))
            throw InvalidArgument("extract_two_port: frequencies must be positive");
        try {
            FactoredSystem sys(netlist, f);
            Mat2c s;
            for (int exc = 0; exc < 2; ++exc) {
                const CVec v = sys.solve(excitation_rhs(netlist, exc));
                for (int i = 0; i < 2; ++i) {
                    const NodeId n = ports[static_cast<std::size_t>(i)].node;
                    const Complex vi = n > 0 ? v(n - 1) : Complex(0.0, 0.0);
                    // 1 V behind z0: b_i = (2*V_i - Vs*delta_ik) / (2*sqrt(z0)),
                    // a_k = Vs / (2*sqrt(z0)); S_ik = b_i / a_k.
                    s[static_cast<std::size_t>(2 * i + exc)] =
                        2.0 * vi - (i == exc ? 1.0 : 0.0);
                }
            }
            out.freqs.push_back(f);
            out.s.push_back(s);
        } catch (const SingularSystem&) {
            if (policy == SingularPolicy::Fail)
                throw;
        }
    }
    if (out.freqs.empty())
        throw SingularSystem(freq_grid.front(), "every grid frequency was singular");
    return out;
}

Complex input_impedance(const Netlist& netlist, int port, double freq) {
    if (!(freq > 0.0))
        throw InvalidArgument("input_impedance: frequency must be positive");
    check_ports(netlist, "input_impedance");
    check_port_index(netlist, port, "input_impedance");

    // Same system as solve_ac but with the probed port's own termination
    // removed: inject 1 A into its node, so Z = V(node).
    const double omega = 2.0 * constants::pi * freq;
    CMat m = build_matrix(netlist, omega);
    const Port& p = netlist.ports()[static_cast<std::size_t>(port)];
    if (p.node == 0)
        throw InvalidPort("input_impedance: port at ground");
    m(p.node - 1, p.node - 1) -= Complex(1.0 / p.z0, 0.0);

    CVec rhs = CVec::Zero(m.rows());
    rhs(p.node - 1) = Complex(1.0, 0.0);
    Eigen::PartialPivLU<CMat> lu(m);
    check_pivots(lu, m, freq);
    CVec v = lu.solve(rhs);
    if (!v.allFinite())
        throw SingularSystem(freq, "non-finite solution");
    const double resid = (m * v - rhs).lpNorm<Eigen::Infinity>();
    if (!(resid <= 1e-10))
        throw SingularSystem(freq, "solver residual above contract");
    return v(p.node - 1);
}

double noise_figure(const Netlist& netlist, double freq, int in_port, int out_port,
                    double temp_k) {
    if (!(freq > 0.0))
        throw InvalidArgument("noise_figure: frequency must be positive");
    if (netlist.ports().size() != 2)
        throw InvalidPort("noise_figure: netlist must have exactly two ports");
    check_port_index(netlist, in_port, "noise_figure");
    check_port_index(netlist, out_port, "noise_figure");
    if (in_port == out_port)
        throw InvalidPort("noise_figure: input and output port must differ");
    if (!netlist.source_noise_port() || *netlist.source_noise_port() != in_port)
        throw MissingSourceNoise(
            "noise_figure: netlist does not associate source noise with the input port");

    const double omega = 2.0 * constants::pi * freq;
    const double four_kt = 4.0 * constants::boltzmann * temp_k;
    FactoredSystem sys(netlist, freq);

    const NodeId out_node = netlist.ports()[static_cast<std::size_t>(out_port)].node;
    const auto n = static_cast<Eigen::Index>(netlist.node_count()) - 1;

    // |V(out)|^2 for a unit current injected from node b into node a.
    auto transfer2 = [&](NodeId a, NodeId b) {
        CVec rhs = CVec::Zero(n);
        if (a > 0) rhs(a - 1) += Complex(1.0, 0.0);
        if (b > 0) rhs(b - 1) -= Complex(1.0, 0.0);
        const CVec v = sys.solve(rhs);
        const Complex vo = out_node > 0 ? v(out_node - 1) : Complex(0.0, 0.0);
        return std::norm(vo);
    };

    // Source-resistance reference: the input port's termination.
    const Port& src = netlist.ports()[static_cast<std::size_t>(in_port)];
    const double src_density = four_kt / src.z0;
    const double src_power = src_density * transfer2(src.node, 0);
    if (!(src_power > 0.0))
        throw SingularSystem(freq, "noise_figure: source noise does not reach the output");

    double total = src_power;
    for (const auto& el : netlist.elements()) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Resistor>) {
                    total += four_kt / x.ohms * transfer2(x.a, x.b);
                } else if constexpr (std::is_same_v<T, Inductor>) {
                    const Complex y = inductor_admittance(x, omega);
                    if (y.real() > 0.0)
                        total += four_kt * y.real() * transfer2(x.a, x.b);
                } else if constexpr (std::is_same_v<T, MosStamp>) {
                    if (x.gamma > 0.0)
                        total += four_kt * x.gamma * x.gm * transfer2(x.drain, x.source);
                } else if constexpr (std::is_same_v<T, NoiseSource>) {
                    if (x.density > 0.0)
                        total += x.density * transfer2(x.a, x.b);
                }
            },
            el);
    }
    return power_db(total / src_power);
}

} // namespace lna
