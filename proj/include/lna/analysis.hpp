#pragma once

#include <vector>

#include "lna/netlist.hpp"
#include "lna/twoport.hpp"

namespace lna {

/// Node voltages for one single-port excitation at one frequency.
/// Voltage index equals NodeId; ground is always exactly 0 V.
struct AcSolution {
    double freq; // Hz
    std::vector<Complex> v;

    Complex at(NodeId n) const { return v.at(static_cast<std::size_t>(n)); }
};

/// Policy for grids containing singular frequencies.
enum class SingularPolicy {
    Fail, // default: throw on the first singular frequency
    Skip, // drop the frequency from the result
};

/// Solves the nodal equations with a unit-amplitude (1 V) source behind the
/// excited port's reference impedance; every port is terminated in its
/// reference impedance. The solution satisfies the nodal system to a
/// relative residual of 1e-10 or SingularSystem is thrown.
AcSolution solve_ac(const Netlist& netlist, double freq, int excited_port);

/// Two-port S-parameters over a frequency grid from two independent port
/// excitations per frequency. The netlist must have exactly two ports whose
/// reference impedances both equal z0.
TwoPortParams extract_two_port(const Netlist& netlist, const std::vector<double>& freq_grid,
                               double z0, SingularPolicy policy = SingularPolicy::Fail);

/// Impedance seen looking into a port, with every other port terminated in
/// its reference impedance (the probed port's own termination is removed).
Complex input_impedance(const Netlist& netlist, int port, double freq);

/// Spot noise figure in dB between two ports: the ratio of total output
/// noise density (all element noise plus the source resistance) to the
/// density contributed by the source resistance alone. The netlist must
/// declare in_port as its source-noise reference. Element noise is implicit:
/// resistors 4kT/R, lossy inductors 4kT*Re{1/Z}, MOS channels 4kT*gamma*gm,
/// plus any explicit NoiseSource elements.
double noise_figure(const Netlist& netlist, double freq, int in_port, int out_port,
                    double temp_k = constants::noise_ref_temp);

} // namespace lna
