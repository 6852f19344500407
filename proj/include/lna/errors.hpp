#pragma once

#include <stdexcept>
#include <string>

namespace lna {

/// Base class for all domain errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// AC engine
// ---------------------------------------------------------------------------

/// Nodal matrix could not be solved at a given frequency (floating node,
/// degenerate element set, or numerically singular system).
class SingularSystem : public Error {
public:
    SingularSystem(double freq_hz, const std::string& detail)
        : Error("singular system at " + std::to_string(freq_hz) + " Hz: " + detail),
          freq_hz(freq_hz) {}
    double freq_hz;
};

class InvalidPort : public Error {
public:
    explicit InvalidPort(const std::string& what) : Error(what) {}
};

/// noise_figure() requires the netlist to declare which port's reference
/// resistance acts as the noise reference source.
class MissingSourceNoise : public Error {
public:
    explicit MissingSourceNoise(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// Device model
// ---------------------------------------------------------------------------

/// Requested drain current cannot be reached below the overdrive ceiling.
class Unattainable : public Error {
public:
    explicit Unattainable(const std::string& what) : Error(what) {}
};

/// A passive value falls outside the technology's realizable range.
class OutOfTechnologyRange : public Error {
public:
    explicit OutOfTechnologyRange(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// Two-port math
// ---------------------------------------------------------------------------

class DegenerateConversion : public Error {
public:
    explicit DegenerateConversion(const std::string& what) : Error(what) {}
};

class BandOutsideGrid : public Error {
public:
    explicit BandOutsideGrid(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

/// Device C_gs alone already exceeds the C_T required by the match.
class NegativeCx : public Error {
public:
    explicit NegativeCx(const std::string& what) : Error(what) {}
};

/// Series resonance of L_S with C_T already lies below the target frequency.
class NonPositiveLg : public Error {
public:
    explicit NonPositiveLg(const std::string& what) : Error(what) {}
};

/// Output step-down transform does not exist (tank resistance <= load).
class TransformImpossible : public Error {
public:
    explicit TransformImpossible(const std::string& what) : Error(what) {}
};

/// Fixed output capacitance already exceeds the tank's resonating capacitance.
class NegativeCeq : public Error {
public:
    explicit NegativeCeq(const std::string& what) : Error(what) {}
};

/// Wraps any error thrown inside the synthesis pipeline with the stage name.
class SynthesisError : public Error {
public:
    SynthesisError(const std::string& stage, const std::string& detail)
        : Error("synthesis stage '" + stage + "': " + detail), stage(stage) {}
    std::string stage;
};

// ---------------------------------------------------------------------------
// Explorer
// ---------------------------------------------------------------------------

class NoFeasibleCandidate : public Error {
public:
    explicit NoFeasibleCandidate(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// Touchstone / file I/O
// ---------------------------------------------------------------------------

class TouchstoneSyntaxError : public Error {
public:
    TouchstoneSyntaxError(int line, const std::string& detail)
        : Error("touchstone syntax error at line " + std::to_string(line) + ": " + detail),
          line(line) {}
    int line;
};

class NonMonotonicFrequency : public Error {
public:
    NonMonotonicFrequency(int line, const std::string& detail)
        : Error("non-monotonic frequency at line " + std::to_string(line) + ": " + detail),
          line(line) {}
    int line;
};

class WrongColumnCount : public Error {
public:
    WrongColumnCount(int line, const std::string& detail)
        : Error("wrong column count at line " + std::to_string(line) + ": " + detail),
          line(line) {}
    int line;
};

class FrequencyOutOfRange : public Error {
public:
    explicit FrequencyOutOfRange(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// Malformed configuration, netlist document, or builder misuse.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

} // namespace lna
