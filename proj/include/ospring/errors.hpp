#ifndef OSPRING_ERRORS_HPP
#define OSPRING_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ospring {

// Configuration input problems: missing keys, unparsable values, violated
// invariants. The message always names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// A denominator collapsed below the relative guard threshold (degenerate
// recycling cavity, exact resonance, coincident mode parameters, ...).
class SingularityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The perturbative closed forms are outside their regime of validity.
class PerturbationError : public std::runtime_error {
public:
    enum class Reason { ComplexP, DoubleResonance, OutOfRegime, Degenerate };

    PerturbationError(Reason reason, const std::string& what)
        : std::runtime_error(what), reason_(reason) {}
    Reason reason() const { return reason_; }

private:
    Reason reason_;
};

// Root iteration did not converge; carries the best iterate found.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what,
                 std::vector<std::complex<double>> best = {})
        : std::runtime_error(what), best_iterate_(std::move(best)) {}
    const std::vector<std::complex<double>>& best_iterate() const {
        return best_iterate_;
    }

private:
    std::vector<std::complex<double>> best_iterate_;
};

// Bisection bracket does not straddle a sign change.
class BracketError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ospring

#endif // OSPRING_ERRORS_HPP
