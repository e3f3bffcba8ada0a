#ifndef LPRED_ERRORS_HPP
#define LPRED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lpred {

/**
 * Base class for malformed or inconsistent caller input.  The command line
 * tool maps every input_error to exit code 2.
 */
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/** Two grid objects of different resolution were combined. */
class grid_mismatch : public input_error {
public:
    using input_error::input_error;
};

/** A series/truncation order outside the representable range. */
class invalid_order : public input_error {
public:
    using input_error::input_error;
};

/** An exponent p outside the range supported by the requested operation. */
class unsupported_exponent : public input_error {
public:
    using input_error::input_error;
};

/** Periodic problems need an offset x outside the observation subgroup. */
class offset_in_subgroup : public input_error {
public:
    using input_error::input_error;
};

/** Folding over q cosets requires q to divide the grid size. */
class grid_not_divisible : public input_error {
public:
    using input_error::input_error;
};

/** Measure description names a density family that is not registered. */
class unknown_family : public input_error {
public:
    using input_error::input_error;
};

/** A family generator was invoked without one of its required parameters. */
class missing_param : public input_error {
public:
    using input_error::input_error;
};

/** Requested problem type cannot be posed for the given family/measure. */
class incompatible_problem : public input_error {
public:
    using input_error::input_error;
};

/**
 * Base class for well-posed inputs on which the requested quantity
 * degenerates (zero infimum, divergent integral, dependent system, ...).
 * The command line tool maps every degeneracy_error to exit code 3.
 */
class degeneracy_error : public std::runtime_error {
public:
    explicit degeneracy_error(const std::string& msg) : std::runtime_error(msg) {}
};

/** log w is not integrable: the geometric-mean infimum collapses to zero. */
class szego_degenerate : public degeneracy_error {
public:
    using degeneracy_error::degeneracy_error;
};

/** A Radon-Nikodym derivative was requested for a non-dominated pair. */
class not_absolutely_continuous : public degeneracy_error {
public:
    using degeneracy_error::degeneracy_error;
};

/** Series logarithm of a series whose constant term is not positive. */
class invalid_series : public degeneracy_error {
public:
    using degeneracy_error::degeneracy_error;
};

/** Root scan of the zero polynomial. */
class degenerate_polynomial : public degeneracy_error {
public:
    using degeneracy_error::degeneracy_error;
};

/** Augmenting character is numerically dependent on the current span. */
class dependent_character : public degeneracy_error {
public:
    using degeneracy_error::degeneracy_error;
};

/**
 * For p outside {1,2} the m-step projection formula requires the truncated
 * outer polynomial to be zero-free in the open unit disc; a root inside (or
 * within tolerance of) the boundary makes the formula invalid.
 */
class truncation_zero_in_disc : public degeneracy_error {
public:
    using degeneracy_error::degeneracy_error;
};

} // namespace lpred

#endif // LPRED_ERRORS_HPP
