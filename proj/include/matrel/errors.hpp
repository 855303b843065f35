#ifndef MATREL_ERRORS_HPP
#define MATREL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace matrel {

/// Thrown when a numerical routine exhausts its work budget without
/// reaching the requested accuracy. Carries the best estimate obtained
/// so far and the error estimate attached to it.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_(best_estimate), err_(error_estimate) {}

    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return err_; }

private:
    double best_;
    double err_;
};

} // namespace matrel

#endif
