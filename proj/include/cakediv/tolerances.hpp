#pragma once

#include <stdexcept>

namespace cakediv {

// Comparison slacks used throughout the solver stack. eps_norm bounds
// representation noise (normalization, sliver widths), eps_eq is the
// equality test used inside protocols, eps_fair is the slack granted to
// fairness verdicts.
struct Tolerances {
    double eps_eq = 1e-10;
    double eps_fair = 1e-9;
    double eps_norm = 1e-12;

    void validate() const {
        if (eps_norm <= 0 || eps_eq <= 0 || eps_fair <= 0)
            throw std::invalid_argument("tolerances must be strictly positive");
        if (!(eps_norm <= eps_eq && eps_eq <= eps_fair))
            throw std::invalid_argument("tolerances must satisfy eps_norm <= eps_eq <= eps_fair");
    }
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

} // namespace cakediv
