#pragma once

#include <string>
#include <vector>

namespace stochns {

struct VerifyCheck {
    std::string name;
    bool pass = false;
    double measured = 0.0;  // error or ratio, see detail
    double tolerance = 0.0;
    std::string detail;
};

/// Analytic battery: Taylor-Green decay, disk-average identity, Parseval, Poincare check, basis norms.
std::vector<VerifyCheck> run_verify_battery();

}  // namespace stochns
