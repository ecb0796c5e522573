#include "ujel/normal_ci.hpp"

#include "ujel/distributions.hpp"
#include "ujel/errors.hpp"

#include <cmath>
#include <string>

namespace ujel {

NormalCiResult normal_ci(double u, const JackknifeVariance& var, double level) {
    if (!(var.sigma_hat_sq >= 0.0)) {
        throw NumericError("negative jackknife variance " + std::to_string(var.sigma_hat_sq));
    }
    NormalCiResult out;
    out.estimate = u;
    out.sigma_hat = var.sigma_hat();
    out.z = normal_critical_value(level);
    const double half = out.z * out.sigma_hat;
    out.interval.method = CiMethod::NormalApprox;
    out.interval.level = level;
    out.interval.point_estimate = u;
    out.interval.lower = u - half;
    out.interval.upper = u + half;
    if (out.sigma_hat == 0.0) {
        out.interval.diagnostics.warnings.push_back("jackknife variance is zero; interval is degenerate");
    }
    return out;
}

}  // namespace ujel
