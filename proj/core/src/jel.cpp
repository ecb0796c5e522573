#include "ujel/jel.hpp"

#include "ujel/distributions.hpp"
#include "ujel/errors.hpp"
#include "ujel/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace ujel {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

std::vector<double> deviations(const PseudoValueSet& pv, double theta) {
    std::vector<double> d(pv.n());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = pv.combined[i] - theta * pv.ev_coefficients[i];
    return d;
}

}  // namespace

LambdaSolution solve_lambda(std::span<const double> d, const JelOptions& options) {
    if (d.empty()) throw InputError("no pseudo-values");
    const auto [min_it, max_it] = std::minmax_element(d.begin(), d.end());
    const double dmin = *min_it;
    const double dmax = *max_it;
    if (!(dmin < 0.0 && dmax > 0.0)) {
        throw InfeasibleThetaError("theta outside the convex hull of the pseudo-values (min d=" +
                                       fmt(dmin) + ", max d=" + fmt(dmax) + ")",
                                   std::numeric_limits<double>::quiet_NaN());
    }
    const double n = static_cast<double>(d.size());

    // g(lambda) = sum d/(1 + lambda d) is strictly decreasing between the poles.
    double lo = -1.0 / dmax;
    double hi = -1.0 / dmin;
    double lambda = 0.0;
    LambdaSolution out;
    for (std::size_t it = 1; it <= options.max_newton_steps; ++it) {
        KahanSum value;
        KahanSum slope;
        for (double di : d) {
            const double r = di / (1.0 + lambda * di);
            value.add(r);
            slope.add(r * r);
        }
        const double g = value.value();
        out.lambda = lambda;
        out.iterations = it;
        out.residual = std::fabs(g) / n;
        if (out.residual <= options.lambda_tolerance) return out;

        if (g > 0.0) {
            lo = lambda;
        } else {
            hi = lambda;
        }
        double next = lambda + g / slope.value();
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == lambda || next == lo || next == hi) {
            // Bracket collapsed to adjacent doubles; this is as close as the arithmetic gets.
            return out;
        }
        lambda = next;
    }
    throw ConvergenceError("lambda solver did not converge in " +
                               std::to_string(options.max_newton_steps) +
                               " steps, residual " + fmt(out.residual),
                           out.residual);
}

double solve_lambda(const PseudoValueSet& pv, double theta, const JelOptions& options) {
    const auto d = deviations(pv, theta);
    try {
        return solve_lambda(d, options).lambda;
    } catch (const InfeasibleThetaError& e) {
        throw InfeasibleThetaError(e.what(), theta);
    }
}

JelEvaluation log_jel_ratio(const PseudoValueSet& pv, double theta, bool with_weights,
                            const JelOptions& options) {
    const auto d = deviations(pv, theta);
    LambdaSolution sol;
    try {
        sol = solve_lambda(d, options);
    } catch (const InfeasibleThetaError& e) {
        throw InfeasibleThetaError(e.what(), theta);
    }

    JelEvaluation ev;
    ev.theta = theta;
    ev.lambda = sol.lambda;
    ev.iterations = sol.iterations;
    ev.residual = sol.residual;
    ev.converged = sol.residual <= options.lambda_tolerance;

    const double n = static_cast<double>(d.size());
    KahanSum log_sum;
    if (with_weights) ev.weights.resize(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double t = sol.lambda * d[i];
        if (!(1.0 + t > 0.0)) {
            throw NumericError("empirical-likelihood weight argument nonpositive at theta=" +
                               fmt(theta));
        }
        log_sum.add(std::log1p(t));
        if (with_weights) ev.weights[i] = 1.0 / (n * (1.0 + t));
    }
    ev.log_r = -log_sum.value();
    ev.minus_2_log_r = -2.0 * ev.log_r;
    return ev;
}

ConfidenceInterval jel_confidence_interval(const PseudoValueSet& pv, double level,
                                           const JelOptions& options) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InputError("confidence level must lie in (0,1), got " + fmt(level));
    }
    if (pv.n() == 0) throw InputError("empty pseudo-value set");

    const auto [vmin, vmax] = std::minmax_element(pv.combined.begin(), pv.combined.end());
    const double scale = std::max({1.0, std::fabs(*vmin), std::fabs(*vmax)});
    const double se = jackknife_variance(pv).sigma_hat();
    if (*vmax - *vmin <= 1e-14 * scale || !(se > 0.0)) {
        throw DegenerateError("pseudo-values have no spread (jackknife sigma=" + fmt(se) +
                              "); no likelihood interval exists");
    }

    const double cut = chi2_1_quantile(level);
    const double center = pv.u_value;

    ConfidenceInterval ci;
    ci.method = CiMethod::Jel;
    ci.level = level;
    ci.point_estimate = center;

    std::size_t work = 0;
    auto profile = [&](double theta) {
        try {
            const JelEvaluation ev = log_jel_ratio(pv, theta, false, options);
            work += ev.iterations;
            return ev.minus_2_log_r;
        } catch (const InfeasibleThetaError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    // (1/n) sum c_l = 1 and mean(V) = U, so lambda = 0 solves the constraint at theta = U
    // and the profile attains its minimum 0 there for any group sizes.
    const double f_center = profile(center);
    if (!(f_center < cut)) {
        throw DegenerateError("-2 log R at the point estimate is " + fmt(f_center) +
                              ", above the chi-square cut " + fmt(cut));
    }

    double achieved = 0.0;
    auto endpoint = [&](double side) {
        double inner = center;
        double f_prev = f_center;
        double step = options.scan_step_sigmas * se;
        std::optional<double> outer;
        bool monotone = true;
        for (std::size_t s = 1; s <= options.max_scan_steps; ++s) {
            const double theta = inner + side * step;
            const double f = profile(theta);
            ++work;
            if (f >= cut) {
                outer = theta;
                break;
            }
            if (f < f_prev - 1e-12) monotone = false;
            f_prev = f;
            inner = theta;
            if (s >= options.linear_scan_steps) step *= 2.0;
        }
        const char* side_name = side < 0 ? "lower" : "upper";
        if (!monotone) {
            ci.diagnostics.warnings.push_back(std::string("-2 log R not monotone on the ") +
                                              side_name + " side");
        }
        if (!outer) {
            ci.diagnostics.warnings.push_back(std::string(side_name) +
                                              " endpoint not bracketed; interval truncated");
            return inner;
        }
        double out = *outer;
        std::size_t steps = 0;
        while (std::fabs(out - inner) > options.theta_tolerance &&
               steps < options.max_bisection_steps) {
            const double mid = 0.5 * (inner + out);
            if (mid == inner || mid == out) break;
            if (profile(mid) < cut) {
                inner = mid;
            } else {
                out = mid;
            }
            ++steps;
            ++work;
        }
        if (std::isinf(profile(out))) {
            ci.diagnostics.warnings.push_back(std::string(side_name) +
                                              " endpoint truncated at the feasibility boundary");
        }
        achieved = std::max(achieved, std::fabs(out - inner));
        return 0.5 * (inner + out);
    };

    ci.lower = endpoint(-1.0);
    ci.upper = endpoint(+1.0);
    ci.diagnostics.iterations = work;
    ci.diagnostics.tolerance_achieved = achieved;
    return ci;
}

}  // namespace ujel
