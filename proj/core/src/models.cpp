#include "ujel/models.hpp"

#include "ujel/errors.hpp"
#include "ujel/summation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace ujel {

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

constexpr std::size_t kMonteCarloFallbackSamples = 4'000'000;

}  // namespace

void MobveParams::validate() const {
    if (!finite_nonneg(lambda1) || !finite_nonneg(lambda2) || !finite_nonneg(lambda3)) {
        throw InputError("MOBVE rates must be finite and nonnegative");
    }
    if (!(lambda1 + lambda3 > 0.0) || !(lambda2 + lambda3 > 0.0)) {
        throw InputError("MOBVE needs lambda1+lambda3 > 0 and lambda2+lambda3 > 0");
    }
}

void FgmParetoParams::validate() const {
    if (!finite_pos(scale1) || !finite_pos(scale2)) throw InputError("Pareto scales must be positive");
    if (!finite_pos(shape1) || !finite_pos(shape2)) throw InputError("Pareto shapes must be positive");
    if (!(copula >= -1.0 && copula <= 1.0)) throw InputError("FGM parameter must lie in [-1, 1]");
}

void ModelSpec::validate() const {
    if (groups.size() < 2) throw InputError("a model needs at least 2 groups");
    for (std::size_t g = 0; g < groups.size(); ++g) {
        try {
            std::visit([](const auto& p) { p.validate(); }, groups[g]);
        } catch (const InputError& e) {
            throw InputError("group " + std::to_string(g + 1) + ": " + e.what());
        }
    }
}

double Marginal::cdf(double x) const {
    if (kind == Kind::Exponential) return x <= 0.0 ? 0.0 : -std::expm1(-a * x);
    return x <= a ? 0.0 : -std::expm1(b * std::log(a / x));
}

double Marginal::quantile(double u) const {
    if (kind == Kind::Exponential) return -std::log1p(-u) / a;
    return a * std::exp(-std::log1p(-u) / b);
}

Marginal marginal(const GroupModel& model, std::size_t coordinate) {
    if (coordinate > 1) throw InputError("bivariate models have coordinates 0 and 1");
    if (const auto* m = std::get_if<MobveParams>(&model)) {
        return {Marginal::Kind::Exponential,
                (coordinate == 0 ? m->lambda1 : m->lambda2) + m->lambda3, 1.0};
    }
    const auto& f = std::get<FgmParetoParams>(model);
    return coordinate == 0 ? Marginal{Marginal::Kind::Pareto, f.scale1, f.shape1}
                           : Marginal{Marginal::Kind::Pareto, f.scale2, f.shape2};
}

Matrix sample_mobve(const MobveParams& params, std::size_t n, RandomStream& rng) {
    params.validate();
    Matrix out(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double e1 = rng.exponential(params.lambda1);
        const double e2 = rng.exponential(params.lambda2);
        const double e3 = rng.exponential(params.lambda3);
        out(i, 0) = std::min(e1, e3);
        out(i, 1) = std::min(e2, e3);
    }
    return out;
}

Matrix sample_fgm_pareto(const FgmParetoParams& params, std::size_t n, RandomStream& rng) {
    params.validate();
    Matrix out(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const double w = rng.uniform();
        // V | U=u has CDF v (1 + a (1 - v)) with a = theta (1 - 2u); root of a v^2 - (1+a) v + w
        // in [0, 1], written without the cancelling difference.
        const double a = params.copula * (1.0 - 2.0 * u);
        const double v = 2.0 * w / ((1.0 + a) + std::sqrt((1.0 + a) * (1.0 + a) - 4.0 * a * w));
        out(i, 0) = params.scale1 * std::exp(-std::log1p(-u) / params.shape1);
        out(i, 1) = params.scale2 * std::exp(-std::log1p(-v) / params.shape2);
    }
    return out;
}

Matrix sample_group(const GroupModel& model, std::size_t n, RandomStream& rng) {
    if (const auto* m = std::get_if<MobveParams>(&model)) return sample_mobve(*m, n, rng);
    return sample_fgm_pareto(std::get<FgmParetoParams>(model), n, rng);
}

MultiSampleDataset simulate_dataset(const ModelSpec& model, std::span<const std::size_t> sizes,
                                    RandomStream& rng) {
    if (sizes.size() != model.k()) {
        throw InputError("model has " + std::to_string(model.k()) + " groups but " +
                         std::to_string(sizes.size()) + " sizes were given");
    }
    std::vector<Matrix> groups;
    groups.reserve(sizes.size());
    for (std::size_t g = 0; g < sizes.size(); ++g) groups.push_back(sample_group(model.groups[g], sizes[g], rng));
    return validate_dataset(std::move(groups));
}

double chain_probability(std::span<const Marginal> m, double* error_estimate) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    double value = 0.0;
    if (m.size() == 2) {
        auto f = [&](double u) { return m[0].cdf(m[1].quantile(u)); };
        value = gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 20, 1e-12, &err);
    } else if (m.size() == 3) {
        auto f = [&](double u) {
            const double y = m[1].quantile(u);
            return m[0].cdf(y) * (1.0 - m[2].cdf(y));
        };
        value = gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 20, 1e-12, &err);
    } else {
        throw InputError("quadrature supports chains of 2 or 3 variables, got " +
                         std::to_string(m.size()));
    }
    if (error_estimate) *error_estimate = err;
    return value;
}

TrueTheta true_theta(const ModelSpec& model) {
    model.validate();
    if (model.k() > 3) return true_theta_monte_carlo(model, kMonteCarloFallbackSamples, 0x7A11u);
    TrueTheta out;
    double chain[2];
    for (std::size_t c = 0; c < 2; ++c) {
        std::vector<Marginal> ms;
        for (const auto& g : model.groups) ms.push_back(marginal(g, c));
        double err = 0.0;
        chain[c] = chain_probability(ms, &err);
        out.error += err;
    }
    out.value = chain[0] - chain[1];
    return out;
}

TrueTheta true_theta_monte_carlo(const ModelSpec& model, std::size_t samples, std::uint64_t seed) {
    model.validate();
    if (samples < 2) throw InputError("Monte Carlo needs at least 2 samples");
    RandomStream rng(seed, 0);
    const std::size_t k = model.k();
    std::vector<double> row(2 * k);
    KahanSum sum;
    KahanSum sum_sq;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t g = 0; g < k; ++g) {
            const Matrix draw = sample_group(model.groups[g], 1, rng);
            row[2 * g] = draw(0, 0);
            row[2 * g + 1] = draw(0, 1);
        }
        bool first = true;
        bool second = true;
        for (std::size_t g = 0; g + 1 < k; ++g) {
            first = first && row[2 * g] < row[2 * (g + 1)];
            second = second && row[2 * g + 1] < row[2 * (g + 1) + 1];
        }
        const double h = (first ? 1.0 : 0.0) - (second ? 1.0 : 0.0);
        sum.add(h);
        sum_sq.add(h * h);
    }
    const double n = static_cast<double>(samples);
    TrueTheta out;
    out.monte_carlo = true;
    out.value = sum.value() / n;
    const double var = (sum_sq.value() - n * out.value * out.value) / (n - 1.0);
    out.error = std::sqrt(std::max(var, 0.0) / n);
    return out;
}

std::string describe(const GroupModel& model) {
    std::ostringstream os;
    os.precision(12);
    if (const auto* m = std::get_if<MobveParams>(&model)) {
        os << "mobve(" << m->lambda1 << "," << m->lambda2 << "," << m->lambda3 << ")";
    } else {
        const auto& f = std::get<FgmParetoParams>(model);
        os << "fgm-pareto(" << f.scale1 << "," << f.scale2 << "," << f.shape1 << "," << f.shape2
           << "," << f.copula << ")";
    }
    return os.str();
}

}  // namespace ujel
