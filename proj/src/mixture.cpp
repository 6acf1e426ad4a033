#include "slrt/mixture.hpp"

#include "slrt/logspace.hpp"
#include "slrt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace slrt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double w) { return w > 0.0 ? std::log(w) : kNegInf; }

// Linear-interpolation sample quantile on a sorted copy.
double quantile(const std::vector<double>& sorted, double p) {
    const auto n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= n) return sorted[n - 1];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct EmRun {
    MixtureParams params;
    double loglik = kNegInf;
    int iterations = 0;
    std::vector<double> trace;
};

EmRun run_em(const Eigen::VectorXd& xs, MixtureParams p, const EmConfig& cfg) {
    const auto n = xs.size();
    EmRun run;
    double prev = kNegInf;
    std::vector<double> resp(static_cast<std::size_t>(n));

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        // E-step: responsibility of component 1 for each point
        const double lw1 = safe_log(p.weight);
        const double lw2 = safe_log(1.0 - p.weight);
        double ll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = lw1 + gaussian_logpdf(xs[i], p.mu1);
            const double b = lw2 + gaussian_logpdf(xs[i], p.mu2);
            const double lse = log_sum_exp(a, b);
            resp[static_cast<std::size_t>(i)] = std::exp(a - lse);
            ll += lse;
        }
        run.trace.push_back(ll);
        run.loglik = ll;
        run.params = p;
        run.iterations = iter + 1;
        if (ll - prev < cfg.tol && iter > 0) break;
        prev = ll;

        // M-step: weighted means; empty components keep their location
        double s = 0.0, sx1 = 0.0, sx2 = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = resp[static_cast<std::size_t>(i)];
            s += r;
            sx1 += r * xs[i];
            sx2 += (1.0 - r) * xs[i];
        }
        const double total = static_cast<double>(n);
        p.weight = std::clamp(s / total, 0.0, 1.0);
        if (s > 0.0) p.mu1 = sx1 / s;
        if (total - s > 0.0) p.mu2 = sx2 / (total - s);
    }
    return run;
}

}  // namespace

double mixture_loglik(const MixtureParams& p, const Dataset& data) {
    if (data.d() != 1)
        throw std::invalid_argument("mixture_loglik: mixture model requires d = 1");
    if (!(p.weight >= 0.0 && p.weight <= 1.0))
        throw std::invalid_argument("mixture_loglik: weight must lie in [0, 1]");
    if (!std::isfinite(p.mu1) || !std::isfinite(p.mu2))
        throw std::invalid_argument("mixture_loglik: means must be finite");

    const double lw1 = safe_log(p.weight);
    const double lw2 = safe_log(1.0 - p.weight);
    double ll = 0.0;
    const auto& rows = data.rows();
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const double x = rows(i, 0);
        ll += log_sum_exp(lw1 + gaussian_logpdf(x, p.mu1), lw2 + gaussian_logpdf(x, p.mu2));
    }
    return ll;
}

EmFitResult em_fit_detail(const Dataset& data, const EmConfig& cfg) {
    if (data.d() != 1) throw std::invalid_argument("em_fit: mixture model requires d = 1");
    if (data.n() < 2) throw std::invalid_argument("em_fit: need at least 2 observations");
    if (cfg.max_iters < 1 || cfg.restarts < 1 || !(cfg.tol > 0.0))
        throw std::invalid_argument("em_fit: max_iters, restarts and tol must be positive");

    const Eigen::VectorXd xs = data.column();
    const double xbar = xs.mean();

    // Degenerate data: no separation is identifiable, return the collapsed fit.
    if (xs.maxCoeff() == xs.minCoeff()) {
        EmFitResult out;
        out.params = MixtureParams{0.5, xbar, xbar};
        out.loglik = mixture_loglik(out.params, data);
        out.iterations = 0;
        out.restart = -1;
        out.trace = {out.loglik};
        return out;
    }

    std::vector<double> sorted(xs.data(), xs.data() + xs.size());
    std::sort(sorted.begin(), sorted.end());
    const double q25 = quantile(sorted, 0.25);
    const double q75 = quantile(sorted, 0.75);
    const double sd = std::sqrt((xs.array() - xbar).square().sum() /
                                static_cast<double>(xs.size() - 1));

    // Collapsed single-Gaussian baseline: guarantees the fit is never worse
    // than the nested null model.
    EmFitResult best;
    best.params = MixtureParams{0.5, xbar, xbar};
    best.loglik = mixture_loglik(best.params, data);
    best.iterations = 0;
    best.restart = -1;
    best.trace = {best.loglik};

    for (int r = 0; r < cfg.restarts; ++r) {
        rng::NormalSampler jitter(rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(r),
                                                   rng::kStreamEm));
        MixtureParams init;
        init.weight = 0.5;
        init.mu1 = q25 + 0.25 * sd * jitter.next();
        init.mu2 = q75 + 0.25 * sd * jitter.next();
        const EmRun run = run_em(xs, init, cfg);
        if (run.loglik > best.loglik) {
            best.params = run.params;
            best.loglik = run.loglik;
            best.iterations = run.iterations;
            best.restart = r;
            best.trace = run.trace;
        }
    }
    return best;
}

MixtureParams em_fit(const Dataset& data, const EmConfig& cfg) {
    return em_fit_detail(data, cfg).params;
}

TestResult mixture_slrt(const Dataset& data, const SplitSpec& spec, const TestConfig& cfg,
                        const EmConfig& em) {
    if (data.d() != 1) throw std::invalid_argument("mixture_slrt: requires d = 1");
    const SplitData sd = split(data, spec);

    const MixtureParams theta1 = em_fit(sd.estimation, em);
    const double null_mean = sd.evaluation.mean()[0];  // exact null MLE on D1

    const double log_t = mixture_loglik(theta1, sd.evaluation) -
                         loglik(ParameterVector::Constant(1, null_mean), sd.evaluation);

    TestResult r = decide(log_t, cfg);
    r.n0 = sd.n0();
    r.n1 = sd.n1();
    r.gamma_effective = static_cast<double>(r.n1) / static_cast<double>(data.n());
    return r;
}

}  // namespace slrt
