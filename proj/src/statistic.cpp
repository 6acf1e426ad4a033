#include "slrt/statistic.hpp"

#include "slrt/logspace.hpp"

#include <cmath>
#include <stdexcept>

namespace slrt {

namespace {

double gaussian_log_ratio(const Dataset& estimation, const Dataset& evaluation,
                          const LinearHypothesis& h, const ModelSpec& model) {
    if (model.kind != ModelKind::GaussianLocation)
        throw std::invalid_argument("slrt_statistic: model must be GaussianLocation");
    if (model.dim != evaluation.d() || estimation.d() != evaluation.d() ||
        h.dim() != evaluation.d())
        throw std::invalid_argument("slrt_statistic: model/hypothesis dimension mismatch");

    const ParameterVector theta1 = mle(estimation);
    const ParameterVector xbar1 = mle(evaluation);
    const ParameterVector theta0 = project(xbar1, h);
    const double n1 = static_cast<double>(evaluation.n());
    return 0.5 * n1 * ((xbar1 - theta0).squaredNorm() - (xbar1 - theta1).squaredNorm());
}

}  // namespace

double slrt_statistic(const SplitData& sd, const LinearHypothesis& h, const ModelSpec& model) {
    return gaussian_log_ratio(sd.estimation, sd.evaluation, h, model);
}

double swapped_statistic(const SplitData& sd, const LinearHypothesis& h, const ModelSpec& model) {
    return gaussian_log_ratio(sd.evaluation, sd.estimation, h, model);
}

double cross_fit_statistic(double log_t, double log_t_swap) {
    if (!std::isfinite(log_t) || !std::isfinite(log_t_swap))
        throw std::invalid_argument("cross_fit_statistic: inputs must be finite");
    if (log_t == log_t_swap) return log_t;
    return log_sum_exp(log_t, log_t_swap) - 0.6931471805599453094;  // - log 2
}

TestResult decide(double log_t, const TestConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("decide: alpha must lie in (0, 1)");
    if (cfg.critical_value_override && !(*cfg.critical_value_override > 0.0))
        throw std::invalid_argument("decide: critical value override must be > 0");

    TestResult r;
    r.log_t = log_t;
    r.guarantee_void = cfg.critical_value_override.has_value();
    r.log_crit = r.guarantee_void ? std::log(*cfg.critical_value_override)
                                  : std::log(1.0 / cfg.alpha);
    r.reject = log_t >= r.log_crit;  // closed rejection region
    return r;
}

TestResult run_split_test(const SplitData& sd, const LinearHypothesis& h,
                          const ModelSpec& model, const TestConfig& cfg,
                          StatisticKind kind) {
    double log_t = slrt_statistic(sd, h, model);
    if (kind == StatisticKind::crossfit)
        log_t = cross_fit_statistic(log_t, swapped_statistic(sd, h, model));

    TestResult r = decide(log_t, cfg);
    r.n0 = sd.n0();
    r.n1 = sd.n1();
    r.gamma_effective = static_cast<double>(r.n1) / static_cast<double>(r.n0 + r.n1);
    return r;
}

}  // namespace slrt
