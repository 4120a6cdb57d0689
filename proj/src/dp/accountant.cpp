#include "fedfraud/dp/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fedfraud::dp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_binom(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

double log_sum_exp(const std::vector<double>& terms) {
    const double m = *std::max_element(terms.begin(), terms.end());
    if (m == -kInf) return -kInf;
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - m);
    return m + std::log(sum);
}

}  // namespace

void PrivacySpec::validate() const {
    if (!(target_epsilon > 0.0)) throw std::invalid_argument("PrivacySpec: target_epsilon must be > 0");
    if (!(target_delta > 0.0 && target_delta < 1.0))
        throw std::invalid_argument("PrivacySpec: target_delta must be in (0, 1)");
    if (!(max_grad_norm > 0.0)) throw std::invalid_argument("PrivacySpec: max_grad_norm must be > 0");
    if (!(sampling_rate > 0.0 && sampling_rate <= 1.0))
        throw std::invalid_argument("PrivacySpec: sampling_rate must be in (0, 1]");
    if (total_steps == 0) throw std::invalid_argument("PrivacySpec: total_steps must be positive");
    if (order_grid.empty()) throw std::invalid_argument("PrivacySpec: order grid must be nonempty");
}

std::vector<int> default_order_grid() {
    std::vector<int> grid;
    for (int a = 2; a <= 64; ++a) grid.push_back(a);
    grid.push_back(128);
    grid.push_back(256);
    return grid;
}

double rdp_subsampled_gaussian(double q, double sigma, int alpha) {
    if (alpha < 2) throw std::invalid_argument("rdp_subsampled_gaussian: order must be >= 2");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("rdp_subsampled_gaussian: q out of range");
    if (sigma < 0.0) throw std::invalid_argument("rdp_subsampled_gaussian: sigma must be >= 0");
    if (q == 0.0) return 0.0;
    if (sigma == 0.0) return kInf;

    const double gauss = 1.0 / (2.0 * sigma * sigma);
    if (q == 1.0) return static_cast<double>(alpha) * gauss;

    const double log_q = std::log(q);
    const double log_1mq = std::log1p(-q);
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(alpha) + 1);
    for (int k = 0; k <= alpha; ++k) {
        const double t = log_binom(alpha, k) + (alpha - k) * log_1mq + k * log_q +
                         static_cast<double>(k) * (k - 1) * gauss;
        terms.push_back(t);
    }
    const double lse = log_sum_exp(terms);
    // The sum is >= 1, but guard tiny negative excursions from rounding.
    return std::max(0.0, lse) / (alpha - 1.0);
}

EpsilonResult rdp_to_epsilon(const std::vector<double>& rdp_per_order,
                             const std::vector<int>& order_grid, double delta) {
    if (order_grid.empty() || rdp_per_order.size() != order_grid.size())
        throw std::invalid_argument("rdp_to_epsilon: grid/rdp size mismatch");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("rdp_to_epsilon: delta must be in (0, 1)");

    const double log_inv_delta = std::log(1.0 / delta);
    EpsilonResult best{kInf, 0};
    for (std::size_t i = 0; i < order_grid.size(); ++i) {
        const double eps = rdp_per_order[i] + log_inv_delta / (order_grid[i] - 1.0);
        if (eps < best.epsilon) {
            best.epsilon = eps;
            best.best_order = order_grid[i];
        }
    }
    return best;
}

EpsilonResult epsilon_for(double q, double sigma, std::size_t steps, double delta,
                          const std::vector<int>& order_grid) {
    std::vector<double> rdp(order_grid.size());
    for (std::size_t i = 0; i < order_grid.size(); ++i)
        rdp[i] = static_cast<double>(steps) * rdp_subsampled_gaussian(q, sigma, order_grid[i]);
    return rdp_to_epsilon(rdp, order_grid, delta);
}

double calibrate_noise(const PrivacySpec& spec) {
    spec.validate();
    const auto eps_at = [&](double sigma) {
        return epsilon_for(spec.sampling_rate, sigma, spec.total_steps, spec.target_delta,
                           spec.order_grid)
            .epsilon;
    };

    // epsilon is non-increasing in sigma; grow the upper bracket until the
    // target is met, then bisect down to the smallest feasible sigma.
    double lo = 1e-3;
    double hi = 1.0;
    constexpr double kSigmaCap = 1e6;
    while (eps_at(hi) > spec.target_epsilon) {
        lo = hi;
        hi *= 2.0;
        if (hi > kSigmaCap)
            throw InfeasibleTarget("calibrate_noise: target epsilon unreachable within sigma cap");
    }
    if (eps_at(lo) <= spec.target_epsilon) return lo;

    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (eps_at(mid) <= spec.target_epsilon)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

PrivacyLedger::PrivacyLedger(double q, double sigma, double delta, std::vector<int> order_grid)
    : q_(q), sigma_(sigma), delta_(delta), grid_(std::move(order_grid)) {
    if (grid_.empty()) throw std::invalid_argument("PrivacyLedger: empty order grid");
    per_step_rdp_.resize(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i)
        per_step_rdp_[i] = rdp_subsampled_gaussian(q_, sigma_, grid_[i]);
    rdp_accum_.assign(grid_.size(), 0.0);
}

void PrivacyLedger::record_steps(std::size_t n) {
    steps_ += n;
    for (std::size_t i = 0; i < grid_.size(); ++i)
        rdp_accum_[i] += static_cast<double>(n) * per_step_rdp_[i];
}

EpsilonResult PrivacyLedger::epsilon_spent() const {
    return rdp_to_epsilon(rdp_accum_, grid_, delta_);
}

LedgerSnapshot PrivacyLedger::snapshot() const {
    const auto eps = epsilon_spent();
    return LedgerSnapshot{sigma_, q_, delta_, steps_, eps.epsilon, eps.best_order};
}

}  // namespace fedfraud::dp
