#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fedfraud::dp {

struct PrivacySpec {
    double target_epsilon = 10.0;
    double target_delta = 1e-5;
    double max_grad_norm = 1.0;  // clipping bound C
    double sampling_rate = 0.0;  // q = batch_size / dataset_size
    std::size_t total_steps = 0;
    std::vector<int> order_grid;  // RDP orders, integers > 1

    void validate() const;
};

// Integers 2..64 plus {128, 256}.
std::vector<int> default_order_grid();

// Per-step RDP of the subsampled Gaussian mechanism at integer order alpha:
//   eps(alpha) = ln( sum_{k=0}^{alpha} C(alpha,k) (1-q)^(alpha-k) q^k
//                    exp(k(k-1)/(2 sigma^2)) ) / (alpha - 1)
// evaluated in log space. q=0 gives 0; q=1 collapses to the plain Gaussian
// term alpha/(2 sigma^2). sigma=0 returns +infinity (budget exhausted).
double rdp_subsampled_gaussian(double q, double sigma, int alpha);

struct EpsilonResult {
    double epsilon = 0.0;
    int best_order = 0;
};

// Classical conversion eps = min_alpha [ rdp(alpha) + ln(1/delta)/(alpha-1) ].
EpsilonResult rdp_to_epsilon(const std::vector<double>& rdp_per_order,
                             const std::vector<int>& order_grid, double delta);

// Total (eps, order) after `steps` compositions.
EpsilonResult epsilon_for(double q, double sigma, std::size_t steps, double delta,
                          const std::vector<int>& order_grid);

struct InfeasibleTarget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Smallest noise multiplier on a bisection grid such that the accounted
// epsilon over total_steps stays within the target. Throws InfeasibleTarget
// when no sigma within the search bounds achieves it.
double calibrate_noise(const PrivacySpec& spec);

struct LedgerSnapshot {
    double sigma = 0.0;
    double sampling_rate = 0.0;
    double delta = 0.0;
    std::size_t steps = 0;
    double epsilon = 0.0;
    int best_order = 0;
};

// Accumulates RDP across optimization steps for one client; epsilon_spent is
// non-decreasing over a run.
class PrivacyLedger {
public:
    PrivacyLedger(double q, double sigma, double delta, std::vector<int> order_grid);

    void record_steps(std::size_t n);

    std::size_t steps_taken() const { return steps_; }
    double sigma() const { return sigma_; }
    const std::vector<double>& rdp_accumulated() const { return rdp_accum_; }

    EpsilonResult epsilon_spent() const;
    LedgerSnapshot snapshot() const;

private:
    double q_, sigma_, delta_;
    std::vector<int> grid_;
    std::vector<double> per_step_rdp_;
    std::vector<double> rdp_accum_;
    std::size_t steps_ = 0;
};

}  // namespace fedfraud::dp
