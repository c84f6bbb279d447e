#pragma once

#include "cms/ldp.hpp"

namespace cms {

/// Involution kernel W(x_{-1} x_0) on the bilateral shift, stored per edge.
struct InvolutionKernel {
    MarkovPotential W;
};

/// The canonical kernel W(x_{-1} x_0) = phi(x_{-1} x_0).
InvolutionKernel involution_kernel(const MarkovPotential& phi);

/// max over admissible (x_{-2}, x_{-1}, x_0) of
/// |(phi^T + W)(x) - (phi_hat + W)(sigma_hat^{-1} x)|
///   = |phi(x_{-2}x_{-1}) + W(x_{-1}x_0) - phi(x_{-1}x_0) - W(x_{-2}x_{-1})|.
double kernel_identity_defect(const MarkovPotential& phi, const InvolutionKernel& kernel);

/// Two-sided point (... x_{-2} x_{-1} | x_0 x_1 ...). `past` lists x_{-1},
/// x_{-2}, ... and is therefore admissible in the transposed graph.
class TwoSidedPoint {
public:
    /// Throws ShiftError when either side is inadmissible or x_{-1} -> x_0 is not an edge.
    TwoSidedPoint(const ShiftGraph& g, EventuallyPeriodicPoint past, EventuallyPeriodicPoint future);

    /// x_i for any integer i.
    Symbol at(long i) const;
    const EventuallyPeriodicPoint& past() const noexcept { return past_; }
    const EventuallyPeriodicPoint& future() const noexcept { return future_; }

private:
    EventuallyPeriodicPoint past_;
    EventuallyPeriodicPoint future_;
};

/// Canonical past for a future: x_{-1} is the smallest predecessor of x_0,
/// continued through smallest predecessors until a symbol repeats.
TwoSidedPoint with_canonical_past(const ShiftGraph& g, EventuallyPeriodicPoint future);

/// mu_hat_t([w]_k) = mu_t([w]); independent of k.
double hat_cylinder_log_measure(const BilateralCylinder& c, const SpectralData& sd, const MarkovPotential& phi);

/// I_hat(x) = V(x0) + V^T(x_{-1}) - W(x_{-1}x0)
///          + sum_{i>=0} (V^T(x_i) - V^T(x_{i-1}) + phi(x_{i-1}x_i)),
/// with alpha subtracted from phi and W, summed in closed form over the
/// periodic future.
double rate_hat(const MarkovPotential& phi, const SubActionPair& pair, const InvolutionKernel& kernel,
                const TwoSidedPoint& x);

/// Whether the point satisfies the standing hypothesis I(future) > -infinity.
bool rate_hat_hypothesis(const MarkovPotential& phi, const SubActionPair& pair, const TwoSidedPoint& x);

/// W(x_{k-1}x_k) - alpha - V^T(x_{k-1}) - V(x_k); vanishes along calibrated tails.
double kernel_tail_term(const SubActionPair& pair, const InvolutionKernel& kernel, const TwoSidedPoint& x, long k);

/// Same diagnostics as ldp_report; the target sup over [w]_k of I_hat equals
/// cylinder_sup_rate(w) for every offset.
LdpReport bilateral_ldp_report(const MarkovPotential& phi, const SubActionPair& pair, const BilateralCylinder& c,
                               std::span<const SpectralData> spectra);

} // namespace cms
