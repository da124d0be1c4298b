#ifndef PERCMON_PLAUSIBILITY_HPP_
#define PERCMON_PLAUSIBILITY_HPP_

#include <cstdint>
#include <vector>

#include "percmon/types.hpp"

namespace percmon {

struct PlausibilityParams {
    double a_acc = 7.0;                      // max forward acceleration, m/s^2
    double a_br = -7.0;                      // max brake acceleration, m/s^2
    double omega_max = 7.853981633974483;    // max turn rate, rad/s (90 deg / 0.2 s)
    double dtheta_default = 0.17453292519943295;  // 10 deg heading margin
    double gamma_plaus = 1.0;                // check sensitivity factor

    void validate() const;
};

/// Turn rate and acceleration estimated from two consecutive measurements,
/// with their propagated margins.
struct RateEstimate {
    double omega_hat = 0.0;
    double a_hat = 0.0;
    double d_omega = 0.0;
    double d_a = 0.0;
};

enum class Violation { TurnRate, Acceleration, PositionPrediction };

struct PlausibilityVerdict {
    std::int64_t object_id = 0;
    bool plausible = true;
    std::vector<Violation> violated;
    double x_hat = 0.0;
    double y_hat = 0.0;
    double dx_hat = 0.0;
    double dy_hat = 0.0;
    double residual = 0.0;  // distance between predicted and measured position
};

/// Displacement of the constant-turn-rate-and-acceleration model expanded to
/// second order in dt.
struct Displacement {
    double fx = 0.0;
    double fy = 0.0;
};

Displacement ctra_displacement(double dt, double v, double theta, double a,
                               double omega);

/// Analytic partial derivatives of the displacement with respect to
/// (v, theta, a, omega), used for first-order margin propagation.
struct DisplacementJacobian {
    double dfx_dv = 0.0, dfx_dtheta = 0.0, dfx_da = 0.0, dfx_domega = 0.0;
    double dfy_dv = 0.0, dfy_dtheta = 0.0, dfy_da = 0.0, dfy_domega = 0.0;
};

DisplacementJacobian ctra_partials(double dt, double v, double theta, double a,
                                   double omega);

/// Rates from two measurements over dt > 0. Heading differences are wrapped
/// to (-pi, pi] before dividing. Margins combine the two measurement margins
/// in quadrature (independent errors). Throws ZeroIntervalError for dt <= 0.
RateEstimate estimate_rates(const ObjectState& prev, const ObjectState& curr,
                            double dt);

struct PositionPrediction {
    double x_hat = 0.0;
    double y_hat = 0.0;
    double dx_hat = 0.0;
    double dy_hat = 0.0;
};

/// Position predicted dt ahead of `prev` using the estimated rates; margins
/// by first-order propagation (quadrature over independent inputs) with the
/// partials evaluated at the measured point.
PositionPrediction predict_position(const ObjectState& prev, const RateEstimate& est,
                                    double dt);

/// Checks one motion step against the physical limits and the position
/// prediction. A state that does not supply a heading margin (dtheta <= 0)
/// is checked with the default heading margin from the params.
PlausibilityVerdict check_plausibility(const ObjectState& prev,
                                       const ObjectState& curr,
                                       const PlausibilityParams& params);

enum class SpeedErrorKind { Permanent, Transient };

struct SpeedErrorMargins {
    double dx = 0.1;
    double dy = 0.1;
    double dv = 1.0;
    double dtheta = 0.17453292519943295;
};

struct SpeedErrorThreshold {
    double positive = 0.0;  // smallest detectable positive error, m/s
    double negative = 0.0;  // smallest detectable |negative| error; +inf when
                            // no physical (speed >= 0) error is detectable
};

/// Minimal detectable speed error for an object moving at constant speed v
/// over one interval dt with heading 0, scanned with check_plausibility by
/// bisection (0.01 m/s resolution, bracket up to 50 m/s). Positive and
/// negative directions are scanned separately; negative errors larger than
/// the object speed are unphysical and excluded.
SpeedErrorThreshold min_detectable_speed_error(double v, double dt,
                                               SpeedErrorKind kind,
                                               const SpeedErrorMargins& margins,
                                               const PlausibilityParams& params);

/// Small-interval closed form for transient errors, where the acceleration
/// limit dominates: min(a_acc, -a_br) * dt + sqrt(2) * dv_margin.
double transient_speed_error_closed_form(double dt, double dv_margin,
                                         const PlausibilityParams& params);

}  // namespace percmon

#endif  // PERCMON_PLAUSIBILITY_HPP_
