#include "percmon/plausibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace percmon {

namespace {

constexpr double kScanResolution = 0.01;  // m/s
constexpr double kScanBracket = 50.0;     // m/s

double effective_dtheta(const ObjectState& o, const PlausibilityParams& params) {
    return o.dtheta > 0.0 ? o.dtheta : params.dtheta_default;
}

}  // namespace

void PlausibilityParams::validate() const {
    if (!(a_acc > 0.0) || !(a_br < 0.0)) {
        throw ConfigError("acceleration limits must satisfy a_br < 0 < a_acc");
    }
    if (omega_max <= 0.0) throw ConfigError("omega_max must be positive");
    if (gamma_plaus < 0.0) throw ConfigError("gamma_plaus must be >= 0");
}

Displacement ctra_displacement(double dt, double v, double theta, double a,
                               double omega) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double h = dt * dt / 2.0;
    Displacement d;
    d.fx = v * dt * c + h * (a * c - v * omega * s);
    d.fy = v * dt * s + h * (a * s + v * omega * c);
    return d;
}

DisplacementJacobian ctra_partials(double dt, double v, double theta, double a,
                                   double omega) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double h = dt * dt / 2.0;
    DisplacementJacobian j;
    j.dfx_dv = dt * c - h * omega * s;
    j.dfx_dtheta = -v * dt * s - h * (a * s + v * omega * c);
    j.dfx_da = h * c;
    j.dfx_domega = -h * v * s;
    j.dfy_dv = dt * s + h * omega * c;
    j.dfy_dtheta = v * dt * c + h * (a * c - v * omega * s);
    j.dfy_da = h * s;
    j.dfy_domega = h * v * c;
    return j;
}

RateEstimate estimate_rates(const ObjectState& prev, const ObjectState& curr,
                            double dt) {
    if (dt <= 0.0) throw ZeroIntervalError("estimate_rates: non-positive interval");
    RateEstimate est;
    est.omega_hat = normalize_angle(curr.theta - prev.theta) / dt;
    est.a_hat = (curr.v - prev.v) / dt;
    est.d_omega = std::hypot(prev.dtheta, curr.dtheta) / dt;
    est.d_a = std::hypot(prev.dv, curr.dv) / dt;
    return est;
}

PositionPrediction predict_position(const ObjectState& prev, const RateEstimate& est,
                                    double dt) {
    if (dt <= 0.0) throw ZeroIntervalError("predict_position: non-positive interval");
    const Displacement d =
        ctra_displacement(dt, prev.v, prev.theta, est.a_hat, est.omega_hat);
    const DisplacementJacobian j =
        ctra_partials(dt, prev.v, prev.theta, est.a_hat, est.omega_hat);

    PositionPrediction pred;
    pred.x_hat = prev.x + d.fx;
    pred.y_hat = prev.y + d.fy;
    auto quad = [](double a, double b, double c, double d2, double e) {
        return std::sqrt(a * a + b * b + c * c + d2 * d2 + e * e);
    };
    pred.dx_hat = quad(prev.dx, j.dfx_dv * prev.dv, j.dfx_dtheta * prev.dtheta,
                       j.dfx_da * est.d_a, j.dfx_domega * est.d_omega);
    pred.dy_hat = quad(prev.dy, j.dfy_dv * prev.dv, j.dfy_dtheta * prev.dtheta,
                       j.dfy_da * est.d_a, j.dfy_domega * est.d_omega);
    return pred;
}

PlausibilityVerdict check_plausibility(const ObjectState& prev,
                                       const ObjectState& curr,
                                       const PlausibilityParams& params) {
    const double dt = curr.t - prev.t;
    if (dt <= 0.0) throw ZeroIntervalError("check_plausibility: non-positive interval");

    ObjectState p = prev;
    ObjectState c = curr;
    p.dtheta = effective_dtheta(prev, params);
    c.dtheta = effective_dtheta(curr, params);

    const RateEstimate est = estimate_rates(p, c, dt);
    const PositionPrediction pred = predict_position(p, est, dt);

    PlausibilityVerdict verdict;
    verdict.object_id = curr.id;
    verdict.x_hat = pred.x_hat;
    verdict.y_hat = pred.y_hat;
    verdict.dx_hat = pred.dx_hat;
    verdict.dy_hat = pred.dy_hat;
    verdict.residual = std::hypot(pred.x_hat - c.x, pred.y_hat - c.y);

    const double wmax = std::abs(params.omega_max);
    if (est.omega_hat - est.d_omega > wmax || est.omega_hat + est.d_omega < -wmax) {
        verdict.violated.push_back(Violation::TurnRate);
    }
    if (est.a_hat - est.d_a > params.a_acc || est.a_hat + est.d_a < params.a_br) {
        verdict.violated.push_back(Violation::Acceleration);
    }
    const double margin = params.gamma_plaus *
        (std::hypot(pred.dx_hat, pred.dy_hat) + std::hypot(c.dx, c.dy));
    if (verdict.residual - margin > 0.0) {
        verdict.violated.push_back(Violation::PositionPrediction);
    }
    verdict.plausible = verdict.violated.empty();
    return verdict;
}

namespace {

/// Two-step constant-speed scenario with an injected speed deviation.
bool speed_error_detected(double v, double dt, double delta_v, SpeedErrorKind kind,
                          const SpeedErrorMargins& margins,
                          const PlausibilityParams& params) {
    ObjectState prev, curr;
    prev.id = curr.id = 1;
    prev.frame = 0;
    curr.frame = 1;
    prev.t = 0.0;
    curr.t = dt;
    prev.x = 0.0;
    curr.x = v * dt;  // true motion at speed v, heading 0
    prev.y = curr.y = 0.0;
    prev.theta = curr.theta = 0.0;
    prev.v = (kind == SpeedErrorKind::Permanent) ? v + delta_v : v;
    curr.v = v + delta_v;
    for (ObjectState* s : {&prev, &curr}) {
        s->dx = margins.dx;
        s->dy = margins.dy;
        s->dv = margins.dv;
        s->dtheta = margins.dtheta;
    }
    return !check_plausibility(prev, curr, params).plausible;
}

/// Smallest detectable magnitude in (0, limit], or +inf. `sign` selects the
/// error direction. Bisection at kScanResolution.
double scan_direction(double v, double dt, double sign, double limit,
                      SpeedErrorKind kind, const SpeedErrorMargins& margins,
                      const PlausibilityParams& params) {
    if (limit <= 0.0 ||
        !speed_error_detected(v, dt, sign * limit, kind, margins, params)) {
        return std::numeric_limits<double>::infinity();
    }
    double lo = 0.0;  // not detected
    double hi = limit;  // detected
    while (hi - lo > kScanResolution) {
        const double mid = (lo + hi) / 2.0;
        if (speed_error_detected(v, dt, sign * mid, kind, margins, params)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

SpeedErrorThreshold min_detectable_speed_error(double v, double dt,
                                               SpeedErrorKind kind,
                                               const SpeedErrorMargins& margins,
                                               const PlausibilityParams& params) {
    SpeedErrorThreshold out;
    out.positive = scan_direction(v, dt, +1.0, kScanBracket, kind, margins, params);
    // negative errors cannot push the reported speed below zero
    out.negative = scan_direction(v, dt, -1.0, std::min(kScanBracket, v), kind,
                                  margins, params);
    return out;
}

double transient_speed_error_closed_form(double dt, double dv_margin,
                                         const PlausibilityParams& params) {
    return std::min(params.a_acc, -params.a_br) * dt +
           std::sqrt(2.0) * dv_margin;
}

}  // namespace percmon
