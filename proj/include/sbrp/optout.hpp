#pragma once

#include <vector>

#include "sbrp/instance.hpp"
#include "sbrp/rng.hpp"

namespace sbrp {

// Logistic opt-out model theta(d, tau) = 1 / (1 + exp(a*d + b*tau + c)).
// a > 0: farther students keep riding; b < 0: larger incentives pull
// students out; c > 0: near-zero incentive means near-zero opt-out.
struct OptOutModel {
    double a = 2.0;     // per mile
    double b = -0.004;  // per USD
    double c = 6.0;
};

/// Numerically stable logistic evaluation; exponents past +-700 return the
/// exact limits 0 / 1.
double optout_probability(const OptOutModel& model, double d, double tau);

struct CalibrationAnchors {
    double d_close = 0.5;
    double p_high = 0.8;
    double tau_high = 2000.0;
    double d_far = 2.5;
    double p_low = 0.05;
    double tau_low = 250.0;
    double epsilon0 = 0.04;
};

/// Picks c so theta(0,0) = epsilon0, then solves the 2x2 linear system that
/// pins theta(d_close, tau_high) = p_high and theta(d_far, tau_low) = p_low.
/// Throws InfeasibleCalibration when the solved signs violate a>0 or b<0.
OptOutModel calibrate(const CalibrationAnchors& anchors);

/// Opt-out set for the incentive tau: one uniform draw per student in
/// ascending id order, student kept in the set when the draw falls under
/// theta_i. Returns indices into inst.students.
std::vector<int> sample_optouts(const Instance& inst, const OptOutModel& model, double tau,
                                Rng& rng);

/// Same decision rule with caller-supplied uniforms (index-aligned with
/// students sorted by id); this is what lets a sweep reuse one uniform per
/// student across every tau value.
std::vector<int> optouts_from_uniforms(const Instance& inst, const OptOutModel& model,
                                       double tau, const std::vector<double>& uniforms);

/// The per-student uniforms sample_optouts would consume, in id order.
std::vector<double> draw_optout_uniforms(std::size_t n_students, Rng& rng);

}  // namespace sbrp
