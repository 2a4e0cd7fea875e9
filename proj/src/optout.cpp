#include "sbrp/optout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sbrp/errors.hpp"

namespace sbrp {

double optout_probability(const OptOutModel& model, double d, double tau) {
    const double z = model.a * d + model.b * tau + model.c;
    if (z > 700.0) return 0.0;
    if (z < -700.0) return 1.0;
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

OptOutModel calibrate(const CalibrationAnchors& an) {
    if (!(an.d_close < an.d_far)) fail("DomainError", "calibration requires d_close < d_far");
    if (!(an.tau_low < an.tau_high)) fail("DomainError", "calibration requires tau_low < tau_high");
    if (!(an.p_low < an.p_high)) fail("DomainError", "calibration requires p_low < p_high");
    if (!(an.p_high > 0.0 && an.p_high < 1.0 && an.p_low > 0.0 && an.p_low < 1.0))
        fail("DomainError", "calibration probabilities must lie in (0,1)");
    if (!(an.epsilon0 > 0.0 && an.epsilon0 < an.p_low))
        fail("DomainError", "calibration requires 0 < epsilon0 < p_low");

    const double c = std::log(1.0 / an.epsilon0 - 1.0);
    const double r1 = std::log(1.0 / an.p_high - 1.0) - c;
    const double r2 = std::log(1.0 / an.p_low - 1.0) - c;

    const double det = an.d_close * an.tau_low - an.tau_high * an.d_far;
    if (det == 0.0) fail("InfeasibleCalibration", "anchor system is singular");
    const double a = (r1 * an.tau_low - an.tau_high * r2) / det;
    const double b = (an.d_close * r2 - r1 * an.d_far) / det;

    if (!(a > 0.0) || !(b < 0.0)) {
        fail("InfeasibleCalibration",
             "anchors solve to a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                 " violating a>0, b<0");
    }
    return OptOutModel{a, b, c};
}

std::vector<double> draw_optout_uniforms(std::size_t n_students, Rng& rng) {
    std::vector<double> u(n_students);
    for (auto& v : u) v = rng.uniform01();
    return u;
}

std::vector<int> optouts_from_uniforms(const Instance& inst, const OptOutModel& model,
                                       double tau, const std::vector<double>& uniforms) {
    if (uniforms.size() != inst.students.size())
        fail("DomainError", "uniform count != student count");

    std::vector<int> order(inst.students.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return inst.students[static_cast<std::size_t>(a)].id <
               inst.students[static_cast<std::size_t>(b)].id;
    });

    std::vector<int> out;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const int i = order[k];
        const double theta =
            optout_probability(model, inst.students[static_cast<std::size_t>(i)].dist_school, tau);
        if (uniforms[k] < theta) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> sample_optouts(const Instance& inst, const OptOutModel& model, double tau,
                                Rng& rng) {
    const auto uniforms = draw_optout_uniforms(inst.students.size(), rng);
    return optouts_from_uniforms(inst, model, tau, uniforms);
}

}  // namespace sbrp
