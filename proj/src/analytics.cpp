#include "spenla/analytics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spenla/fock.hpp"

namespace spenla {
namespace {

// The matched-t2 forms blow up or lose all precision against the interval
// ends, so evaluation closer than kBoundaryTol to 0 or 1 is refused outright
// instead of returning garbage.
void check_t1(double t1) {
    if (!(t1 > kBoundaryTol && t1 < 1.0 - kBoundaryTol))
        throw std::domain_error("t1 = " + std::to_string(t1) +
                                " is outside the supported open interval (0, 1)");
}

void check_a_open(double a) {
    if (!(a > 0.0 && a < 1.0))
        throw std::domain_error("entanglement amplitude a must lie strictly between 0 and 1");
}

void check_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("eta must lie in [0, 1]");
}

double denom(double a, double t1) {
    const double a2 = a * a;
    return a2 - 2.0 * a2 * t1 + t1;
}

}  // namespace

double p1_closed(double a, double t1) {
    check_a_open(a);
    check_t1(t1);
    const double a2 = a * a;
    const double b2 = 1.0 - a2;
    const double d = denom(a, t1);
    return 2.0 * a2 * b2 * b2 * t1 * t1 * t1 * (1.0 - t1) / (d * d);
}

double p2_closed(double a, double t1) {
    check_a_open(a);
    check_t1(t1);
    const double b2 = 1.0 - a * a;
    const double d = denom(a, t1);
    const double t1sq = t1 * t1;
    return t1sq * t1sq * b2 * b2 / (d * d);
}

double pt_closed(double eta, double a, double t1) {
    check_eta(eta);
    return eta * p1_closed(a, t1) + (1.0 - eta) * p2_closed(a, t1);
}

double eta_out_closed(double eta, double a, double t1) {
    check_eta(eta);
    check_a_open(a);
    check_t1(t1);
    const double signal = 2.0 * eta * a * a * (1.0 - t1);
    return signal / (signal + (1.0 - eta) * t1);
}

double gain_closed(double eta, double a, double t1) {
    check_eta(eta);
    if (eta == 0.0)
        throw std::domain_error("gain is undefined at eta = 0");
    check_a_open(a);
    check_t1(t1);
    const double num = 2.0 * a * a * (1.0 - t1);
    return num / (eta * num + (1.0 - eta) * t1);
}

double t1_threshold(double a) {
    if (!(a > 0.0 && a <= 1.0))
        throw std::domain_error("a must lie in (0, 1] for the threshold");
    const double a2 = a * a;
    return 2.0 * a2 / (1.0 + 2.0 * a2);
}

double g_limit(double eta) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::domain_error("eta must lie in (0, 1] for the small-t1 gain limit");
    return 1.0 / eta;
}

double p1_general(double a, double t1, double t2) {
    if (!(a >= 0.0 && a <= 1.0))
        throw std::domain_error("a must lie in [0, 1]");
    if (!(t1 >= 0.0 && t1 <= 1.0 && t2 >= 0.0 && t2 <= 1.0))
        throw std::domain_error("transmissivities must lie in [0, 1]");
    const double a2 = a * a;
    const double b2 = 1.0 - a2;
    return a2 * t1 * t2 * t2 * (1.0 - t1) + b2 * t1 * t1 * t2 * (1.0 - t2);
}

double p2_general(double t1, double t2) {
    if (!(t1 >= 0.0 && t1 <= 1.0 && t2 >= 0.0 && t2 <= 1.0))
        throw std::domain_error("transmissivities must lie in [0, 1]");
    return t1 * t1 * t2 * t2;
}

ClosedFormReport closed_report(double eta, double a, double t1) {
    ClosedFormReport report{};
    report.p1 = p1_closed(a, t1);
    report.p2 = p2_closed(a, t1);
    report.p_total = pt_closed(eta, a, t1);
    report.eta_out = eta_out_closed(eta, a, t1);
    if (eta > 0.0) report.gain = gain_closed(eta, a, t1);
    return report;
}

}  // namespace spenla
