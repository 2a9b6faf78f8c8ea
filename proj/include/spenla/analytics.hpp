#pragma once

// Closed-form success probabilities and amplification gain for the heralded
// protocol, written directly from the algebra with no reference to the
// simulator.  The simulator and these formulas cross-check each other.
//
// Parameters: `a` is the amplitude of the "photon at Alice" branch of the
// entangled input (b = sqrt(1-a^2) implied), t1/t2 the two beam splitter
// transmissivities, eta the probability that the photon survived the channel.
// The matched forms assume t2 chosen so both retained arms end up balanced:
//   t2 = t1 (1-a^2) / (a^2 - 2 a^2 t1 + t1).

#include <optional>

namespace spenla {

// Success probability of the signal branch under matched t2:
//   p1 = 2 a^2 (1-a^2)^2 t1^3 (1-t1) / (a^2 - 2 a^2 t1 + t1)^2
double p1_closed(double a, double t1);

// Success probability of the photon-lost branch under matched t2:
//   p2 = t1^4 (1-a^2)^2 / (a^2 - 2 a^2 t1 + t1)^2
double p2_closed(double a, double t1);

// p_t = eta * p1 + (1-eta) * p2, computed literally from the two forms above.
double pt_closed(double eta, double a, double t1);

// Fraction of heralded events that still carry the photon:
//   eta' = 2 eta a^2 (1-t1) / (2 eta a^2 (1-t1) + (1-eta) t1)
double eta_out_closed(double eta, double a, double t1);

// Amplification gain g = eta'/eta, evaluated in its reduced form:
//   g = 2 a^2 (1-t1) / (2 eta a^2 (1-t1) + (1-eta) t1)
// Throws for eta = 0, where the gain is undefined.
double gain_closed(double eta, double a, double t1);

// g > 1 exactly when t1 < 2 a^2 / (1 + 2 a^2).
double t1_threshold(double a);

// lim_{t1 -> 0} g = 1/eta.
double g_limit(double eta);

// Pre-concentration forms valid for any t2 in [0, 1] (sums of the sixteen
// per-pattern probabilities); they reduce to the matched forms at matched t2.
double p1_general(double a, double t1, double t2);
double p2_general(double t1, double t2);

struct ClosedFormReport {
    double p1;
    double p2;
    double p_total;
    double eta_out;
    std::optional<double> gain;  // empty when eta = 0
};

// All matched-t2 metrics at one parameter point.
ClosedFormReport closed_report(double eta, double a, double t1);

}  // namespace spenla
