#pragma once

#include <optional>
#include <string>

#include "fbcsf/curve.hpp"

namespace fbcsf {

// Admissible comparison modulus phi on [0,1]: symmetric about 1/2, strictly
// concave, |phi'| < 1. Construction verifies the properties by sampling and
// rejects inadmissible functions.
class ComparisonFunction {
public:
    // phi(z) = c (sin((pi - eps) z + eps/2) - sin(eps/2))
    static ComparisonFunction barrier(double c, double eps);
    // phi(z) = c e^{-4 pi^2 tau} sin(pi z)
    static ComparisonFunction scaled_sine(double c, double tau);
    // Values on a uniform grid over [0,1], interpolated by a cubic spline.
    static ComparisonFunction tabulated(std::vector<double> values);

    double value(double zeta) const;
    double deriv(double zeta) const;
    double second_deriv(double zeta) const;

    const std::string& kind() const { return kind_; }
    double param_c() const { return c_; }
    double param_eps() const { return eps_; }
    double param_tau() const { return tau_; }

private:
    ComparisonFunction() = default;
    void verify_admissible() const;

    std::string kind_;
    double c_ = 0.0, eps_ = 0.0, tau_ = 0.0;
    // tabulated data
    std::vector<double> tab_;
    std::vector<double> tab_m_;  // spline second derivatives
};

enum class ProfileBranch { classical, reflected, empty };

struct ProfileBin {
    double delta = kNaN;   // completed arclength of the minimising pair
    double psi = kInf;     // bin minimum of the completed chordlength
    ProfileBranch branch = ProfileBranch::empty;
    DoubledIndex a, b;
};

struct ProfileReport {
    std::vector<ProfileBin> bins;
    double doubled_length = 0.0;

    // Populated when a comparison function was supplied to the scan.
    bool has_z = false;
    double min_z = kNaN;             // over off-diagonal pairs of the double
    DoubledIndex argmin_a, argmin_b;
    double argmin_l = kNaN, argmin_d = kNaN;
    ProfileBranch argmin_branch = ProfileBranch::empty;
    std::optional<AngleData> angle_check;
    double angle_residual = kNaN;
    std::optional<ReflectedDistanceResult> snell_data;
};

// Z(a, b) = d(a,b) - L_double * phi(l(a,b) / L_double).
double evaluate_Z(const DoubledCurve& dc, const ComparisonFunction& phi, DoubledIndex a,
                  DoubledIndex b);

// Exhaustive ordered pair scan over the double, binned uniformly in the
// completed arclength over [0, L_double/2]. Deterministic order.
ProfileReport extended_profile(const DoubledCurve& dc, int n_bins,
                               const ComparisonFunction* phi = nullptr);

// min over off-diagonal pairs of Z, with its argmin.
struct MinZResult {
    double value = kInf;
    DoubledIndex a, b;
    double l = 0.0, d = 0.0;
};
MinZResult min_Z(const DoubledCurve& dc, const ComparisonFunction& phi);

// min over off-diagonal pairs of d / l (chord-arc ratio of the double).
double min_chord_arc_ratio(const DoubledCurve& dc);

// First/second derivative conditions at a zero minimum of Z
// (interior two-sided, reflected, or endpoint case).
struct MinimumConditionReport {
    enum class Outcome {
        case_a,                    // same-sign pair (or endpoint pair)
        case_b,                    // reflected pair, interior
        inconclusive_min_not_zero, // |min Z| above the zero tolerance
        inconclusive_diagonal,     // argmin hugs the diagonal
        skipped_crossover          // reflected argmin at l = L/2 exactly
    };
    Outcome outcome = Outcome::inconclusive_min_not_zero;
    bool pass = false;
    double h = 0.0;          // max edge length
    double tol_angle = 0.0;  // 10 h
    double tol_ineq = 0.0;   // 10 h / L^2

    AngleData angles;
    // case (a)
    double alpha_sum_residual = kNaN;     // |alpha_x + alpha_y - pi|
    double second_variation_a = kNaN;     // must be >= -tol_ineq
    // case (b)
    double beta_residual = kNaN;          // |beta_x - beta_y|
    double theta_residual = kNaN;         // |theta_x + theta_y|
    double sign_condition = kNaN;         // (1/dx + 1/dy) cos(th) + 2 kappa^S_z < 0
    double second_variation_b = kNaN;     // must be >= -tol_ineq
};

MinimumConditionReport check_minimum_conditions(const DoubledCurve& dc,
                                                const ComparisonFunction& phi,
                                                const ProfileReport& report);

}  // namespace fbcsf
