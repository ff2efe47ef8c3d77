#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mbfpe/scaling.hpp"

namespace mbfpe {

/// Two moving boundaries z1 t^alpha <= x <= z2 t^alpha.
struct ClassI {
    double z1;
    double z2;
    double a1;
    double a2;
    bool operator==(const ClassI&) const = default;
};

/// Fixed boundary at x = 0, moving boundary at z2 t^alpha.
struct ClassII {
    double z2;
    double a1;
    double a2;
    double beta;
    bool operator==(const ClassII&) const = default;
};

/// Moving boundary at z1 t^alpha, unbounded above.
struct ClassIII {
    double z1;
    double a1;
    double a2;
    double beta;
    bool operator==(const ClassIII&) const = default;
};

enum class ClassKind { I, II, III };

using ClassParams = std::variant<ClassI, ClassII, ClassIII>;

struct SolutionClass {
    ClassParams params;
    /// Reflected through x -> -x onto the negative half-line. Class I never
    /// needs this flag: its mirror is another Class I parameter set.
    bool mirrored = false;

    ClassKind kind() const { return static_cast<ClassKind>(params.index()); }
    bool operator==(const SolutionClass&) const = default;
};

/// Throws DomainError when a class invariant is violated.
void validate(const SolutionClass& sc);

/// Image under x -> -x.
SolutionClass mirror(const SolutionClass& sc);

enum class ClassISubclass {
    same_sign,        ///< (i)   z1, z2 both nonzero with equal sign
    endpoint_at_zero, ///< (ii)  one endpoint is the fixed point 0
    straddles_zero,   ///< (iii) z1 < 0 < z2
};

ClassISubclass subclass_of(const ClassI& p);

std::string_view to_string(ClassKind k);

/// One factor (sign * (z - root))^power of the unnormalized profile.
struct LinearFactor {
    double sign;
    double root;
    double power;
};

/// y(z) proportional to prod_k (s_k (z - r_k))^{p_k} exp(gamma z); rho2(z) = prod_k s_k (z - r_k).
/// All three classes and their mirror images share this form.
struct ProfileShape {
    std::array<LinearFactor, 2> factors;
    double gamma;

    double log_y(double z) const;
    double dlog_y(double z) const;
    double d2log_y(double z) const;
    double rho2(double z) const;
    double rho2_prime(double z) const;
    double rho2_second() const;
};

enum class NormSource { closed_form, quadrature };

struct Interval {
    double lo;
    double hi;
};

class SimilaritySolution {
public:
    SimilaritySolution(double alpha, const SolutionClass& params);

    const ScalingExponents& exponents() const { return exponents_; }
    double alpha() const { return exponents_.alpha; }
    const SolutionClass& class_params() const { return params_; }
    const ScaleInvariantProfile& profile() const { return profile_; }
    const ProfileShape& shape() const { return shape_; }
    double z_lo() const { return profile_.z_lo; }
    double z_hi() const { return profile_.z_hi; }

    double norm_A() const { return norm_A_; }
    double log_norm_A() const { return log_norm_A_; }
    NormSource norm_A_source() const { return norm_source_; }
    std::optional<double> closed_form_A() const { return closed_form_A_; }
    double quadrature_A() const { return quadrature_A_; }

    /// Unnormalized log y; -inf at finite boundaries and outside the domain.
    double log_y_unnormalized(double z) const;
    /// Normalized A y(z); 0 outside the domain.
    double y(double z) const;
    double dlog_y(double z) const { return shape_.dlog_y(z); }
    double d2log_y(double z) const { return shape_.d2log_y(z); }

    double rho1(double z) const { return profile_.rho1(z); }
    double rho2(double z) const { return shape_.rho2(z); }

    /// Characteristic z-width of the profile; sets quadrature scales on half-lines.
    double z_scale() const { return z_scale_; }

    /// Finite z-interval outside of which the normalized mass is below tail_mass.
    /// Equal to the domain for classes with two finite endpoints.
    Interval finite_support(double tail_mass = 1e-12) const;

    bool drift_overridden() const { return drift_overridden_; }

    friend SimilaritySolution with_drift(const SimilaritySolution& sol, RealFn rho1,
                                         RealFn rho1_prime);

private:
    ScalingExponents exponents_;
    SolutionClass params_;
    ProfileShape shape_;
    ScaleInvariantProfile profile_;
    double z_scale_ = 1.0;
    double norm_A_ = 0.0;
    double log_norm_A_ = 0.0;
    NormSource norm_source_ = NormSource::closed_form;
    std::optional<double> closed_form_A_;
    double quadrature_A_ = 0.0;
    bool drift_overridden_ = false;
};

SimilaritySolution build_solution(double alpha, const SolutionClass& params);

/// Same model with the drift profile replaced; used to confirm that the
/// identity checks detect an inconsistent rho1.
SimilaritySolution with_drift(const SimilaritySolution& sol, RealFn rho1, RealFn rho1_prime);

/// Moving domain (z_lo t^alpha, z_hi t^alpha); infinite ends pass through.
Interval boundary_positions(const SimilaritySolution& sol, double t);

/// W(x, t) = t^{-alpha} A y(x / t^alpha) inside the moving domain, 0 elsewhere.
double density(const SimilaritySolution& sol, double x, double t);

/// J(x, t) = (alpha / t) x W(x, t).
double current(const SimilaritySolution& sol, double x, double t);

/// J = D1 W - d/dx (D2 W) with the x-derivative taken analytically.
double current_from_definition(const SimilaritySolution& sol, double x, double t);

struct Coefficients {
    double drift;
    double diffusion;
};

/// (D1, D2) = (t^{alpha-1} rho1(z), t^{2 alpha-1} rho2(z)) on the closed moving domain.
Coefficients coefficients(const SimilaritySolution& sol, double x, double t);

/// k-th moment of W(., t) by quadrature.
double moment(const SimilaritySolution& sol, int k, double t);

/// Residual of an identity together with the sum of its term magnitudes.
struct IdentityResidual {
    double residual;
    double scale;
};

/// rho2 y' + (rho2' - rho1 + alpha z) y, which vanishes for C = 0.
IdentityResidual first_integral_residual(const SimilaritySolution& sol, double z);

/// Reduced second-order ODE in z applied to the normalized y.
IdentityResidual reduced_ode_residual(const SimilaritySolution& sol, double z);

/// n points strictly inside the (finite) support, evenly spaced.
std::vector<double> interior_points(const SimilaritySolution& sol, std::size_t n);

struct FigurePreset {
    std::string name;
    double alpha;
    SolutionClass params;
    std::vector<double> times;
};

const std::vector<FigurePreset>& figure_presets();

/// Throws DomainError for unknown names.
const FigurePreset& figure_preset(std::string_view name);

}  // namespace mbfpe
