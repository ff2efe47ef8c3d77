#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mbfpe/solutions.hpp"

namespace mbfpe {

/// Uniform cell-centred grid on a finite z-interval.
struct ZGrid {
    double z_lo = 0.0;
    double z_hi = 0.0;
    std::size_t n_cells = 0;
    std::vector<double> centers;
    std::vector<double> faces;

    double spacing() const { return (z_hi - z_lo) / static_cast<double>(n_cells); }

    static ZGrid uniform(double z_lo, double z_hi, std::size_t n_cells);
};

/// Cell averages of u(z, s), where W(x, t) = t^{-alpha} u(x / t^alpha, ln t).
struct FieldOnGrid {
    std::vector<double> values;
    double time_s = 0.0;
    std::vector<double> mass_history;
};

double mass(const ZGrid& grid, std::span<const double> u);

/// L1 distance sum_i |a_i - b_i| dz.
double l1_distance(const ZGrid& grid, std::span<const double> a, std::span<const double> b);

/// Tridiagonal finite-volume operator L with du/ds = L u for
///   du/ds = d/dz [ (alpha z - rho1) u + d/dz (rho2 u) ].
///
/// The flux between cells i and i+1 is written F = rho2 (u' - f u) with
/// f = (rho1 - rho2' - alpha z) / rho2 and discretized with exponential
/// (Scharfetter-Gummel / Chang-Cooper) weights:
///   F_{i+1/2} = rho2(z_{i+1/2}) / dz * [ B(w) u_{i+1} - B(-w) u_i ],  B(w) = w / (e^w - 1),
/// where w is the integral of f between the two cell centres. Both boundary
/// faces carry zero flux.
class DiscreteOperator {
public:
    DiscreteOperator(ZGrid grid, std::vector<double> face_w, std::vector<double> face_diffusion);

    const ZGrid& grid() const { return grid_; }
    std::span<const double> lower() const { return lower_; }
    std::span<const double> diag() const { return diag_; }
    std::span<const double> upper() const { return upper_; }
    std::span<const double> face_exponents() const { return w_; }

    std::vector<double> apply(std::span<const double> u) const;

    /// Fluxes on all n+1 faces; the two boundary entries are zero.
    std::vector<double> face_fluxes(std::span<const double> u) const;

    /// Sum over rows of each column of L; zero for a conservative operator.
    std::vector<double> column_sums() const;

    /// Discrete density with every interior face flux equal to zero, unit mass.
    std::vector<double> stationary_state() const;

private:
    ZGrid grid_;
    std::vector<double> w_;
    std::vector<double> plus_;   // coefficient of u_{i+1} in F_{i+1/2}
    std::vector<double> minus_;  // coefficient of u_i in F_{i+1/2}
    std::vector<double> lower_;
    std::vector<double> diag_;
    std::vector<double> upper_;
};

/// Exponential-fitting weight B(w) = w / (e^w - 1).
double bernoulli_weight(double w);

/// Grid over the solution's z-support; an unbounded end is truncated where
/// the remaining mass drops below tail_mass.
ZGrid solution_grid(const SimilaritySolution& sol, std::size_t n_cells, double tail_mass = 1e-12);

/// Builds the operator from rho1 and rho2 only. Finite grid ends must coincide
/// with the domain boundaries; the grid may truncate an unbounded end.
DiscreteOperator transformed_operator(const SimilaritySolution& sol, const ZGrid& grid);

using EvolveObserver = std::function<void(const FieldOnGrid&)>;

/// Implicit Euler in s from u0.time_s to s_end with steps no larger than ds.
///
/// The step matrix I - ds L is a column-diagonally-dominant M-matrix, so mass
/// is conserved to rounding and the update stays nonnegative. Throws
/// PositivityError if a negative value ever appears.
FieldOnGrid evolve(const DiscreteOperator& op, const FieldOnGrid& u0, double s_end, double ds,
                   const EvolveObserver& observer = {});

/// Largest |m_{k+1} - m_k| / m_k over the recorded mass history.
double max_relative_mass_drift(const FieldOnGrid& field);

/// Exact cell averages of the normalized y.
std::vector<double> cell_averages(const SimilaritySolution& sol, const ZGrid& grid);

/// Normalized y evaluated at cell centres.
std::vector<double> sampled_profile(const SimilaritySolution& sol, const ZGrid& grid);

FieldOnGrid uniform_field(const ZGrid& grid, double s0 = 0.0);

/// Normalized triangle with its apex at the given fraction of the grid width.
FieldOnGrid triangle_field(const ZGrid& grid, double apex_fraction, double s0 = 0.0);

/// Central-difference residual dW/dt + d/dx(D1 W) - d2/dx2(D2 W) of the closed-form W at (x, t).
double fpe_residual_at(const SimilaritySolution& sol, double x, double t, double h, double dt);

/// Max-norm of fpe_residual_at over nine interior probes (tenths of the support) at time t.
double residual_original_coordinates(const SimilaritySolution& sol, double x_grid_step, double t,
                                     double dt);

}  // namespace mbfpe
