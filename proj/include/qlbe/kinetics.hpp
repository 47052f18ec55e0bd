// Copyright 2026 The qlbe-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QLBE_KINETICS_HPP
#define QLBE_KINETICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "qlbe/physcore.hpp"
#include "qlbe/quadrature.hpp"
#include "qlbe/structure_factor.hpp"
#include "qlbe/types.hpp"

namespace qlbe {

/// Collision kernel flavour: the exact MB structure factor, or its
/// small-energy-transfer limit (whose momentum diagonal is the Brownian-limit
/// master equation).
enum class KernelVariant { mb_exact, mb_limit };

/// Uniform 1D momentum grid for the banded coherence solver.
struct MomentumGrid1D {
    double p_min = -8.0;
    double p_max = 8.0;
    int count = 129;

    double spacing() const { return (p_max - p_min) / (count - 1); }
    double p(int i) const { return p_min + i * spacing(); }
};

std::optional<std::string> validate(const MomentumGrid1D& grid);

/// One coherence band of the momentum-representation statistical operator:
/// values[i] = rho(p_i, p_i - k) at fixed offset k. Bands with different k
/// never couple under a translation-covariant generator.
struct BandState {
    MomentumGrid1D grid;
    double offset_k = 0.0;
    VecXc values;
    GasSpec gas;
    ParticleSpec particle;
    PotentialSpec potential = GaussianFourierPotential{};
};

std::optional<std::string> validate(const BandState& state);

/// Trace of the diagonal (k = 0) band: sum of values times grid spacing.
double band_trace(const BandState& state);
/// l1 mass, sum |values| * spacing; non-increasing for k != 0 bands.
double band_l1_mass(const BandState& state);

/// Jump-process collision kernel of the momentum-space master equation:
/// jumps p -> p+q with intensity per d^3q
///   lambda(q|p) = (2 pi/hbar)(2 pi hbar)^3 n |t~(q)|^2 S(q, E(q,p)).
/// The sampler is exact rejection against a dominating radial envelope
/// ((1/q)*Gaussian for Gaussian potentials, (1/q) capped at the table end for
/// tabulated ones); the same envelope drives thinning in mc_evolve so the
/// pure-jump simulation needs no quadrature.
class CollisionKernel {
public:
    CollisionKernel(const GasSpec& gas, const ParticleSpec& particle,
                    const PotentialSpec& potential, KernelVariant variant,
                    const UnitSystem& units);

    const GasSpec& gas() const { return gas_; }
    const ParticleSpec& particle() const { return particle_; }
    const PotentialSpec& potential() const { return potential_; }
    const UnitSystem& units() const { return units_; }
    KernelVariant variant() const { return variant_; }
    const SpectralFunction& spectral() const { return spectral_; }

    /// (2 pi / hbar) (2 pi hbar)^3 n
    double prefactor() const { return prefactor_; }
    bool inert() const { return inert_; }

    /// lambda(q|p), pointwise.
    double jump_density(const Vec3& q, const Vec3& p) const;

    /// Total loss rate at momentum p, by radial quadrature with the angular
    /// integral in closed form (erf / sinh).
    double rate(const Vec3& p, const QuadratureSpec& quad = {}) const;

    /// Dominating proposal process for all |p| <= p_cap.
    struct Envelope {
        bool gaussian_radial = true; // radial intensity (1/q) e^(-gamma q^2) vs (1/q) on [0,q_cap]
        double amplitude = 0.0;      // A: h(q) = A (1/q) e^(-gamma q^2) or A (1/q)
        double gamma = 0.0;
        double q_cap = 0.0;
        double total_rate = 0.0; // integral of h over d^3q
        double p_cap = 0.0;      // validity range (inf when p-independent)

        Vec3 propose(std::mt19937_64& rng) const;
        double density(double q_mag) const;
    };
    Envelope make_envelope(double p_cap) const;

    /// One exact draw from the normalized density lambda(q|p)/rate(p).
    Vec3 sample_jump(const Vec3& p, std::mt19937_64& rng) const;

private:
    GasSpec gas_;
    ParticleSpec particle_;
    PotentialSpec potential_;
    UnitSystem units_;
    KernelVariant variant_;
    SpectralFunction spectral_;
    double prefactor_ = 0.0;
    bool inert_ = false;
};

/// Named constructor mirroring the rest of the operation set.
CollisionKernel kernel_build(const GasSpec& gas, const ParticleSpec& particle,
                             const PotentialSpec& potential, KernelVariant variant,
                             const UnitSystem& units);

/// One stochastic trajectory of the diagonal kinetic equation, recorded on a
/// fixed snapshot time grid (strictly increasing, t = 0 and t = T included).
struct Trajectory {
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<Vec3> momenta;
    std::int64_t jump_count = 0;
};

struct DiagonalEnsemble {
    std::vector<Trajectory> trajectories;
    double horizon = 0.0;
    KernelVariant variant = KernelVariant::mb_exact;
};

using InitialSampler = std::function<Vec3(std::mt19937_64&)>;

/// Ensemble of pure-jump trajectories: exponential waiting times with
/// state-dependent rate, jumps drawn from the collision kernel. Exact
/// simulation by thinning against the kernel envelope. Trajectory i is seeded
/// with trajectory_seed(seed, i); results are independent of thread count.
DiagonalEnsemble mc_evolve(const CollisionKernel& kernel, const Vec3& initial,
                           double horizon, int n_traj, std::uint64_t seed,
                           int snapshots = 51);
DiagonalEnsemble mc_evolve(const CollisionKernel& kernel, const InitialSampler& initial,
                           double horizon, int n_traj, std::uint64_t seed,
                           int snapshots = 51);

/// Maxwell momentum draw at mass and inverse temperature (component variance
/// mass/beta).
Vec3 maxwell_sample(double mass, double beta, std::mt19937_64& rng);

/// Ensemble mean momentum at snapshot index k.
Vec3 ensemble_mean(const DiagonalEnsemble& ensemble, int snapshot);
/// One Cartesian component of every trajectory at snapshot index k.
std::vector<double> ensemble_component(const DiagonalEnsemble& ensemble, int snapshot,
                                       int component);

/// Banded 1D evolution of the coherence vector rho_k(p) under the
/// translation-covariant generator: RK4 with loss
///   sum_j w_j (S(q_j,E(q_j,p)) + S(q_j,E(q_j,p-k)))/2
/// and gain from p - q_j weighted by
///   sqrt(S(q_j,E(q_j,p-q_j))) sqrt(S(q_j,E(q_j,p-k-q_j))),
/// q_j on the symmetric grid lattice (1D analogue of the 3D kernel: same
/// functional weights and prefactor, q integrated over one dimension).
/// Throws NumericError before stepping if dt * max-rate >= 0.1.
BandState band_evolve(const BandState& state, const CollisionKernel& kernel, double dt,
                      int steps);

/// Translation-covariance residual: a translation by a multiplies band k by
/// the constant phase e^(-i k a / hbar); the residual is
/// max |evolve(phase*state) - phase*evolve(state)| over all bands.
double covariance_test(const CollisionKernel& kernel, const std::vector<BandState>& bands,
                       double shift_a, double dt, int steps);

} // namespace qlbe

#endif
