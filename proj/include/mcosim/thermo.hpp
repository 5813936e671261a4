// Copyright 2026 The mcosim Authors
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

#pragma once

/// Gibbs-state mathematics of a two-level system with Hamiltonian diag(0, E).
///
/// Energies are in natural units with the inverse temperature kept explicit;
/// entropies are in nats.

namespace mcosim {

/// Fixed environment of every computation: inverse temperature and the
/// boundary (initial = final) excited-level energy.
class ThermalContext {
public:
    /// Throws std::domain_error unless beta > 0 and e0 >= 0 (both finite).
    ThermalContext(double beta, double e0);

    /// Builds the context whose Gibbs population at the boundary energy is
    /// `p_beta`, which must lie in (0, 1/2].
    static ThermalContext from_gibbs_population(double beta, double p_beta);

    double beta() const noexcept { return beta_; }
    double e0() const noexcept { return e0_; }
    /// Excited-level population of the Gibbs state at e0; in (0, 1/2].
    double p_beta() const noexcept { return p_beta_; }

    bool operator==(const ThermalContext&) const = default;

private:
    double beta_;
    double e0_;
    double p_beta_;
};

/// Diagonal qubit state (1 - p, p). There is no coherence.
class QubitState {
public:
    /// Throws std::domain_error unless 0 <= p_excited <= 1.
    explicit QubitState(double p_excited);

    static QubitState ground() { return QubitState(0.0); }
    static QubitState excited() { return QubitState(1.0); }

    double excited_population() const noexcept { return p_; }
    double ground_population() const noexcept { return 1.0 - p_; }

    bool operator==(const QubitState&) const = default;

private:
    double p_;
};

/// g(E) = e^{-beta E} / (1 + e^{-beta E}); strictly decreasing, range (0, 1).
double gibbs_population(double energy, const ThermalContext& ctx);

/// Inverse of gibbs_population on (0, 1). p in {0, 1} has no finite energy
/// and throws std::domain_error.
double energy_of_population(double p, const ThermalContext& ctx);

/// Z_E = 1 + e^{-beta E}.
double partition_function(double energy, const ThermalContext& ctx);

/// Binary Shannon entropy in nats.
double entropy(const QubitState& state);

/// F(state, E) = p E - S(state) / beta.
double free_energy(const QubitState& state, double energy, const ThermalContext& ctx);

/// Free energy of the Gibbs state at energy E, i.e. -(1/beta) ln Z_E.
double gibbs_free_energy(double energy, const ThermalContext& ctx);

/// Integral of g over [e_from, e_to] in closed form, which equals
/// gibbs_free_energy(e_to) - gibbs_free_energy(e_from).
double gibbs_integral(double e_from, double e_to, const ThermalContext& ctx);

}  // namespace mcosim
