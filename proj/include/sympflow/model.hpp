#pragma once

#include "sympflow/poisson.hpp"

#include <optional>
#include <vector>

namespace sympflow {

/// One Wiener channel. A plain channel carries a single generating function F
/// and drives one increment dQ; a conjugate pair carries (F, G) and drives a
/// canonically conjugate increment pair (dQ, dP).
struct NoiseChannel {
    Polynomial F;
    std::optional<Polynomial> G;

    bool is_pair() const { return G.has_value(); }

    static NoiseChannel plain(Polynomial f) { return {std::move(f), std::nullopt}; }
    static NoiseChannel conjugate_pair(Polynomial f, Polynomial g) {
        return {std::move(f), std::move(g)};
    }
};

/// Particular solution used for the gauge field u with prescribed divergence.
enum class GaugeChoice {
    /// u = (0, Phi) with Phi the p-antiderivative of the divergence,
    /// Phi(q, 0) = 0. Reproduces u.grad = -gamma p d/dp for constant
    /// divergence -gamma.
    PAntiderivative,
};

/// A stochastic phase-space model: Hamiltonian, noise channels, action scale
/// s (entering only through conjugate pairs) and the gauge fixing.
struct ModelSpec {
    Polynomial hamiltonian;
    std::vector<NoiseChannel> channels;
    Rational action_scale = 1;
    GaugeChoice gauge = GaugeChoice::PAntiderivative;

    bool has_pairs() const;
    /// Throws DomainError unless action_scale > 0.
    void validate() const;
};

/// The Ito drift: Hamiltonian part plus the 1/2 {dF/d., F} corrections from
/// every generating function, plus the gauge field for conjugate pairs.
VectorField drift_field(const ModelSpec& model);

/// Gauge field u with div u = -s^{-1} sum over pairs {F_k, G_k}; the zero
/// field for models without conjugate pairs.
VectorField gauge_field(const ModelSpec& model);

/// Lf = {f,H} + 1/2 sum {{f,F_k},F_k} (+ {{f,G_k},G_k} for pairs) + u.grad f.
Polynomial apply_generator(const ModelSpec& model, const Polynomial& f);

/// L{f,g} - {Lf,g} - {f,Lg}.
Polynomial dissipation(const ModelSpec& model, const Polynomial& f, const Polynomial& g);

/// Squared-field defect L(fg) - L(f)g - fL(g); zero iff L is first order.
Polynomial squared_field(const ModelSpec& model, const Polynomial& f, const Polynomial& g);

/// Dissipation assembled channel by channel:
/// sum {{f,F_k},{g,F_k}} + sum over pairs {{f,G_k},{g,G_k}}
/// + s^{-1} sum over pairs {F_k,G_k} {f,g}.
/// Must agree exactly with dissipation(model, f, g) for every model.
Polynomial channelwise_dissipation(const ModelSpec& model, const Polynomial& f,
                                   const Polynomial& g);

/// Closed-form drift divergence -sum(F_qq F_pp - F_qp^2) for models with
/// plain channels only; throws DomainError if a conjugate pair is present.
Polynomial drift_divergence_from_channels(const ModelSpec& model);

}  // namespace sympflow
