#include "sympflow/model.hpp"

#include "sympflow/errors.hpp"

namespace sympflow {

namespace {
const Rational kHalf = Rational(1, 2);
}

bool ModelSpec::has_pairs() const {
    for (const auto& ch : channels)
        if (ch.is_pair()) return true;
    return false;
}

void ModelSpec::validate() const {
    if (action_scale <= 0) throw DomainError("action scale s must be strictly positive");
}

VectorField gauge_field(const ModelSpec& model) {
    model.validate();
    Polynomial phi;
    for (const auto& ch : model.channels)
        if (ch.is_pair()) phi += poisson_bracket(ch.F, *ch.G);
    if (phi.is_zero()) return {};
    phi *= -1 / model.action_scale;
    // GaugeChoice::PAntiderivative is the only fixing implemented
    return {Polynomial::zero(), phi.antiderivative_p()};
}

VectorField drift_field(const ModelSpec& model) {
    model.validate();
    Polynomial vq = model.hamiltonian.derivative_p();
    Polynomial vp = -model.hamiltonian.derivative_q();
    auto add_correction = [&](const Polynomial& F) {
        vq += kHalf * poisson_bracket(F.derivative_p(), F);
        vp -= kHalf * poisson_bracket(F.derivative_q(), F);
    };
    for (const auto& ch : model.channels) {
        add_correction(ch.F);
        if (ch.is_pair()) add_correction(*ch.G);
    }
    if (model.has_pairs()) {
        const VectorField u = gauge_field(model);
        vq += u.vq;
        vp += u.vp;
    }
    return {vq, vp};
}

Polynomial apply_generator(const ModelSpec& model, const Polynomial& f) {
    model.validate();
    Polynomial out = poisson_bracket(f, model.hamiltonian);
    for (const auto& ch : model.channels) {
        out += kHalf * poisson_bracket(poisson_bracket(f, ch.F), ch.F);
        if (ch.is_pair()) out += kHalf * poisson_bracket(poisson_bracket(f, *ch.G), *ch.G);
    }
    if (model.has_pairs()) out += lie_derivative(gauge_field(model), f);
    return out;
}

Polynomial dissipation(const ModelSpec& model, const Polynomial& f, const Polynomial& g) {
    return apply_generator(model, poisson_bracket(f, g)) -
           poisson_bracket(apply_generator(model, f), g) -
           poisson_bracket(f, apply_generator(model, g));
}

Polynomial squared_field(const ModelSpec& model, const Polynomial& f, const Polynomial& g) {
    return apply_generator(model, f * g) - apply_generator(model, f) * g -
           f * apply_generator(model, g);
}

Polynomial channelwise_dissipation(const ModelSpec& model, const Polynomial& f,
                                   const Polynomial& g) {
    model.validate();
    Polynomial out;
    Polynomial pair_bracket_sum;
    for (const auto& ch : model.channels) {
        out += poisson_bracket(poisson_bracket(f, ch.F), poisson_bracket(g, ch.F));
        if (ch.is_pair()) {
            out += poisson_bracket(poisson_bracket(f, *ch.G), poisson_bracket(g, *ch.G));
            pair_bracket_sum += poisson_bracket(ch.F, *ch.G);
        }
    }
    if (!pair_bracket_sum.is_zero())
        out += (1 / model.action_scale) * pair_bracket_sum * poisson_bracket(f, g);
    return out;
}

Polynomial drift_divergence_from_channels(const ModelSpec& model) {
    Polynomial out;
    for (const auto& ch : model.channels) {
        if (ch.is_pair())
            throw DomainError(
                "drift_divergence_from_channels applies to plain channels only; "
                "conjugate pairs follow the gauge divergence law");
        const Polynomial fqq = ch.F.derivative_q().derivative_q();
        const Polynomial fpp = ch.F.derivative_p().derivative_p();
        const Polynomial fqp = ch.F.derivative_q().derivative_p();
        out -= fqq * fpp - fqp * fqp;
    }
    return out;
}

}  // namespace sympflow
