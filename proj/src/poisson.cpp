#include "sympflow/poisson.hpp"

namespace sympflow {

Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g) {
    return f.derivative_q() * g.derivative_p() - g.derivative_q() * f.derivative_p();
}

VectorField hamiltonian_vector_field(const Polynomial& F) {
    return {F.derivative_p(), -F.derivative_q()};
}

Polynomial divergence(const VectorField& v) {
    return v.vq.derivative_q() + v.vp.derivative_p();
}

Polynomial lie_derivative(const VectorField& v, const Polynomial& f) {
    return v.vq * f.derivative_q() + v.vp * f.derivative_p();
}

std::optional<Polynomial> hamiltonian_of(const VectorField& v) {
    if (!divergence(v).is_zero()) return std::nullopt;
    // H(q,p) = int_0^p v^q(q,p') dp' - int_0^q v^p(q',0) dq'
    Polynomial h = v.vq.antiderivative_p();
    h -= v.vp.at_p_zero().antiderivative_q();
    return h;
}

Polynomial dissipation(const VectorField& v, const Polynomial& f, const Polynomial& g) {
    return lie_derivative(v, poisson_bracket(f, g)) -
           poisson_bracket(lie_derivative(v, f), g) -
           poisson_bracket(f, lie_derivative(v, g));
}

std::string to_string(const VectorField& v) {
    return "(" + to_string(v.vq) + ", " + to_string(v.vp) + ")";
}

}  // namespace sympflow
