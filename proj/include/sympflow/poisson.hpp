#pragma once

#include "sympflow/polynomial.hpp"

#include <optional>

namespace sympflow {

/// A polynomial vector field (v^q, v^p) on phase space.
struct VectorField {
    Polynomial vq;
    Polynomial vp;

    friend bool operator==(const VectorField& a, const VectorField& b) {
        return a.vq == b.vq && a.vp == b.vp;
    }
};

/// {f, g} = f_q g_p - g_q f_p.
Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g);

/// (F_p, -F_q); applying the result as a first-order operator equals {., F}.
VectorField hamiltonian_vector_field(const Polynomial& F);

/// v^q_q + v^p_p.
Polynomial divergence(const VectorField& v);

/// v . grad f.
Polynomial lie_derivative(const VectorField& v, const Polynomial& f);

/// If v is divergence-free, the generating function H with H_p = v^q,
/// -H_q = v^p, normalized so H(0,0) = 0; otherwise empty.
std::optional<Polynomial> hamiltonian_of(const VectorField& v);

/// Dissipation of the first-order operator v.grad:
/// v.grad{f,g} - {v.grad f, g} - {f, v.grad g}.
Polynomial dissipation(const VectorField& v, const Polynomial& f, const Polynomial& g);

std::string to_string(const VectorField& v);

}  // namespace sympflow
