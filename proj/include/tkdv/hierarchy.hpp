#ifndef TKDV_HIERARCHY_HPP
#define TKDV_HIERARCHY_HPP

#include <tkdv/derivation.hpp>
#include <tkdv/lattice.hpp>

namespace tkdv
{

/// K_1 = w3 + lambda*w0*w1, K_{n+1} = d^2 K_n + (2 lambda/3) w0 K_n + (lambda/3) w1 d^-1 K_n.
DiffPoly kdv_generator(unsigned n, const Rational &lambda = Rational(1));

/// The w-only derivation with w^(0) -> p.
TameDerivation evolutionary(const EpsSeries &p);

/// D_p(q) - D_q(p) for w-only p, q.
DiffPoly r0_bracket(const DiffPoly &p, const DiffPoly &q);

/// Toda pair T_2 + 2 T_1, the combination vanishing at A = -2, B = 1.
LatticePair slow_pair();

/// Default overall factor applied to eps^-1 Phi D_{T2+2T1} Phi^-1 so that the eps^0 images are v1 - w1, w1 - v1.
Rational default_slow_scale();

/// scale * eps^-1 * conjugate(toda_to_eps(T_2 + 2 T_1)), known modulo eps^N.
TameDerivation slow_generator(int trunc, const Rational &scale = default_slow_scale());

/// conjugate(toda_to_eps(T_k)), known modulo eps^N; always divisible by eps.
TameDerivation conjugated_flow(unsigned k, int trunc);

/// eps^-1 * conjugate(toda_to_eps(T_k)), known modulo eps^N.
TameDerivation flow_generator(unsigned k, int trunc);

} // namespace tkdv

#endif
