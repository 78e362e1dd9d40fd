#ifndef TKDV_POISSON_HPP
#define TKDV_POISSON_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <tkdv/lattice.hpp>
#include <tkdv/rational.hpp>
#include <tkdv/sparse_poly.hpp>

namespace tkdv
{

/// Element of Q[zeta]/(1 + zeta + ... + zeta^{N-1}), N prime. N = 0 marks a plain rational that
/// adopts the modulus of whatever it meets.
class Cyclotomic
{
public:
    Cyclotomic(long v = 0) : c_{Rational(v)} {}
    Cyclotomic(const Rational &v) : c_{v} {}

    /// zeta^k in the ring of order n.
    static Cyclotomic zeta_power(int n, long k);

    int modulus() const
    {
        return n_;
    }
    /// Coefficients on 1, zeta, ..., zeta^{N-2}.
    std::vector<Rational> coefficients() const;
    bool is_zero() const;

    Cyclotomic &operator+=(const Cyclotomic &o);
    Cyclotomic &operator-=(const Cyclotomic &o);
    Cyclotomic &operator*=(const Cyclotomic &o);
    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic &b)
    {
        return a += b;
    }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic &b)
    {
        return a -= b;
    }
    friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic &b)
    {
        return a *= b;
    }
    Cyclotomic operator-() const;
    bool operator==(const Cyclotomic &o) const;

private:
    int n_ = 0;
    std::vector<Rational> c_; // n_ entries with c_[n_-1] = 0, or one entry when n_ = 0

    void promote(int n);
    void normalize();
};

std::string to_string(const Cyclotomic &z);

struct PoissonTag;
using PoissonPoly = SparsePoly<Cyclotomic, PoissonTag>;

enum class BracketId { P1, P2 };

std::string to_string(BracketId id);

/// Polynomials in A_0..A_{N-1}, B_0..B_{N-1} with one of the two quadratic brackets.
class CyclicPoissonAlgebra
{
public:
    /// `modified` evaluates the structure polynomials at A -> -2 + A/N^2, B -> 1 + B/N^2.
    CyclicPoissonAlgebra(int n, BracketId id, bool modified = false);

    int size() const
    {
        return n_;
    }
    BracketId id() const
    {
        return id_;
    }
    bool modified() const
    {
        return modified_;
    }

    PoissonPoly A(long k) const;
    PoissonPoly B(long k) const;
    /// (1/N) sum_l zeta^{-kl} A_l; needs N prime.
    PoissonPoly A_hat(long k) const;
    PoissonPoly B_hat(long k) const;

    /// The 2N generators, A's first.
    std::vector<PoissonPoly> generators() const;

    PoissonPoly generator_bracket(VarId u, VarId v) const;
    PoissonPoly bracket(const PoissonPoly &x, const PoissonPoly &y) const;

    /// Site-k image of a lattice polynomial: X_j -> A_{k+j}, Y_j -> B_{k+j}.
    PoissonPoly from_lattice(const LatticePoly &p, long k) const;

    static VarId a_id(long k, int n);
    static VarId b_id(long k, int n);

private:
    int n_;
    BracketId id_;
    bool modified_;

    long wrap(long k) const;
    PoissonPoly raw_bracket(VarId u, VarId v) const;
    PoissonPoly shift_to_background(const PoissonPoly &p) const;
};

bool is_prime(int n);

struct PoissonCheck {
    std::string suite;
    std::string name;
    bool pass = false;
    long cases = 0;
    std::string witness; // first failing case
};

/// Exhaustive generator triples plus random monomial triples.
std::vector<PoissonCheck> jacobi_check(const CyclicPoissonAlgebra &alg, int random_trials, std::uint64_t seed);

/// Antisymmetry and Leibniz on random pairs.
std::vector<PoissonCheck> derivation_check(const CyclicPoissonAlgebra &alg, int trials, std::uint64_t seed);

std::vector<PoissonCheck> casimir_check(int n);

/// The four printed Fourier identities over all (n, m), plus the P1 identity with zeta^{-n}.
std::vector<PoissonCheck> fourier_identity_check(int n);

std::vector<PoissonCheck> hamiltonian_check(int n);

} // namespace tkdv

#endif
