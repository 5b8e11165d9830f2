#pragma once

// LU factorization with partial pivoting, triangular solves, and the
// gradient of the factorization with respect to its input. Two gradient
// routes are kept side by side: the unstable one materializes explicit
// triangular inverses and multiplies them out, the stable one reaches the
// same algebraic result through two triangular solves. Real matrices only,
// so the conjugations in the reference algorithms are identities.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "numstab/types.hpp"

namespace numstab {

enum class TriangularShape { lower, upper };

struct LuFactors {
    RealMatrix l; // unit lower triangular
    RealMatrix u; // upper triangular
    RealMatrix p; // permutation with p * a == l * u
};

inline LuFactors lu_decompose(const RealMatrix& a) {
    if (!a.square() || a.rows == 0)
        throw std::domain_error("lu_decompose: matrix must be square and non-empty");
    const std::size_t n = a.rows;
    Fp fp(a.precision);

    RealMatrix work = a;
    for (double& v : work.elements) v = fp.round(v);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    const double scale = max_abs(a);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::fabs(work.at(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double c = std::fabs(work.at(i, k));
            if (c > best) {
                best = c;
                pivot = i;
            }
        }
        if (!(best > scale * 1e-15))
            throw std::domain_error("lu_decompose: matrix is singular to working precision");
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(work.at(k, j), work.at(pivot, j));
            std::swap(perm[k], perm[pivot]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = fp.div(work.at(i, k), work.at(k, k));
            work.at(i, k) = m;
            for (std::size_t j = k + 1; j < n; ++j)
                work.at(i, j) = fp.sub(work.at(i, j), fp.mul(m, work.at(k, j)));
        }
    }

    LuFactors f;
    f.l = RealMatrix(n, n, 0.0, a.precision);
    f.u = RealMatrix(n, n, 0.0, a.precision);
    f.p = RealMatrix(n, n, 0.0, a.precision);
    for (std::size_t i = 0; i < n; ++i) {
        f.l.at(i, i) = 1.0;
        f.p.at(i, perm[i]) = 1.0;
        for (std::size_t j = 0; j < i; ++j) f.l.at(i, j) = work.at(i, j);
        for (std::size_t j = i; j < n; ++j) f.u.at(i, j) = work.at(i, j);
    }
    return f;
}

/// Solves T * X = B by substitution. With unit_diagonal the stored diagonal
/// is ignored and treated as ones.
inline RealMatrix triangular_solve(const RealMatrix& t, const RealMatrix& b,
                                   TriangularShape shape, bool unit_diagonal = false) {
    if (!t.square() || t.rows != b.rows)
        throw std::domain_error("triangular_solve: dimensions do not conform");
    const std::size_t n = t.rows;
    if (!unit_diagonal)
        for (std::size_t i = 0; i < n; ++i)
            if (t.at(i, i) == 0.0)
                throw std::domain_error("triangular_solve: zero diagonal entry");

    Fp fp(t.precision);
    RealMatrix x = b;
    for (double& v : x.elements) v = fp.round(v);
    for (std::size_t col = 0; col < b.cols; ++col) {
        if (shape == TriangularShape::lower) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = x.at(i, col);
                for (std::size_t k = 0; k < i; ++k)
                    s = fp.sub(s, fp.mul(t.at(i, k), x.at(k, col)));
                x.at(i, col) = unit_diagonal ? s : fp.div(s, t.at(i, i));
            }
        } else {
            for (std::size_t ii = n; ii-- > 0;) {
                double s = x.at(ii, col);
                for (std::size_t k = ii + 1; k < n; ++k)
                    s = fp.sub(s, fp.mul(t.at(ii, k), x.at(k, col)));
                x.at(ii, col) = unit_diagonal ? s : fp.div(s, t.at(ii, ii));
            }
        }
    }
    return x;
}

namespace detail {

// phi = tril_strict(L^T * grad) + triu(grad * U^T), the triangular halves of
// the packed-factor gradient pulled back through the factors.
inline RealMatrix lu_backward_phi(const RealMatrix& l, const RealMatrix& u,
                                  const RealMatrix& lu_grad) {
    const std::size_t n = l.rows;
    RealMatrix phi_l = matmul(transpose(l), lu_grad);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) phi_l.at(i, j) = 0.0; // keep strict lower
    RealMatrix phi_u = matmul(lu_grad, transpose(u));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) phi_u.at(i, j) = 0.0; // keep upper
    Fp fp(l.precision);
    RealMatrix phi(n, n, 0.0, l.precision);
    for (std::size_t i = 0; i < n * n; ++i)
        phi.elements[i] = fp.add(phi_l.elements[i], phi_u.elements[i]);
    return phi;
}

} // namespace detail

/// Gradient of the factorization input given the gradient of the packed LU
/// matrix (strict lower = L, upper = U). Both modes compute
/// P^T * L^{-T} * phi * U^{-T}; they differ in how the inverses are applied.
inline RealMatrix lu_backward(const RealMatrix& l, const RealMatrix& u, const RealMatrix& p,
                              const RealMatrix& lu_grad, StabilityMode mode) {
    const std::size_t n = l.rows;
    if (!l.square() || !u.square() || !p.square() || u.rows != n || p.rows != n ||
        lu_grad.rows != n || lu_grad.cols != n)
        throw std::domain_error("lu_backward: shapes do not conform");

    const RealMatrix phi = detail::lu_backward_phi(l, u, lu_grad);

    if (mode == StabilityMode::unstable) {
        const RealMatrix eye = RealMatrix::identity(n, l.precision);
        const RealMatrix l_inv_t =
            transpose(triangular_solve(l, eye, TriangularShape::lower, /*unit_diagonal=*/true));
        const RealMatrix u_inv_t =
            transpose(triangular_solve(u, eye, TriangularShape::upper));
        const RealMatrix grad = matmul(matmul(l_inv_t, phi), u_inv_t);
        return matmul(transpose(p), grad);
    }

    // X = L^{-T} * phi via an upper-triangular solve against L^T, then
    // U * W = X^T * P and the result is W^T.
    const RealMatrix x =
        triangular_solve(transpose(l), phi, TriangularShape::upper, /*unit_diagonal=*/true);
    const RealMatrix w = triangular_solve(u, matmul(transpose(x), p), TriangularShape::upper);
    return transpose(w);
}

} // namespace numstab
