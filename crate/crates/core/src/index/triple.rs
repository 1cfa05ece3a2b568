//! Triple index and Hörmander index of Lagrangians in the doubled space.

use crate::error::Result;
use crate::symcore::lagrangian::{intersection_dim, triple_form, LagrangianFrame};
use crate::symcore::linalg::subspace_intersection;
use crate::symcore::signature::{hermitian_eigenvalues, SignatureTriple};
use crate::symcore::Tolerances;

/// Signature of `Q(α, β; δ)` with a zero band relative to its largest eigenvalue.
pub fn triple_signature(
    alpha: &LagrangianFrame,
    beta: &LagrangianFrame,
    delta: &LagrangianFrame,
    tol: &Tolerances,
) -> Result<SignatureTriple> {
    let q = triple_form(alpha, beta, delta, tol.rank)?;
    let eig = hermitian_eigenvalues(&q.matrix);
    let top = eig.iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(SignatureTriple::from_eigenvalues(eig, tol.zero * top.max(1.0)))
}

/// `i(α, β, δ) = m⁺(Q(α, β; δ)) + dim(α ∩ δ) − dim(α ∩ β ∩ δ)`.
pub fn triple_index(
    alpha: &LagrangianFrame,
    beta: &LagrangianFrame,
    delta: &LagrangianFrame,
    tol: &Tolerances,
) -> Result<i64> {
    let sig = triple_signature(alpha, beta, delta, tol)?;
    let (ad, _) = intersection_dim(alpha, delta, tol.rank)?;
    let (_, ab) = intersection_dim(alpha, beta, tol.rank)?;
    let abd = subspace_intersection(&ab, delta.span(), tol.rank).ncols();
    Ok(sig.m_plus as i64 + ad as i64 - abd as i64)
}

/// Upper bound `m − dim(α∩β) − dim(β∩δ) + dim(α∩β∩δ)` on the triple index,
/// where `m` is the dimension of the Lagrangians.
pub fn triple_index_bound(
    alpha: &LagrangianFrame,
    beta: &LagrangianFrame,
    delta: &LagrangianFrame,
    tol: &Tolerances,
) -> Result<i64> {
    let m = alpha.span().ncols() as i64;
    let (ab_dim, ab) = intersection_dim(alpha, beta, tol.rank)?;
    let (bd, _) = intersection_dim(beta, delta, tol.rank)?;
    let abd = subspace_intersection(&ab, delta.span(), tol.rank).ncols();
    Ok(m - ab_dim as i64 - bd as i64 + abd as i64)
}

/// `s(λ₁, λ₂; μ₁, μ₂) = i(λ₁, μ₁, μ₂) − i(λ₂, μ₁, μ₂)`.
pub fn hormander(
    l1: &LagrangianFrame,
    l2: &LagrangianFrame,
    m1: &LagrangianFrame,
    m2: &LagrangianFrame,
    tol: &Tolerances,
) -> Result<i64> {
    Ok(triple_index(l1, m1, m2, tol)? - triple_index(l2, m1, m2, tol)?)
}
