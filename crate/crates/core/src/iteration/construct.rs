//! Concatenation, brake iteration and the time-reversed shift of paths.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrizant::{brake_extend, SymplecticPath};
use crate::symcore::symplectic::{conj_n, symplectic_inverse};

/// `γ₁` on `[0, τ₁]` followed by `γ₂(t − τ₁)γ₁(τ₁)`.
pub fn concat(g1: &SymplecticPath, g2: &SymplecticPath) -> Result<SymplecticPath> {
    if g1.n() != g2.n() {
        return Err(Error::DimensionMismatch {
            expected: g1.n(),
            got: g2.n(),
        });
    }
    if g2.tau() == 0.0 {
        return Ok(g1.clone());
    }
    if g1.tau() == 0.0 {
        return Ok(g2.right_multiply(g1.end()));
    }
    let t1 = g1.tau();
    let e1 = g1.end().clone();
    let mut times = g1.times().to_vec();
    let mut mats = g1.samples().to_vec();
    for (t, m) in g2.times().iter().zip(g2.samples()).skip(1) {
        times.push(t1 + t);
        mats.push(m * &e1);
    }
    let source = match (g1.source(), g2.source()) {
        (Some(a), Some(b)) => Some(a.concat(b)?),
        _ => None,
    };
    let h = positive_min(g1.step(), g2.step());
    Ok(SymplecticPath::from_parts(
        times,
        mats,
        source,
        g1.steps() + g2.steps(),
        h,
    ))
}

fn positive_min(a: f64, b: f64) -> f64 {
    match (a > 0.0, b > 0.0) {
        (true, true) => a.min(b),
        (true, false) => a,
        (false, true) => b,
        (false, false) => 0.0,
    }
}

/// `γ(2S) = N γ(S)⁻¹ N γ(S)`.
pub fn brake_double_end(end: &DMatrix<f64>) -> DMatrix<f64> {
    conj_n(&symplectic_inverse(end)) * end
}

/// The brake iteration `γᵏ` on `[0, kS]`.
///
/// On `[2jS, (2j+1)S]` the iterate is `γ(t − 2jS)γ(2S)ʲ`, on
/// `[(2j+1)S, (2j+2)S]` it is `Nγ((2j+2)S − t)Nγ(2S)^{j+1}`. Samples of the
/// base path map to samples of every copy, so base grid points stay grid
/// points. The coefficient path is the brake extension, repeated.
pub fn brake_iterate(g: &SymplecticPath, k: usize) -> Result<SymplecticPath> {
    if k == 0 {
        return Err(Error::InvalidInput("iteration count must be positive".into()));
    }
    let id = DMatrix::identity(2 * g.n(), 2 * g.n());
    if (g.start() - &id).amax() > 1e-12 {
        return Err(Error::InvalidInput("brake iteration needs γ(0) = I".into()));
    }
    if k == 1 {
        return Ok(g.clone());
    }
    let s = g.tau();
    let base_t = g.times();
    let base_m = g.samples();
    let m2 = brake_double_end(g.end());

    let mut times = Vec::with_capacity(k * base_t.len());
    let mut mats = Vec::with_capacity(k * base_t.len());
    let mut power = id.clone(); // γ(2S)^j
    for seg in 0..k {
        let j = seg / 2;
        let offset = seg as f64 * s;
        if seg % 2 == 0 {
            if seg > 0 {
                power = &power * &m2;
                debug_assert_eq!(j, seg / 2);
            }
            for (i, (t, m)) in base_t.iter().zip(base_m).enumerate() {
                if i == 0 && seg > 0 {
                    continue;
                }
                times.push(offset + t);
                mats.push(m * &power);
            }
        } else {
            let next = &power * &m2; // γ(2S)^{j+1}
            for i in (0..base_t.len() - 1).rev() {
                times.push(offset + (s - base_t[i]));
                mats.push(conj_n(&base_m[i]) * &next);
            }
        }
    }
    let source = g
        .source()
        .map(|b| brake_extend(b).shifted(0.0, k as f64 * s))
        .transpose()?;
    Ok(SymplecticPath::from_parts(
        times,
        mats,
        source,
        g.steps() * k,
        g.step(),
    ))
}

/// `γ̃(t) = N γ(S − t) γ(S)⁻¹ N` on `[0, S]`, with coefficient `N B(S − t) N`.
pub fn tilde_shift(g: &SymplecticPath) -> Result<SymplecticPath> {
    let id = DMatrix::identity(2 * g.n(), 2 * g.n());
    if (g.start() - &id).amax() > 1e-12 {
        return Err(Error::InvalidInput("time shift needs γ(0) = I".into()));
    }
    let s = g.tau();
    let end_inv = symplectic_inverse(g.end());
    let last = g.times().len() - 1;
    let mut times = Vec::with_capacity(last + 1);
    let mut mats = Vec::with_capacity(last + 1);
    for i in (0..=last).rev() {
        times.push(if i == last { 0.0 } else { s - g.times()[i] });
        if i == last {
            mats.push(id.clone());
        } else {
            mats.push(conj_n(&(&g.samples()[i] * &end_inv)));
        }
    }
    if let Some(t) = times.last_mut() {
        *t = s;
    }
    Ok(SymplecticPath::from_parts(
        times,
        mats,
        g.source().map(|b| b.reflected()),
        g.steps(),
        g.step(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrizant::{matrizant, sample_coefficient_path, CoefficientPath};

    fn shear_end() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 1.0, -1.0])
    }

    #[test]
    fn doubled_end_of_shear_example() {
        let want = DMatrix::from_row_slice(2, 2, &[-3.0, 4.0, 2.0, -3.0]);
        assert!((brake_double_end(&shear_end()) - want).amax() < 1e-14);
        let want = DMatrix::from_row_slice(2, 2, &[-1.0, -2.0, 1.0, 1.0]);
        assert!((conj_n(&symplectic_inverse(&shear_end())) - want).amax() < 1e-14);
    }

    #[test]
    fn doubled_end_with_zero_c_block() {
        // M = [[A, B], [0, A⁻ᵀ]] ⇒ γ(2S) = [[I, 2BᵀD], [0, I]].
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]);
        let d = a.clone().try_inverse().unwrap().transpose();
        let sym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, -1.0]);
        let b = &a * &sym;
        let m = crate::symcore::symplectic::from_blocks(&a, &b, &DMatrix::zeros(2, 2), &d);
        assert!(crate::symcore::check_symplectic(&m) < 1e-13);
        let got = brake_double_end(&m);
        let btd = b.transpose() * &d * 2.0;
        let want = crate::symcore::symplectic::from_blocks(
            &DMatrix::identity(2, 2),
            &btd,
            &DMatrix::zeros(2, 2),
            &DMatrix::identity(2, 2),
        );
        assert!((got - want).amax() < 1e-13);
    }

    #[test]
    fn iterate_of_rotation_is_rotation() {
        let b = CoefficientPath::identity(1, 0.7).unwrap();
        let g = matrizant(&b, 512).unwrap();
        let g5 = brake_iterate(&g, 5).unwrap();
        assert!((g5.tau() - 3.5).abs() < 1e-12);
        for (t, m) in g5.times().iter().zip(g5.samples()) {
            let r = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
            assert!((m - r).amax() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn iterate_restricts_to_the_base_path() {
        let b = sample_coefficient_path(3, 2, 2, 1.5, 1.0).unwrap();
        let g = matrizant(&b, 256).unwrap();
        let g3 = brake_iterate(&g, 3).unwrap();
        for i in 0..g.times().len() {
            assert_eq!(g3.times()[i], g.times()[i]);
            assert_eq!(g3.samples()[i], g.samples()[i]);
        }
        assert!(brake_iterate(&g, 1).unwrap().end() == g.end());
    }

    #[test]
    fn iterate_matches_integration_of_extended_coefficients() {
        let b = sample_coefficient_path(9, 1, 2, 1.5, 1.3).unwrap();
        let g = matrizant(&b, 1024).unwrap();
        let g4 = brake_iterate(&g, 4).unwrap();
        let direct = matrizant(g4.source().unwrap(), 4096).unwrap();
        assert!((direct.end() - g4.end()).amax() < 1e-7);
        assert!((direct.at(2.1) - g4.at(2.1)).amax() < 1e-7);
    }

    #[test]
    fn nested_doubling_is_endpoint_consistent() {
        let b = sample_coefficient_path(4, 2, 1, 1.0, 0.9).unwrap();
        let g = matrizant(&b, 512).unwrap();
        let g3 = brake_iterate(&g, 3).unwrap();
        let g6 = brake_iterate(&g, 6).unwrap();
        let g33 = brake_iterate(&g3, 2).unwrap();
        assert!((g6.end() - g33.end()).amax() < 1e-8);
    }

    #[test]
    fn tilde_shift_examples() {
        let b = CoefficientPath::constant(DMatrix::zeros(2, 2), 1.0).unwrap();
        let g = matrizant(&b, 32).unwrap();
        let t = tilde_shift(&g).unwrap();
        assert!(t.samples().iter().all(|m| (m - DMatrix::identity(2, 2)).amax() < 1e-15));

        let b = sample_coefficient_path(6, 1, 2, 1.0, 1.1).unwrap();
        let g = matrizant(&b, 1024).unwrap();
        let t = tilde_shift(&g).unwrap();
        let want = conj_n(&symplectic_inverse(g.end()));
        assert!((t.end() - want).amax() < 1e-12);
        let direct = matrizant(t.source().unwrap(), 1024).unwrap();
        assert!((direct.end() - t.end()).amax() < 1e-9);
        assert!((t.at(0.37) - direct.at(0.37)).amax() < 1e-9);
    }

    #[test]
    fn concat_examples() {
        let b = sample_coefficient_path(2, 1, 2, 1.0, 2.0).unwrap();
        let whole = matrizant(&b.shifted(0.0, 1.5).unwrap(), 3072).unwrap();
        let first = matrizant(&b.shifted(0.0, 0.5).unwrap(), 1024).unwrap();
        let second = matrizant(&b.shifted(0.5, 1.0).unwrap(), 2048).unwrap();
        let c = concat(&first, &second).unwrap();
        assert!((c.end() - whole.end()).amax() < 1e-7);
        assert!((c.end() - second.end() * first.end()).amax() < 1e-15);
        let same = concat(&first, &SymplecticPath::trivial(1, 0.0)).unwrap();
        assert_eq!(same.end(), first.end());
        assert!((c.at(1.1) - whole.at(1.1)).amax() < 1e-7);
    }
}
