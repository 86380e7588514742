use nalgebra::{DMatrix, DVector};

use super::{ArithmeticMode, Case, CaseContext, Tolerance};
use crate::clifford::{vector_inner, CliffordSignature, Multivector};
use crate::error::{Error, Result};
use crate::normlab::{
    bilinear_norm_residual, central_gradient, closed_form_norm, gradient_relation_residual,
    inverse_field_jacobian, solve_uncurling, unital_norm, PathIntegrator, SolverConfig,
    UncurlingCandidate, DEFAULT_STEPS,
};
use crate::observer::{
    boost, circ_p, diamond, partial_wedge, partial_wedge_dagger, quad_product,
    quad_product_determinant, quad_product_exchanged, quad_product_wedge, spacetime_split, star,
    symmetry_findings, BoostVelocity, ObserverFrame, Paravector,
};
use crate::rng::XorShift64Star;
use crate::scalar::Scalar;
use crate::spinfactor::{Signature, SpinFactorElement};

/// Scalars the harness knows how to draw at random.
trait Draw: Scalar {
    fn draw(rng: &mut XorShift64Star) -> Self;
}

impl Draw for i64 {
    fn draw(rng: &mut XorShift64Star) -> Self {
        rng.int_in(-9, 9)
    }
}

impl Draw for f64 {
    fn draw(rng: &mut XorShift64Star) -> Self {
        rng.uniform(-2.0, 2.0)
    }
}

/// Absolute difference for exact scalars, difference relative to
/// `1 + max|·|` for floats.
fn diff<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    let abs = a
        .iter()
        .zip(b)
        .fold(0.0f64, |m, (&x, &y)| m.max((x - y).to_f64().abs()));
    if T::EXACT {
        abs
    } else {
        let scale = a
            .iter()
            .chain(b)
            .fold(0.0f64, |m, x| m.max(x.to_f64().abs()));
        abs / (1.0 + scale)
    }
}

fn sig3() -> Signature {
    Signature::euclidean3()
}

fn draw_sf<T: Draw>(rng: &mut XorShift64Star) -> SpinFactorElement<T> {
    let c: Vec<T> = (0..4).map(|_| T::draw(rng)).collect();
    SpinFactorElement::from_coords(sig3(), &c).expect("four coordinates")
}

fn draw_mv<T: Draw>(rng: &mut XorShift64Star) -> Multivector<T> {
    let sta = CliffordSignature::spacetime();
    let c: Vec<T> = (0..sta.blade_count()).map(|_| T::draw(rng)).collect();
    Multivector::from_coeffs(sta, c).expect("sixteen coefficients")
}

fn draw_vec4<T: Draw>(rng: &mut XorShift64Star) -> [T; 4] {
    std::array::from_fn(|_| T::draw(rng))
}

/// A unit in the forward cone `σ > |a|` with `Q ≥ q_min`.
fn draw_forward_unit(rng: &mut XorShift64Star, q_min: f64) -> SpinFactorElement {
    loop {
        let sigma = rng.uniform(0.5, 3.0);
        let v = rng.uniform_vec(3, -sigma, sigma);
        let s = SpinFactorElement::new(sig3(), sigma, v).expect("three components");
        if s.quadratic_form() >= q_min {
            return s;
        }
    }
}

fn sf_f64(c: &[f64]) -> SpinFactorElement {
    SpinFactorElement::from_coords(sig3(), c).expect("four coordinates")
}

fn sf_i64(c: &[i64]) -> SpinFactorElement<i64> {
    SpinFactorElement::from_coords(sig3(), c).expect("four coordinates")
}

fn check(cond: bool) -> f64 {
    if cond {
        0.0
    } else {
        1.0
    }
}

macro_rules! dual {
    ($f:ident) => {
        |ctx: &mut CaseContext| match ctx.mode {
            ArithmeticMode::Integer => $f::<i64>(ctx),
            ArithmeticMode::Float => $f::<f64>(ctx),
        }
    };
}

// ---------------------------------------------------------------- spinfactor

fn bullet_commutative<T: Draw>(ctx: &mut CaseContext) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let (x, y) = (draw_sf::<T>(&mut ctx.rng), draw_sf::<T>(&mut ctx.rng));
        worst = worst.max(diff(&x.bullet(&y)?.coords(), &y.bullet(&x)?.coords()));
    }
    Ok(worst)
}

fn bullet_identity<T: Draw>(ctx: &mut CaseContext) -> Result<f64> {
    let one = SpinFactorElement::<T>::identity(sig3());
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let x = draw_sf::<T>(&mut ctx.rng);
        worst = worst
            .max(diff(&one.bullet(&x)?.coords(), &x.coords()))
            .max(diff(&x.bullet(&one)?.coords(), &x.coords()));
    }
    Ok(worst)
}

fn bullet_bilinear<T: Draw>(ctx: &mut CaseContext) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let (x, y, z) = (
            draw_sf::<T>(&mut ctx.rng),
            draw_sf::<T>(&mut ctx.rng),
            draw_sf::<T>(&mut ctx.rng),
        );
        let k = T::draw(&mut ctx.rng);
        let lhs = x.scale(k).add(&y)?.bullet(&z)?;
        let rhs = x.bullet(&z)?.scale(k).add(&y.bullet(&z)?)?;
        worst = worst.max(diff(&lhs.coords(), &rhs.coords()));
    }
    Ok(worst)
}

fn conjugate_involution<T: Draw>(ctx: &mut CaseContext) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let x = draw_sf::<T>(&mut ctx.rng);
        worst = worst.max(diff(&x.conjugate().conjugate().coords(), &x.coords()));
        // Q(x) is the scalar part of x • x*
        let q = x.bullet(&x.conjugate())?;
        worst = worst.max(diff(&[q.scalar()], &[x.quadratic_form()]));
    }
    Ok(worst)
}

fn inner_is_symmetrized_circ<T: Draw>(ctx: &mut CaseContext) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let (x, y) = (draw_sf::<T>(&mut ctx.rng), draw_sf::<T>(&mut ctx.rng));
        let sym = x.circ(&y)?.add(&y.circ(&x)?)?;
        let two_inner = T::from_i64(2) * x.minkowski_inner(&y)?;
        let mut want = vec![two_inner];
        want.extend(std::iter::repeat_n(T::ZERO, 3));
        worst = worst.max(diff(&sym.coords(), &want));
        worst = worst.max(diff(&[x.quadratic_form()], &[x.minkowski_inner(&x)?]));
    }
    Ok(worst)
}

fn circ_right_identity<T: Draw>(ctx: &mut CaseContext) -> Result<f64> {
    let one = SpinFactorElement::<T>::identity(sig3());
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let x = draw_sf::<T>(&mut ctx.rng);
        worst = worst.max(diff(&x.circ(&one)?.coords(), &x.coords()));
    }
    Ok(worst)
}

/// `1 ∘ x ≠ x` whenever `x` has a nonzero vector part.
fn circ_not_left_identity(ctx: &mut CaseContext) -> Result<f64> {
    let one = SpinFactorElement::<i64>::identity(sig3());
    let witness = sf_i64(&[2, 1, -1, 3]);
    let mut failures = check(one.circ(&witness)? != witness);
    for _ in 0..ctx.trials {
        let x = draw_sf::<i64>(&mut ctx.rng);
        if x.vector().iter().any(|&c| c != 0) {
            failures += check(one.circ(&x)? != x);
        }
    }
    Ok(failures)
}

fn inverse_round_trip(ctx: &mut CaseContext) -> Result<f64> {
    let one = SpinFactorElement::identity(sig3());
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let x = draw_sf::<f64>(&mut ctx.rng);
        if x.quadratic_form().abs() < 0.05 {
            continue;
        }
        let inv = x.inverse()?;
        worst = worst
            .max(diff(&x.bullet(&inv)?.coords(), &one.coords()))
            .max(diff(&inv.inverse()?.coords(), &x.coords()));
    }
    Ok(worst)
}

/// Oracle: solve the linear system `x • z = 1` column by column from the
/// bullet product applied to basis elements, and compare with `x*/Q`.
fn inverse_matches_linear_solve(ctx: &mut CaseContext) -> Result<f64> {
    let basis: Vec<SpinFactorElement> = (0..4)
        .map(|k| {
            let mut c = [0.0; 4];
            c[k] = 1.0;
            sf_f64(&c)
        })
        .collect();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let x = draw_sf::<f64>(&mut ctx.rng);
        if x.quadratic_form().abs() < 0.05 {
            continue;
        }
        let cols: Vec<Vec<f64>> = basis
            .iter()
            .map(|e| x.bullet(e).map(|p| p.coords()))
            .collect::<Result<_>>()?;
        let m = DMatrix::from_fn(4, 4, |r, c| cols[c][r]);
        let z = m
            .lu()
            .solve(&DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]))
            .ok_or_else(|| {
                Error::InternalMismatch("singular bullet system off the null cone".into())
            })?;
        worst = worst.max(diff(z.as_slice(), &x.inverse()?.coords()));
    }
    Ok(worst)
}

fn spinfactor_examples(_: &mut CaseContext) -> Result<f64> {
    let e1 = sf_i64(&[0, 1, 0, 0]);
    let mut fails = 0.0;
    fails += check(sf_i64(&[2, 1, 0, 0]).bullet(&sf_i64(&[3, 0, 1, 0]))? == sf_i64(&[6, 3, 2, 0]));
    fails += check(e1.bullet(&e1)? == sf_i64(&[1, 0, 0, 0]));
    fails += check(sf_i64(&[2, 1, 0, 0]).quadratic_form() == 3);
    fails += check(sf_i64(&[1, 1, 0, 0]).quadratic_form() == 0);
    fails += check(e1.minkowski_inner(&e1)? == -1);
    fails += check(sf_i64(&[2, 1, 0, 0]).minkowski_inner(&sf_i64(&[3, 0, 1, 0]))? == 6);
    fails += check(sf_i64(&[2, 1, 0, 0]).circ(&sf_i64(&[3, 0, 1, 0]))? == sf_i64(&[6, 3, -2, 0]));
    let inv = sf_f64(&[2.0, 1.0, 0.0, 0.0]).inverse()?;
    fails += diff(&inv.coords(), &[2.0 / 3.0, -1.0 / 3.0, 0.0, 0.0]);
    fails += check(matches!(
        sf_f64(&[1.0, 1.0, 0.0, 0.0]).inverse(),
        Err(Error::NullElement { .. })
    ));
    Ok(fails)
}

// ------------------------------------------------------------------- normlab

fn bilinear_fixed_point(ctx: &mut CaseContext) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let n = ctx.rng.int_in(2, 4) as usize;
        let a = DMatrix::from_fn(n, n, |_, _| ctx.rng.uniform(-1.0, 1.0));
        let l = a.transpose() * &a + DMatrix::identity(n, n);
        let s = ctx.rng.uniform_vec(n, -2.0, 2.0);
        if s.iter().map(|x| x * x).sum::<f64>() < 0.1 {
            continue;
        }
        worst = worst.max(bilinear_norm_residual(&l, &s)?);
    }
    Ok(worst)
}

fn jacobian_vs_finite_differences(ctx: &mut CaseContext) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let s = draw_forward_unit(&mut ctx.rng, 0.2);
        let j = inverse_field_jacobian(&s)?;
        for row in 0..4 {
            let fd = central_gradient(|x| Ok(sf_f64(x).inverse()?.coords()[row]), &s.coords())?;
            for (col, d) in fd.iter().enumerate() {
                worst = worst.max((d - j[(row, col)]).abs());
            }
        }
    }
    Ok(worst)
}

/// Solved `L` equals `I₄`, fits its constraints, and generalizes to 100
/// held-out points.
fn uncurling_solver(ctx: &mut CaseContext) -> Result<f64> {
    let cfg = SolverConfig {
        seed: ctx.rng.next_u64(),
        ..Default::default()
    };
    let sol = solve_uncurling(sig3(), &cfg)?;
    let identity_gap = (sol.metric.matrix() - DMatrix::<f64>::identity(4, 4)).amax();
    let held_out: Vec<SpinFactorElement> = (0..100)
        .map(|_| draw_forward_unit(&mut ctx.rng, 0.2))
        .collect();
    let held_out_residual = sol.metric.max_residual(&held_out)?;
    Ok(identity_gap
        .max(sol.constraint_residual)
        .max(held_out_residual))
}

fn norm_matches_closed_form(ctx: &mut CaseContext) -> Result<f64> {
    let l = UncurlingCandidate::identity(sig3());
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let s = draw_forward_unit(&mut ctx.rng, 0.2);
        let integrated = unital_norm(&s, &l, DEFAULT_STEPS)?;
        let closed = closed_form_norm(&s)?;
        worst = worst.max((integrated.value - closed).abs() / closed);
    }
    Ok(worst)
}

fn solved_norm_matches_closed_form(ctx: &mut CaseContext) -> Result<f64> {
    let cfg = SolverConfig {
        seed: ctx.rng.next_u64(),
        ..Default::default()
    };
    let l = solve_uncurling(sig3(), &cfg)?.metric;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s = draw_forward_unit(&mut ctx.rng, 0.2);
        let integrated = unital_norm(&s, &l, DEFAULT_STEPS)?;
        let closed = closed_form_norm(&s)?;
        worst = worst.max((integrated.value - closed).abs() / closed);
    }
    Ok(worst)
}

/// Straight path versus `1 → p → s`. Both endpoints lie in the forward cone,
/// which is convex and on which `√Q` is concave, so the polyline keeps
/// `Q ≥ min(1, Q(p), Q(s))`.
fn path_independence(ctx: &mut CaseContext) -> Result<f64> {
    let l = UncurlingCandidate::identity(sig3());
    let integrator = PathIntegrator::default();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let s = draw_forward_unit(&mut ctx.rng, 0.2);
        let p = draw_forward_unit(&mut ctx.rng, 0.2);
        let straight = integrator.polyline(std::slice::from_ref(&s), &l)?;
        let bent = integrator.polyline(&[p, s], &l)?;
        worst = worst.max((straight - bent).abs());
    }
    Ok(worst)
}

fn degree_one_homogeneity(ctx: &mut CaseContext) -> Result<f64> {
    let l = UncurlingCandidate::identity(sig3());
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let s = draw_forward_unit(&mut ctx.rng, 0.25);
        let base = unital_norm(&s, &l, DEFAULT_STEPS)?.value;
        for alpha in [0.5, 2.0, 3.0] {
            let scaled = unital_norm(&s.scale(alpha), &l, DEFAULT_STEPS)?.value;
            worst = worst.max((scaled - alpha * base).abs() / (alpha * base));
        }
    }
    Ok(worst)
}

fn fd_norm_gradient(s: &SpinFactorElement, l: &UncurlingCandidate) -> Result<Vec<f64>> {
    let integrator = PathIntegrator::default();
    central_gradient(|x| integrator.norm_value(&sf_f64(x), l), &s.coords())
}

fn euler_relation(ctx: &mut CaseContext) -> Result<f64> {
    let l = UncurlingCandidate::identity(sig3());
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials.min(50) {
        let s = draw_forward_unit(&mut ctx.rng, 0.2);
        let u = PathIntegrator::default().norm_value(&s, &l)?;
        let g = fd_norm_gradient(&s, &l)?;
        let euler: f64 = s.coords().iter().zip(&g).map(|(a, b)| a * b).sum();
        worst = worst.max((euler - u).abs());
    }
    Ok(worst)
}

fn gradient_relation(ctx: &mut CaseContext) -> Result<f64> {
    let l = UncurlingCandidate::identity(sig3());
    let mut worst = gradient_relation_residual(&sf_f64(&[1.0, 0.0, 0.0, 0.0]), &l)?.max(
        gradient_relation_residual(&sf_f64(&[1.2, 0.0, 0.0, 0.0]), &l)?,
    );
    for _ in 0..ctx.trials.min(50) {
        let s = draw_forward_unit(&mut ctx.rng, 0.2);
        worst = worst.max(gradient_relation_residual(&s, &l)?);
    }
    Ok(worst)
}

/// `(u²(x+y) − u²(x) − u²(y))/2 = ⟨x, y⟩`.
fn polarization(ctx: &mut CaseContext) -> Result<f64> {
    let l = UncurlingCandidate::identity(sig3());
    let u2 = |s: &SpinFactorElement| unital_norm(s, &l, DEFAULT_STEPS).map(|r| r.value * r.value);
    // exact spot-check on basis pairs, where 𝔲² = Q
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let (mut a, mut b) = ([0i64; 4], [0i64; 4]);
            a[i] = 1;
            b[j] = 1;
            let (x, y) = (sf_i64(&a), sf_i64(&b));
            let polar = x.add(&y)?.quadratic_form() - x.quadratic_form() - y.quadratic_form();
            worst = worst.max((polar - 2 * x.minkowski_inner(&y)?).abs() as f64);
        }
    }
    for _ in 0..ctx.trials {
        let x = draw_forward_unit(&mut ctx.rng, 0.2);
        let y = draw_forward_unit(&mut ctx.rng, 0.2);
        let polar = 0.5 * (u2(&x.add(&y)?)? - u2(&x)? - u2(&y)?);
        worst = worst.max((polar - x.minkowski_inner(&y)?).abs());
    }
    Ok(worst)
}

fn normlab_examples(_: &mut CaseContext) -> Result<f64> {
    let l = UncurlingCandidate::identity(sig3());
    let id2 = DMatrix::<f64>::identity(2, 2);
    let diag21 = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]));
    let mut worst = 0.0f64;
    worst = worst.max(bilinear_norm_residual(&id2, &[3.0, 4.0])?);
    worst = worst.max(bilinear_norm_residual(&diag21, &[1.0, 1.0])?);
    let j1 = inverse_field_jacobian(&sf_f64(&[1.0, 0.0, 0.0, 0.0]))?;
    worst = worst.max((j1 + DMatrix::<f64>::identity(4, 4)).amax());
    let j2 = inverse_field_jacobian(&sf_f64(&[2.0, 0.0, 0.0, 0.0]))?;
    worst = worst.max((j2 + DMatrix::<f64>::identity(4, 4) / 4.0).amax());
    worst = worst
        .max((unital_norm(&sf_f64(&[1.0, 0.0, 0.0, 0.0]), &l, DEFAULT_STEPS)?.value - 1.0).abs());
    worst = worst
        .max((unital_norm(&sf_f64(&[2.0, 0.0, 0.0, 0.0]), &l, DEFAULT_STEPS)?.value - 2.0).abs());
    worst = worst.max(
        (unital_norm(&sf_f64(&[2.0, 1.0, 0.0, 0.0]), &l, DEFAULT_STEPS)?.value - 3f64.sqrt()).abs(),
    );
    worst = worst.max((closed_form_norm(&sf_f64(&[2.0, 1.0, 0.0, 0.0]))? - 3f64.sqrt()).abs());
    worst += check(matches!(
        unital_norm(&sf_f64(&[1.0, 1.0, 0.0, 0.0]), &l, DEFAULT_STEPS),
        Err(Error::PathCrossesNullCone { .. })
    ));
    worst += check(closed_form_norm(&sf_f64(&[1.0, 1.0, 0.0, 0.0])).is_err());
    let small = SolverConfig {
        sample_count: 0,
        ..Default::default()
    };
    worst += check(matches!(
        solve_uncurling(sig3(), &small),
        Err(Error::EmptySolution(_))
    ));
    let r1 = solve_uncurling(Signature::new(1, 0)?, &SolverConfig::default())?;
    worst = worst.max(r1.constraint_residual);
    Ok(worst)
}

// ------------------------------------------------------------------ clifford

fn associativity(ctx: &mut CaseContext) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let (x, y, z) = (
            draw_mv::<i64>(&mut ctx.rng),
            draw_mv::<i64>(&mut ctx.rng),
            draw_mv::<i64>(&mut ctx.rng),
        );
        let lhs = x.geometric_product(&y)?.geometric_product(&z)?;
        let rhs = x.geometric_product(&y.geometric_product(&z)?)?;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

fn gamma_relations(_: &mut CaseContext) -> Result<f64> {
    let sta = CliffordSignature::spacetime();
    let g = |i| Multivector::<i64>::basis_vector(sta, i);
    let mut worst = 0.0f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let sym = g(mu)
                .geometric_product(&g(nu))?
                .add(&g(nu).geometric_product(&g(mu))?)?;
            let want = match (mu == nu, mu) {
                (true, 0) => 2,
                (true, _) => -2,
                (false, _) => 0,
            };
            worst = worst.max(sym.max_abs_diff(&Multivector::scalar(sta, want)));
        }
    }
    Ok(worst)
}

/// `e_i = γ_iγ₀` satisfy `e_ie_j + e_je_i = 2δ_ij`.
fn even_subalgebra_generators(_: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<i64>::standard();
    let sta = CliffordSignature::spacetime();
    let mut worst = 0.0f64;
    for i in 1..4 {
        for j in 1..4 {
            let (ei, ej) = (frame.spatial_bivector(i), frame.spatial_bivector(j));
            let sym = ei
                .geometric_product(&ej)?
                .add(&ej.geometric_product(&ei)?)?;
            let want = Multivector::scalar(sta, if i == j { 2 } else { 0 });
            worst = worst.max(sym.max_abs_diff(&want));
            // equals −(γ_iγ_j + γ_jγ_i)
            let (gi, gj) = (frame.gamma(i), frame.gamma(j));
            let spatial = gi.geometric_product(gj)?.add(&gj.geometric_product(gi)?)?;
            worst = worst.max(sym.max_abs_diff(&spatial.neg()));
        }
    }
    Ok(worst)
}

fn wedge_antisymmetry(ctx: &mut CaseContext) -> Result<f64> {
    let sta = CliffordSignature::spacetime();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let v: Vec<Multivector<i64>> = (0..3)
            .map(|_| Multivector::vector(sta, &draw_vec4::<i64>(&mut ctx.rng)))
            .collect::<Result<_>>()?;
        let w = |a: usize, b: usize, c: usize| -> Result<Multivector<i64>> {
            v[a].wedge(&v[b])?.wedge(&v[c])
        };
        let base = w(0, 1, 2)?;
        for (perm, sign) in [
            ((1, 0, 2), -1),
            ((0, 2, 1), -1),
            ((2, 1, 0), -1),
            ((1, 2, 0), 1),
            ((2, 0, 1), 1),
        ] {
            worst = worst.max(w(perm.0, perm.1, perm.2)?.max_abs_diff(&base.scale(sign)));
        }
        worst = worst.max(v[0].wedge(&v[1])?.max_abs_diff(&v[1].wedge(&v[0])?.neg()));
        worst = worst.max(v[0].wedge(&v[0])?.max_abs_diff(&Multivector::zero(sta)));
        // ab − ⟨a,b⟩ = a∧b
        let ab = v[0].geometric_product(&v[1])?;
        let inner = Multivector::scalar(sta, vector_inner(&v[0], &v[1])?);
        worst = worst.max(ab.sub(&inner)?.max_abs_diff(&v[0].wedge(&v[1])?));
    }
    Ok(worst)
}

fn vector_square_is_inner<T: Draw>(ctx: &mut CaseContext) -> Result<f64> {
    let sta = CliffordSignature::spacetime();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let a = Multivector::vector(sta, &draw_vec4::<T>(&mut ctx.rng))?;
        let sq = a.geometric_product(&a)?;
        let want = Multivector::scalar(sta, vector_inner(&a, &a)?);
        worst = worst.max(diff(sq.coeffs(), want.coeffs()));
    }
    Ok(worst)
}

fn grade_projection<T: Draw>(ctx: &mut CaseContext) -> Result<f64> {
    let sta = CliffordSignature::spacetime();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let x = draw_mv::<T>(&mut ctx.rng);
        let mut sum = Multivector::zero(sta);
        for k in 0..=4 {
            let p = x.grade_project(k)?;
            worst = worst.max(diff(p.grade_project(k)?.coeffs(), p.coeffs()));
            sum = sum.add(&p)?;
        }
        worst = worst.max(diff(sum.coeffs(), x.coeffs()));
    }
    Ok(worst)
}

fn clifford_examples(_: &mut CaseContext) -> Result<f64> {
    let sta = CliffordSignature::spacetime();
    let g = |i| Multivector::<i64>::basis_vector(sta, i);
    let mut fails = 0.0;
    fails += check(g(0).wedge(&g(0))?.is_zero());
    let top = g(0).wedge(&g(1))?.wedge(&g(2))?.wedge(&g(3))?;
    fails += check(top == Multivector::pseudoscalar(sta));
    let x = Multivector::scalar(sta, 1).add(&g(0).geometric_product(&g(1))?)?;
    fails += check(x.grade_project(0)? == Multivector::scalar(sta, 1));
    fails += check(vector_inner(&g(0), &g(0))? == 1);
    fails += check(vector_inner(&g(0), &g(1))? == 0);
    fails += check(vector_inner(&g(0).add(&g(1))?, &g(0).sub(&g(1))?)? == 2);
    fails += check(matches!(
        x.grade_project(5),
        Err(Error::GradeOutOfRange { .. })
    ));
    Ok(fails)
}

// ------------------------------------------------------------------ observer

fn quad_paths_agree(ctx: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<i64>::standard();
    let mut worst = 0.0f64;
    for _ in 0..5 * ctx.trials {
        let (a, b) = (
            draw_vec4::<i64>(&mut ctx.rng),
            draw_vec4::<i64>(&mut ctx.rng),
        );
        let wedge = quad_product_wedge(&frame.vector(a), &frame.vector(b), &frame)?;
        let det = quad_product_determinant(&a, &b);
        worst = worst.max((wedge - det).abs() as f64);
    }
    Ok(worst)
}

fn quad_worked_instance(_: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<i64>::standard();
    let (a, b) = ([1, 2, 3, 4], [5, 6, 7, 8]);
    let (ma, mb) = (frame.vector(a), frame.vector(b));
    let mut worst = (quad_product_wedge(&ma, &mb, &frame)? - 16).abs() as f64;
    worst = worst.max((quad_product_determinant(&a, &b) - 16).abs() as f64);
    worst += check(partial_wedge(&ma, &mb, &frame)? == frame.spatial_vector([4, 8, 12]));
    worst += check(partial_wedge_dagger(&ma, &mb, &frame)? == frame.spatial_vector([-4, 4, 8]));
    worst += check(diamond(&ma, &mb, &frame)? == frame.vector([-60, 4, 8, 12]));
    worst += check(quad_product(&ma, &ma, &frame)? == 0);
    worst += check(quad_product(frame.gamma(2), frame.gamma(3), &frame)? == 0);
    Ok(worst)
}

fn draw_velocity(rng: &mut XorShift64Star) -> Result<BoostVelocity> {
    BoostVelocity::new(rng.uniform(-0.99, 0.99))
}

/// Relative change of the quad product under a `γ₁` boost, normalized by
/// `max(|q|, 1)` so products that vanish exactly do not divide by zero.
fn quad_boost_invariance(ctx: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<f64>::standard();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let (a, b) = (
            frame.vector(draw_vec4::<f64>(&mut ctx.rng).map(|c| 2.5 * c)),
            frame.vector(draw_vec4::<f64>(&mut ctx.rng).map(|c| 2.5 * c)),
        );
        let v = draw_velocity(&mut ctx.rng)?;
        let q = quad_product(&a, &b, &frame)?;
        let qb = quad_product(&boost(&a, v, &frame)?, &boost(&b, v, &frame)?, &frame)?;
        worst = worst.max((qb - q).abs() / q.abs().max(1.0));
    }
    Ok(worst)
}

fn quad_commutative(ctx: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<i64>::standard();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let (a, b) = (
            frame.vector(draw_vec4(&mut ctx.rng)),
            frame.vector(draw_vec4(&mut ctx.rng)),
        );
        worst =
            worst.max((quad_product(&a, &b, &frame)? - quad_product(&b, &a, &frame)?).abs() as f64);
    }
    Ok(worst)
}

fn quad_exchange_invariance(ctx: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<i64>::standard();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let (a, b) = (
            frame.vector(draw_vec4(&mut ctx.rng)),
            frame.vector(draw_vec4(&mut ctx.rng)),
        );
        worst = worst.max(
            (quad_product(&a, &b, &frame)? - quad_product_exchanged(&a, &b, &frame)?).abs() as f64,
        );
    }
    Ok(worst)
}

fn quad_hemi_linearity(ctx: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<i64>::standard();
    let (a, b) = ([1, 2, 3, 4], [5, 6, 7, 8]);
    let scaled = frame.vector([3 * a[0], 3 * a[1], a[2], a[3]]);
    let mut fails = (quad_product(&scaled, &frame.vector(b), &frame)? - 48).abs() as f64;
    for _ in 0..ctx.trials {
        let (a, b) = (
            frame.vector(draw_vec4(&mut ctx.rng)),
            frame.vector(draw_vec4(&mut ctx.rng)),
        );
        fails += check(symmetry_findings(&a, &b, &frame)?.hemi_linear);
    }
    Ok(fails)
}

/// Boosted `γ₀, γ₁` leave the `γ₂, γ₃` components exactly zero and are not
/// fixed for `v ≠ 0`.
fn boost_plane_invariance(ctx: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<f64>::standard();
    let mut fails = 0.0;
    for _ in 0..ctx.trials {
        let v = draw_velocity(&mut ctx.rng)?;
        if v.value() == 0.0 {
            continue;
        }
        for mu in 0..2 {
            let g = frame.gamma(mu);
            let c = frame.coords(&boost(g, v, &frame)?)?;
            fails += check(c[2] == 0.0 && c[3] == 0.0);
            fails += check(frame.coords(g)? != c);
        }
    }
    Ok(fails)
}

fn boost_preserves_minkowski_norm(ctx: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<f64>::standard();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let c = draw_vec4::<f64>(&mut ctx.rng);
        let w = frame.vector(c);
        let v = draw_velocity(&mut ctx.rng)?;
        let before = vector_inner(&w, &w)?;
        let after = {
            let b = boost(&w, v, &frame)?;
            vector_inner(&b, &b)?
        };
        let scale = before.abs().max(c.iter().map(|x| x * x).sum());
        worst = worst.max((after - before).abs() / scale);
    }
    Ok(worst)
}

fn circ_homomorphism(ctx: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<i64>::standard();
    let mut fails = 0.0;
    for _ in 0..ctx.trials {
        let (a, b) = (
            frame.vector(draw_vec4(&mut ctx.rng)),
            frame.vector(draw_vec4(&mut ctx.rng)),
        );
        let (x, y) = (spacetime_split(&a, &frame)?, spacetime_split(&b, &frame)?);
        let via_p = circ_p(&x, &y)?.to_spinfactor();
        let via_sf = x.to_spinfactor().circ(&y.to_spinfactor())?;
        fails += check(via_p == via_sf);
        fails +=
            check(x.to_spinfactor().minkowski_inner(&y.to_spinfactor())? == vector_inner(&a, &b)?);
    }
    Ok(fails)
}

fn split_products_consistent(ctx: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<i64>::standard();
    let sta = CliffordSignature::spacetime();
    let mut fails = 0.0;
    for _ in 0..ctx.trials {
        let (a, b) = (
            frame.vector(draw_vec4(&mut ctx.rng)),
            frame.vector(draw_vec4(&mut ctx.rng)),
        );
        let (x, y) = (spacetime_split(&a, &frame)?, spacetime_split(&b, &frame)?);
        fails += check(x.to_multivector() == a.geometric_product(frame.gamma(0))?);
        let st = star(&x, &y)?;
        fails += check(st == a.geometric_product(&b)?);
        fails += check(st.scalar_part() == vector_inner(&a, &b)?);
        fails += check(star(&x, &x)? == Multivector::scalar(sta, vector_inner(&a, &a)?));
        fails += check(Paravector::project(&st, &frame)? == circ_p(&x, &y)?);
        let d = diamond(&a, &b, &frame)?;
        fails += check(d.geometric_product(frame.gamma(0))? == circ_p(&x, &y)?.to_multivector());
    }
    Ok(fails)
}

/// The quad product is unchanged when `(γ₂, γ₃)` is rotated in its plane.
fn frame_rotation_invariance(ctx: &mut CaseContext) -> Result<f64> {
    let std_frame = ObserverFrame::<f64>::standard();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let theta = ctx.rng.uniform(0.0, std::f64::consts::TAU);
        let (s, c) = theta.sin_cos();
        let g2 = std_frame
            .gamma(2)
            .scale(c)
            .add(&std_frame.gamma(3).scale(s))?;
        let g3 = std_frame
            .gamma(2)
            .scale(-s)
            .add(&std_frame.gamma(3).scale(c))?;
        let rotated = ObserverFrame::new([
            std_frame.gamma(0).clone(),
            std_frame.gamma(1).clone(),
            g2,
            g3,
        ])?;
        let a = std_frame.vector(draw_vec4::<f64>(&mut ctx.rng));
        let b = std_frame.vector(draw_vec4::<f64>(&mut ctx.rng));
        let q = quad_product(&a, &b, &std_frame)?;
        let qr = quad_product(&a, &b, &rotated)?;
        worst = worst.max((q - qr).abs() / q.abs().max(1.0));
    }
    Ok(worst)
}

fn observer_examples(_: &mut CaseContext) -> Result<f64> {
    let frame = ObserverFrame::<i64>::standard();
    let ff = ObserverFrame::<f64>::standard();
    let g = |i| frame.gamma(i).clone();
    let mut fails = 0.0;
    let x = spacetime_split(&g(1), &frame)?;
    fails += check((x.time, x.space) == (0, [1, 0, 0]));
    let x = spacetime_split(&frame.vector([2, 0, 3, 0]), &frame)?;
    fails += check((x.time, x.space) == (2, [0, 3, 0]));
    let g0 = spacetime_split(&g(0), &frame)?;
    fails += check(star(&g0, &spacetime_split(&g(1), &frame)?)? == g(0).geometric_product(&g(1))?);
    let r = circ_p(&g0, &spacetime_split(&frame.vector([1, 1, 0, 0]), &frame)?)?;
    fails += check((r.time, r.space) == (1, [-1, 0, 0]));
    fails += check(diamond(&g(1), &g(1), &frame)? == g(0).neg());
    fails += check(partial_wedge(&g(0), &g(1), &frame)? == g(1).neg());
    fails += check(partial_wedge_dagger(&g(0), &g(1), &frame)? == g(1));
    let boosted = ff.coords(&boost(ff.gamma(0), BoostVelocity::new(0.6)?, &ff)?)?;
    fails += diff(&boosted, &[1.25, -0.75, 0.0, 0.0]);
    fails += check(BoostVelocity::new(1.0).is_err());
    Ok(fails)
}

pub fn registry() -> Vec<Case> {
    use Tolerance::{Exact, Fixed, Run};
    let case = |suite, name, tolerance, run| Case {
        suite,
        name,
        tolerance,
        run,
    };
    vec![
        case(
            "spinfactor",
            "bullet_commutative",
            Run,
            dual!(bullet_commutative),
        ),
        case("spinfactor", "bullet_identity", Run, dual!(bullet_identity)),
        case("spinfactor", "bullet_bilinear", Run, dual!(bullet_bilinear)),
        case(
            "spinfactor",
            "conjugate_involution",
            Run,
            dual!(conjugate_involution),
        ),
        case(
            "spinfactor",
            "inner_is_symmetrized_circ",
            Run,
            dual!(inner_is_symmetrized_circ),
        ),
        case(
            "spinfactor",
            "circ_right_identity",
            Run,
            dual!(circ_right_identity),
        ),
        case(
            "spinfactor",
            "circ_not_left_identity",
            Exact,
            circ_not_left_identity,
        ),
        case(
            "spinfactor",
            "inverse_round_trip",
            Fixed(1e-12),
            inverse_round_trip,
        ),
        case(
            "spinfactor",
            "inverse_matches_linear_solve",
            Fixed(1e-12),
            inverse_matches_linear_solve,
        ),
        case("spinfactor", "examples", Fixed(1e-15), spinfactor_examples),
        case(
            "normlab",
            "bilinear_fixed_point",
            Fixed(1e-6),
            bilinear_fixed_point,
        ),
        case(
            "normlab",
            "jacobian_vs_finite_differences",
            Fixed(1e-6),
            jacobian_vs_finite_differences,
        ),
        case(
            "normlab",
            "uncurling_solver_identity",
            Fixed(1e-8),
            uncurling_solver,
        ),
        case(
            "normlab",
            "norm_matches_closed_form",
            Fixed(1e-9),
            norm_matches_closed_form,
        ),
        case(
            "normlab",
            "solved_norm_matches_closed_form",
            Fixed(1e-9),
            solved_norm_matches_closed_form,
        ),
        case(
            "normlab",
            "path_independence",
            Fixed(1e-8),
            path_independence,
        ),
        case(
            "normlab",
            "degree_one_homogeneity",
            Fixed(1e-9),
            degree_one_homogeneity,
        ),
        case("normlab", "euler_relation", Fixed(1e-6), euler_relation),
        case(
            "normlab",
            "gradient_relation",
            Fixed(1e-6),
            gradient_relation,
        ),
        case("normlab", "polarization", Fixed(1e-8), polarization),
        case("normlab", "examples", Fixed(1e-9), normlab_examples),
        case("clifford", "associativity", Exact, associativity),
        case("clifford", "gamma_relations", Exact, gamma_relations),
        case(
            "clifford",
            "even_subalgebra_generators",
            Exact,
            even_subalgebra_generators,
        ),
        case("clifford", "wedge_antisymmetry", Exact, wedge_antisymmetry),
        case(
            "clifford",
            "vector_square_is_inner",
            Run,
            dual!(vector_square_is_inner),
        ),
        case("clifford", "grade_projection", Run, dual!(grade_projection)),
        case("clifford", "examples", Exact, clifford_examples),
        case("observer", "quad_paths_agree", Exact, quad_paths_agree),
        case(
            "observer",
            "quad_worked_instance",
            Exact,
            quad_worked_instance,
        ),
        case(
            "observer",
            "quad_boost_invariance",
            Fixed(1e-9),
            quad_boost_invariance,
        ),
        case("observer", "quad_commutative", Exact, quad_commutative),
        case(
            "observer",
            "quad_exchange_invariance",
            Exact,
            quad_exchange_invariance,
        ),
        case(
            "observer",
            "quad_hemi_linearity",
            Exact,
            quad_hemi_linearity,
        ),
        case(
            "observer",
            "boost_plane_invariance",
            Exact,
            boost_plane_invariance,
        ),
        case(
            "observer",
            "boost_preserves_minkowski_norm",
            Fixed(1e-12),
            boost_preserves_minkowski_norm,
        ),
        case("observer", "circ_homomorphism", Exact, circ_homomorphism),
        case(
            "observer",
            "split_products_consistent",
            Exact,
            split_products_consistent,
        ),
        case(
            "observer",
            "frame_rotation_invariance",
            Fixed(1e-9),
            frame_rotation_invariance,
        ),
        case("observer", "examples", Fixed(1e-15), observer_examples),
    ]
}
