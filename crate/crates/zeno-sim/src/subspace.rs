//! Exact dynamics of one protocol step restricted to the no-click subspace.
//!
//! One step rotates both qubits by a small angle and keeps the no-click
//! branch of the threshold measurement. On the subspace spanned by
//! `[|00>, |10>, |01>]` (fixed basis order throughout this module) that
//! branch is the real 3x3 contraction [`build_w`]. Everything downstream is
//! algebra on these matrices: repeated steps, the steered composite with a
//! mid-protocol phase flip, and the scalar recurrence.

use crate::error::{Error, Result};
use crate::qstate::SingleQubitGate;

/// `pi / (2 sqrt(2))`: the total rotation angle `k * theta` at which the
/// steering completes.
pub const STEERING_ANGLE: f64 = std::f64::consts::PI / (2.0 * std::f64::consts::SQRT_2);

/// Protocol angle for `k` steps: `theta = STEERING_ANGLE / k`.
pub fn protocol_theta(k: usize) -> f64 {
    STEERING_ANGLE / k as f64
}

/// In-plane rotation `[[cos, -sin], [sin, cos]]`.
pub fn rotation(theta: f64) -> SingleQubitGate {
    assert!(theta.is_finite(), "rotation angle must be finite");
    let (s, c) = theta.sin_cos();
    SingleQubitGate::from_matrix([[(c).into(), (-s).into()], [(s).into(), (c).into()]])
}

/// Real 3x3 operator on the no-click subspace, basis `[|00>, |10>, |01>]`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SubspaceMatrix([[f64; 3]; 3]);

impl SubspaceMatrix {
    pub fn new(entries: [[f64; 3]; 3]) -> Self {
        SubspaceMatrix(entries)
    }

    pub fn identity() -> Self {
        SubspaceMatrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    /// Phase flip of the first qubit: `|10> -> -|10>`.
    pub fn phase_flip() -> Self {
        SubspaceMatrix([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.0[row][col]
    }

    pub fn mul(&self, rhs: &SubspaceMatrix) -> SubspaceMatrix {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        SubspaceMatrix(out)
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2];
        }
        out
    }

    pub fn max_abs_diff(&self, rhs: &SubspaceMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - rhs.0[i][j]).abs());
            }
        }
        worst
    }

    /// Spectral norm, by power iteration on `M^T M`.
    pub fn operator_norm(&self) -> f64 {
        let mut v = [1.0 / 3f64.sqrt(); 3];
        let mut lambda = 0.0;
        for _ in 0..200 {
            // w = M^T (M v)
            let mv = self.apply(v);
            let mut w = [0.0; 3];
            for (j, wj) in w.iter_mut().enumerate() {
                *wj = (0..3).map(|i| self.0[i][j] * mv[i]).sum();
            }
            let norm = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            lambda = norm;
            for (vi, wi) in v.iter_mut().zip(&w) {
                *vi = wi / norm;
            }
        }
        lambda.sqrt()
    }
}

/// Amplitudes of a subspace vector `c00 |00> + c10 |10> + c01 |01>`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SubspaceState {
    pub c00: f64,
    pub c10: f64,
    pub c01: f64,
}

impl SubspaceState {
    pub fn new(c00: f64, c10: f64, c01: f64) -> Self {
        SubspaceState { c00, c10, c01 }
    }

    pub fn ket_00() -> Self {
        SubspaceState::new(1.0, 0.0, 0.0)
    }

    pub fn ket_10() -> Self {
        SubspaceState::new(0.0, 1.0, 0.0)
    }

    pub fn ket_01() -> Self {
        SubspaceState::new(0.0, 0.0, 1.0)
    }

    /// `(|01> + |10>)/sqrt(2)`.
    pub fn psi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        SubspaceState::new(0.0, h, h)
    }

    /// `(|01> - |10>)/sqrt(2)`, the vector left invariant by every step.
    pub fn psi_minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        SubspaceState::new(0.0, -h, h)
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.c00, self.c10, self.c01]
    }

    pub fn norm2(&self) -> f64 {
        self.c00 * self.c00 + self.c10 * self.c10 + self.c01 * self.c01
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm2() - 1.0).abs() <= 1e-12
    }

    pub fn dot(&self, rhs: &SubspaceState) -> f64 {
        self.c00 * rhs.c00 + self.c10 * rhs.c10 + self.c01 * rhs.c01
    }

    /// `|<self|rhs>|^2 / (norm2 * norm2)`; tolerates unnormalized inputs.
    pub fn fidelity(&self, rhs: &SubspaceState) -> f64 {
        let d = self.dot(rhs);
        d * d / (self.norm2() * rhs.norm2())
    }

    pub fn normalized(&self) -> Result<SubspaceState> {
        let n2 = self.norm2();
        if n2 <= 0.0 {
            return Err(Error::DegenerateState);
        }
        let inv = 1.0 / n2.sqrt();
        Ok(SubspaceState::new(
            self.c00 * inv,
            self.c10 * inv,
            self.c01 * inv,
        ))
    }
}

/// One-step no-click operator
/// `[[c^2, -sc, -sc], [sc, c^2, -s^2], [sc, -s^2, c^2]]`.
pub fn build_w(theta: f64) -> SubspaceMatrix {
    assert!(theta.is_finite(), "step angle must be finite");
    let (s, c) = theta.sin_cos();
    let (cc, ss, sc) = (c * c, s * s, s * c);
    SubspaceMatrix([[cc, -sc, -sc], [sc, cc, -ss], [sc, -ss, cc]])
}

/// `m^k` by exponentiation by squaring.
pub fn matrix_power(m: &SubspaceMatrix, k: usize) -> SubspaceMatrix {
    let mut result = SubspaceMatrix::identity();
    let mut base = *m;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = base.mul(&result);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    result
}

/// The steered composite: `k` steps, a phase flip of the first qubit, then
/// `k/2` more steps. `k` must be even.
///
/// With `k * theta = STEERING_ANGLE` this maps `|00> -> psi_minus` and
/// `|10> -> -psi_plus` up to a success probability close to one.
pub fn intelligent_evolution(k: usize, theta: f64) -> Result<SubspaceMatrix> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "step count must be a positive even integer, got {k}"
        )));
    }
    let m = build_w(theta);
    let mk = matrix_power(&m, k);
    let mk2 = matrix_power(&m, k / 2);
    Ok(mk2.mul(&SubspaceMatrix::phase_flip()).mul(&mk))
}

/// One exact update of the symmetric parameterization `a |00> + b (|01> + |10>)`.
///
/// Applies the one-step operator to `(a, b, b)`, reads off the survival
/// probability as the squared norm of the unnormalized image, and returns the
/// renormalized pair together with that survival probability. Requires
/// `a^2 + 2 b^2 = 1` within 1e-9.
pub fn recurrence_step(a: f64, b: f64, theta: f64) -> Result<(f64, f64, f64)> {
    let norm2 = a * a + 2.0 * b * b;
    if (norm2 - 1.0).abs() > 1e-9 {
        return Err(Error::NormContract { norm2 });
    }
    let v = build_w(theta).apply([a, b, b]);
    let survival = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if survival <= 0.0 {
        return Err(Error::DegenerateState);
    }
    let inv = 1.0 / survival.sqrt();
    Ok((v[0] * inv, v[1] * inv, survival))
}

/// Small-angle closed form for the `|00> -> |00>` matrix element after `k`
/// steps: `cos(sqrt(2) k sin(theta))`. Exact up to `O(theta)` of the true
/// entry; zero at `k * theta = STEERING_ANGLE`.
pub fn analytic_m11(k: usize, theta: f64) -> f64 {
    (std::f64::consts::SQRT_2 * k as f64 * theta.sin()).cos()
}

/// Squared norm of `operator * initial`: the probability that every
/// measurement along the way stays silent. `initial` must be normalized.
pub fn success_probability(operator: &SubspaceMatrix, initial: &SubspaceState) -> f64 {
    assert!(
        initial.is_normalized(),
        "success_probability requires a normalized initial state"
    );
    let v = operator.apply(initial.coords());
    let p = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    debug_assert!((0.0..=1.0 + 1e-12).contains(&p), "contraction bound broken");
    p
}

/// Outcome summary of a subspace evolution from a fixed initial state.
#[derive(Clone, Debug)]
pub struct EvolutionReport {
    pub operator: SubspaceMatrix,
    pub success_prob: f64,
    pub final_state: SubspaceState,
    pub fidelity_to_target: f64,
}

impl EvolutionReport {
    pub fn new(
        operator: SubspaceMatrix,
        initial: &SubspaceState,
        target: &SubspaceState,
    ) -> Result<Self> {
        let image = operator.apply(initial.coords());
        let success_prob = image[0] * image[0] + image[1] * image[1] + image[2] * image[2];
        let final_state = SubspaceState::new(image[0], image[1], image[2]).normalized()?;
        let fidelity_to_target = final_state.fidelity(target);
        Ok(EvolutionReport {
            operator,
            success_prob,
            final_state,
            fidelity_to_target,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::StateVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const M100_EXPECTED: [[f64; 3]; 3] = [
        [0.0039, -0.7028, -0.7028],
        [0.7028, 0.4980, -0.5020],
        [0.7028, -0.5020, 0.4980],
    ];

    const STEERED_100_EXPECTED: [[f64; 3]; 3] = [
        [0.0027, 0.0011, -0.9958],
        [-0.7008, -0.6994, 0.0027],
        [0.7047, -0.7033, -0.0012],
    ];

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Independent construction of the one-step operator: rotate both qubits
    /// of a full two-qubit basis state, project, and read the subspace columns.
    fn w_from_full_space(theta: f64) -> SubspaceMatrix {
        let g = rotation(theta);
        let mut cols = [[0.0; 3]; 3];
        let basis: [&[u8]; 3] = [&[0, 0], &[1, 0], &[0, 1]];
        for (j, bits) in basis.iter().enumerate() {
            let s = StateVector::basis_state(bits)
                .unwrap()
                .apply_single(&g, 0)
                .unwrap()
                .apply_single(&g, 1)
                .unwrap();
            let (p, _) = s.j_project(0, 1).unwrap();
            cols[j] = [p.amp(0b00).re, p.amp(0b10).re, p.amp(0b01).re];
        }
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = cols[j][i];
            }
        }
        SubspaceMatrix::new(m)
    }

    #[test]
    fn rotation_examples() {
        let id = rotation(0.0);
        assert!(approx(id.matrix()[0][0].re, 1.0, 1e-15));
        assert!(approx(id.matrix()[0][1].re, 0.0, 1e-15));

        let quarter = rotation(std::f64::consts::FRAC_PI_2);
        assert!(approx(quarter.matrix()[0][1].re, -1.0, 1e-15));
        assert!(approx(quarter.matrix()[1][0].re, 1.0, 1e-15));

        // R(t) then R(-t) is the identity
        let s = StateVector::plus_state(1)
            .apply_single(&rotation(0.37), 0)
            .unwrap()
            .apply_single(&rotation(-0.37), 0)
            .unwrap();
        let p = StateVector::plus_state(1);
        assert!(crate::qstate::fidelity(&s, &p).unwrap() > 1.0 - 1e-14);
    }

    #[test]
    fn one_step_operator_closed_form() {
        assert_eq!(build_w(0.0), SubspaceMatrix::identity());

        let m = build_w(std::f64::consts::FRAC_PI_4);
        let expect = [[0.5, -0.5, -0.5], [0.5, 0.5, -0.5], [0.5, -0.5, 0.5]];
        assert!(m.max_abs_diff(&SubspaceMatrix::new(expect)) < 1e-15);
    }

    #[test]
    fn one_step_operator_matches_full_space_construction() {
        let theta = protocol_theta(100);
        assert!(build_w(theta).max_abs_diff(&w_from_full_space(theta)) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let theta = rng.gen_range(-1.5..1.5);
            let diff = build_w(theta).max_abs_diff(&w_from_full_space(theta));
            assert!(diff < 1e-12, "theta={theta}, diff={diff}");
        }
    }

    #[test]
    fn matrix_power_basics() {
        let m = build_w(0.3);
        assert_eq!(matrix_power(&m, 0), SubspaceMatrix::identity());
        assert!(matrix_power(&m, 2).max_abs_diff(&m.mul(&m)) < 1e-15);
    }

    #[test]
    fn matrix_power_matches_naive_product() {
        let m = build_w(protocol_theta(100));
        let mut naive = SubspaceMatrix::identity();
        for _ in 0..100 {
            naive = m.mul(&naive);
        }
        assert!(matrix_power(&m, 100).max_abs_diff(&naive) < 1e-12);
    }

    #[test]
    fn hundred_step_matrix_values() {
        let m100 = matrix_power(&build_w(protocol_theta(100)), 100);
        assert!(m100.max_abs_diff(&SubspaceMatrix::new(M100_EXPECTED)) < 5e-5);
    }

    #[test]
    fn steered_composite_values() {
        let g = intelligent_evolution(100, protocol_theta(100)).unwrap();
        assert!(g.max_abs_diff(&SubspaceMatrix::new(STEERED_100_EXPECTED)) < 5e-5);
    }

    #[test]
    fn steered_composite_targets() {
        let g = intelligent_evolution(100, protocol_theta(100)).unwrap();
        let from_00 = SubspaceState::new(
            g.apply([1.0, 0.0, 0.0])[0],
            g.apply([1.0, 0.0, 0.0])[1],
            g.apply([1.0, 0.0, 0.0])[2],
        );
        assert!(from_00.fidelity(&SubspaceState::psi_minus()) > 0.999);
        let from_10 = SubspaceState::new(
            g.apply([0.0, 1.0, 0.0])[0],
            g.apply([0.0, 1.0, 0.0])[1],
            g.apply([0.0, 1.0, 0.0])[2],
        );
        assert!(from_10.fidelity(&SubspaceState::psi_plus()) > 0.999);
    }

    #[test]
    fn steered_composite_rejects_odd_step_counts() {
        assert!(matches!(
            intelligent_evolution(99, 0.01),
            Err(Error::InvalidArgument(_))
        ));
        assert!(intelligent_evolution(0, 0.01).is_err());
    }

    #[test]
    fn recurrence_survival_from_the_origin() {
        for theta in [0.01, 0.1, 0.5] {
            let (_, _, survival) = recurrence_step(1.0, 0.0, theta).unwrap();
            assert!(approx(survival, 1.0 - theta.sin().powi(4), 1e-14));
        }
        let (a, b, survival) = recurrence_step(1.0, 0.0, 0.0).unwrap();
        assert_eq!((a, b, survival), (1.0, 0.0, 1.0));
    }

    #[test]
    fn recurrence_matches_matrix_path() {
        let theta = protocol_theta(100);
        let m = build_w(theta);
        let (mut a, mut b) = (1.0, 0.0);
        let mut v = [1.0, 0.0, 0.0];
        for step in 0..100 {
            let (na, nb, _) = recurrence_step(a, b, theta).unwrap();
            a = na;
            b = nb;
            v = m.apply(v);
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let (va, vb) = (v[0] / n, v[1] / n);
            assert!(approx(a, va, 1e-12), "step {step}");
            assert!(approx(b, vb, 1e-12), "step {step}");
        }
    }

    #[test]
    fn recurrence_rejects_unbalanced_input() {
        assert!(matches!(
            recurrence_step(1.0, 0.5, 0.01),
            Err(Error::NormContract { .. })
        ));
    }

    #[test]
    fn small_angle_matrix_element() {
        assert_eq!(analytic_m11(0, 0.5), 1.0);

        // the approximation error is bounded by theta at the steering point
        let theta = protocol_theta(100);
        let exact = matrix_power(&build_w(theta), 100).entry(0, 0);
        assert!(approx(exact, 0.0039, 5e-5));
        assert!((analytic_m11(100, theta) - exact).abs() <= theta);

        // and the closed form itself vanishes as theta -> 0
        let k = 1_000_000;
        assert!(analytic_m11(k, protocol_theta(k)).abs() < 1e-9);
    }

    #[test]
    fn success_probability_examples() {
        let id = SubspaceMatrix::identity();
        assert!(approx(
            success_probability(&id, &SubspaceState::ket_00()),
            1.0,
            1e-15
        ));

        let m100 = matrix_power(&build_w(protocol_theta(100)), 100);
        let p = success_probability(&m100, &SubspaceState::ket_00());
        assert!(approx(p, 0.988, 1e-3));

        let m1000 = matrix_power(&build_w(protocol_theta(1000)), 1000);
        let p = success_probability(&m1000, &SubspaceState::ket_00());
        assert!(approx(p, 0.999, 5e-4));
        let v = m1000.apply([1.0, 0.0, 0.0]);
        let final_state = SubspaceState::new(v[0], v[1], v[2]);
        assert!(final_state.fidelity(&SubspaceState::psi_plus()) > 1.0 - 1e-6);
    }

    #[test]
    fn singlet_is_a_fixed_point_for_every_angle() {
        let pm = SubspaceState::psi_minus().coords();
        for i in 0..100 {
            let theta = i as f64 * (std::f64::consts::PI / 99.0);
            let v = build_w(theta).apply(pm);
            for (a, b) in v.iter().zip(&pm) {
                assert!(approx(*a, *b, 1e-12), "theta={theta}");
            }
        }
    }

    #[test]
    fn steering_increment_has_a_guaranteed_floor() {
        // over nonnegative-amplitude states, one step advances b - a by at
        // least sin(theta) cos(theta)
        for i in 1..=100 {
            let theta = 0.0025 * i as f64; // up to 0.25
            let floor = theta.sin() * theta.cos();
            for j in 0..=80 {
                let phi = std::f64::consts::FRAC_PI_2 * j as f64 / 80.0;
                let (a, b) = (phi.cos(), phi.sin() * std::f64::consts::FRAC_1_SQRT_2);
                let (na, nb, _) = recurrence_step(a, b, theta).unwrap();
                let delta = (nb - na) - (b - a);
                assert!(
                    delta >= floor - 1e-12,
                    "theta={theta} phi={phi} delta={delta} floor={floor}"
                );
            }
        }
    }

    #[test]
    fn steering_completes_within_the_expected_step_budget() {
        // smallest k reaching 0.99 fidelity to psi_plus satisfies
        // k * theta <= 1.05 * STEERING_ANGLE for theta <= 0.01
        for theta in [0.002, 0.005, 0.01] {
            let m = build_w(theta);
            let mut v = [1.0, 0.0, 0.0];
            let mut k = 0;
            loop {
                k += 1;
                v = m.apply(v);
                let s = SubspaceState::new(v[0], v[1], v[2]);
                if s.fidelity(&SubspaceState::psi_plus()) >= 0.99 {
                    break;
                }
                assert!(k < 10_000, "steering did not complete at theta={theta}");
            }
            assert!(
                k as f64 * theta <= STEERING_ANGLE * 1.05,
                "theta={theta} k={k}"
            );
        }
    }

    #[test]
    fn one_step_operator_is_a_contraction() {
        for i in 0..100 {
            let theta = i as f64 * (std::f64::consts::PI / 99.0);
            let m = build_w(theta);
            for j in 0..3 {
                let col =
                    (m.entry(0, j).powi(2) + m.entry(1, j).powi(2) + m.entry(2, j).powi(2)).sqrt();
                assert!(col <= 1.0 + 1e-12);
            }
            assert!(m.operator_norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn evolution_report_is_self_consistent() {
        let g = intelligent_evolution(100, protocol_theta(100)).unwrap();
        let report =
            EvolutionReport::new(g, &SubspaceState::ket_00(), &SubspaceState::psi_minus()).unwrap();
        assert!(approx(report.success_prob, 0.988, 1e-3));
        assert!(report.fidelity_to_target > 0.999);
        assert!(report.final_state.is_normalized());
    }
}
