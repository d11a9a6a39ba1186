//! Interpolation by bounded analytic functions: the kernel-combination
//! interpolant, classical Pick positivity on the disc, the Pick constant,
//! and an explicit disc interpolant from the one-point-reduction
//! recursion.

use num_complex::Complex64;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::hardy::{check_distinct, HermitianMatrix, KernelCombo};
use crate::multiindex::MultiIndex;
use crate::points::BallPoint;
use crate::poly::ComplexPoly;
use crate::quotient::{build_qz, project_qz, smallest_psd_scale};

/// Points used when validating and measuring functions on the unit circle.
pub const BOUNDARY_GRID: usize = 4096;

/// Strictness threshold separating the recursive interpolant from the
/// degenerate (rank-deficient) case: the Pick matrix must have minimum
/// eigenvalue above `1e-9 * trace`.
pub const STRICTNESS_FACTOR: f64 = 1e-9;

/// Nodes in the ball paired with target values in the closed unit disc.
///
/// Values must lie strictly inside the disc; `new_relaxed` widens this to
/// the closed disc for norm and feasibility computations only — the
/// explicit interpolant construction always requires strict data.
#[derive(Debug, Clone)]
pub struct InterpolationData {
    points: Vec<BallPoint>,
    values: Vec<Complex64>,
    relaxed: bool,
}

impl InterpolationData {
    pub fn new(points: Vec<BallPoint>, values: Vec<Complex64>) -> Result<Self> {
        Self::build(points, values, false)
    }

    /// Accepts target moduli up to and including 1.
    pub fn new_relaxed(points: Vec<BallPoint>, values: Vec<Complex64>) -> Result<Self> {
        Self::build(points, values, true)
    }

    fn build(points: Vec<BallPoint>, values: Vec<Complex64>, relaxed: bool) -> Result<Self> {
        if points.is_empty() || points.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "interpolation needs matching nonempty nodes ({}) and values ({})",
                points.len(),
                values.len()
            )));
        }
        let n = points[0].dim();
        if points.iter().any(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch("nodes of mixed dimension".into()));
        }
        check_distinct(&points)?;
        let limit_ok = |w: &Complex64| if relaxed { w.norm() <= 1.0 + 1e-15 } else { w.norm() < 1.0 };
        if let Some(w) = values.iter().find(|w| !limit_ok(w)) {
            return Err(Error::InvalidArgument(format!(
                "target value with |w| = {} outside the admissible disc",
                w.norm()
            )));
        }
        Ok(InterpolationData { points, values, relaxed })
    }

    pub fn points(&self) -> &[BallPoint] {
        &self.points
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor requires at least one node
    }

    /// Ambient dimension of the nodes.
    pub fn ambient_dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    fn require_disc(&self) -> Result<()> {
        if self.ambient_dim() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "this operation is defined on the disc; data has dimension {}",
                self.ambient_dim()
            )));
        }
        Ok(())
    }

    fn disc_coords(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.coords()[0]).collect()
    }
}

/// The canonical interpolant in the span of kernel functions: the
/// combination whose coefficients solve the Gram system against the target
/// values. Reproduces the data at the nodes.
pub fn solve_psi(data: &InterpolationData) -> Result<KernelCombo> {
    let q = build_qz(data.points())?;
    project_qz(data.values(), &q)
}

/// The classical Pick matrix `[(1 - w_i conj(w_j)) / (1 - z_i conj(z_j))]`
/// of disc data.
pub fn pick_matrix(data: &InterpolationData) -> Result<HermitianMatrix> {
    data.require_disc()?;
    let z = data.disc_coords();
    let w = data.values();
    Ok(HermitianMatrix::from_fn(data.len(), |i, j| {
        (Complex64::ONE - w[i] * w[j].conj()) / (Complex64::ONE - z[i] * z[j].conj())
    }))
}

/// Disc data admits a contractive interpolant exactly when the Pick matrix
/// is positive semidefinite (tested against `-tol`).
pub fn pick_feasible(data: &InterpolationData, tol: f64) -> Result<bool> {
    Ok(pick_matrix(data)?.min_eigenvalue() >= -tol)
}

/// The Pick constant: the smallest sup-norm among bounded analytic
/// interpolants of disc data, found as the smallest `t >= 0` making the
/// scaled matrix `[(t^2 - w_i conj(w_j)) / (1 - z_i conj(z_j))]` positive
/// semidefinite.
pub fn pick_constant(data: &InterpolationData, cfg: &Config) -> Result<f64> {
    data.require_disc()?;
    let z = data.disc_coords();
    let gram = HermitianMatrix::from_fn(data.len(), |i, j| {
        (Complex64::ONE - z[i] * z[j].conj()).inv()
    });
    smallest_psd_scale(&gram, data.values(), cfg)
}

/// A quotient of univariate polynomials whose denominator does not vanish
/// on the closed unit disc.
#[derive(Debug, Clone)]
pub struct RationalFn1D {
    numerator: ComplexPoly,
    denominator: ComplexPoly,
}

impl RationalFn1D {
    /// Validates that the denominator has no zeros on the closed disc: it
    /// must keep a safe modulus on the boundary grid and wind zero times
    /// around the origin (argument principle).
    pub fn new(numerator: ComplexPoly, denominator: ComplexPoly) -> Result<Self> {
        if numerator.dim() != 1 || denominator.dim() != 1 {
            return Err(Error::DimensionMismatch(
                "rational functions here are univariate".into(),
            ));
        }
        if denominator.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let boundary: Vec<Complex64> = (0..BOUNDARY_GRID)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / BOUNDARY_GRID as f64;
                denominator
                    .eval(&[Complex64::from_polar(1.0, theta)])
                    .expect("univariate evaluation")
            })
            .collect();
        let max_mod = boundary.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let min_mod = boundary.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        if !(min_mod > 1e-12 * max_mod) {
            return Err(Error::InvalidArgument(
                "denominator nearly vanishes on the unit circle".into(),
            ));
        }
        let mut winding = 0.0;
        for k in 0..BOUNDARY_GRID {
            let a = boundary[k];
            let b = boundary[(k + 1) % BOUNDARY_GRID];
            winding += (b / a).arg();
        }
        let turns = winding / (2.0 * std::f64::consts::PI);
        if turns.abs() > 0.25 {
            return Err(Error::InvalidArgument(format!(
                "denominator winds {turns:.2} times around 0: zeros inside the disc"
            )));
        }
        Ok(RationalFn1D { numerator, denominator })
    }

    pub fn numerator(&self) -> &ComplexPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &ComplexPoly {
        &self.denominator
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let n = self.numerator.eval(&[z]).expect("univariate evaluation");
        let d = self.denominator.eval(&[z]).expect("univariate evaluation");
        n / d
    }

    /// Largest modulus over the uniform boundary grid.
    pub fn boundary_sup(&self, grid: usize) -> f64 {
        (0..grid)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / grid as f64;
                self.eval(Complex64::from_polar(1.0, theta)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Taylor coefficients at the origin up to `max_degree`, by the power
    /// series division recurrence (the denominator does not vanish at 0).
    pub fn taylor_coeffs(&self, max_degree: u32) -> Vec<Complex64> {
        let coeff = |p: &ComplexPoly, k: u32| p.coeff(&MultiIndex::new(vec![k]));
        let d0 = coeff(&self.denominator, 0);
        let mut out: Vec<Complex64> = Vec::with_capacity(max_degree as usize + 1);
        for k in 0..=max_degree {
            let mut v = coeff(&self.numerator, k);
            for (j, c) in out.iter().enumerate() {
                v -= c * coeff(&self.denominator, k - j as u32);
            }
            out.push(v / d0);
        }
        out
    }
}

/// Explicit contractive interpolant of strictly feasible disc data, by the
/// classical one-point-reduction recursion: peel the first node with a
/// disc automorphism in domain and range, solve the reduced problem, and
/// reassemble.
///
/// Degenerate data (Pick matrix singular up to the strictness threshold)
/// is rejected: the solution there is the rank-determined finite Blaschke
/// product, which this library does not construct.
pub fn schur_interpolant(data: &InterpolationData) -> Result<RationalFn1D> {
    data.require_disc()?;
    if data.is_relaxed() {
        return Err(Error::InvalidArgument(
            "explicit interpolation requires strict data (|w| < 1)".into(),
        ));
    }
    let pick = pick_matrix(data)?;
    let trace: f64 = (0..data.len()).map(|i| pick.entry(i, i).re).sum();
    let min_ev = pick.min_eigenvalue();
    if !(min_ev > STRICTNESS_FACTOR * trace) {
        return Err(Error::DegenerateData(format!(
            "Pick matrix minimum eigenvalue {min_ev:.3e} is below the strictness \
             threshold; the interpolant is a finite Blaschke product determined \
             by the matrix rank"
        )));
    }
    let z = data.disc_coords();
    let (num, den) = schur_recursion(&z, data.values())?;
    let phi = RationalFn1D::new(num, den)?;

    // both postconditions are certified before returning
    let residual = z
        .iter()
        .zip(data.values())
        .map(|(zi, wi)| (phi.eval(*zi) - wi).norm())
        .fold(0.0, f64::max);
    if residual > 1e-8 {
        return Err(Error::InternalConsistency(format!(
            "interpolant node residual {residual:.3e} exceeds 1e-8"
        )));
    }
    let sup = phi.boundary_sup(BOUNDARY_GRID);
    if sup > 1.0 + 1e-6 {
        return Err(Error::InternalConsistency(format!(
            "interpolant boundary sup {sup:.9} exceeds 1 + 1e-6"
        )));
    }
    Ok(phi)
}

fn schur_recursion(z: &[Complex64], w: &[Complex64]) -> Result<(ComplexPoly, ComplexPoly)> {
    if z.len() == 1 {
        return Ok((
            ComplexPoly::constant(1, w[0]),
            ComplexPoly::constant(1, Complex64::ONE),
        ));
    }
    let (z1, w1) = (z[0], w[0]);
    let mut z_rest = Vec::with_capacity(z.len() - 1);
    let mut w_rest = Vec::with_capacity(z.len() - 1);
    for (zi, wi) in z[1..].iter().zip(&w[1..]) {
        let blaschke = (zi - z1) / (Complex64::ONE - z1.conj() * zi);
        let moebius = (wi - w1) / (Complex64::ONE - w1.conj() * wi);
        let reduced = moebius / blaschke;
        if !(reduced.norm() < 1.0) {
            return Err(Error::DegenerateData(format!(
                "reduced target modulus {:.6} reaches the boundary; data is not \
                 strictly feasible",
                reduced.norm()
            )));
        }
        z_rest.push(*zi);
        w_rest.push(reduced);
    }
    let (n, d) = schur_recursion(&z_rest, &w_rest)?;

    // phi = (b n + w1 d) / (d + conj(w1) b n) with b = (z - z1)/(1 - conj(z1) z)
    let b_num = ComplexPoly::from_terms(
        1,
        vec![
            (MultiIndex::new(vec![0]), -z1),
            (MultiIndex::new(vec![1]), Complex64::ONE),
        ],
    )?;
    let b_den = ComplexPoly::from_terms(
        1,
        vec![
            (MultiIndex::new(vec![0]), Complex64::ONE),
            (MultiIndex::new(vec![1]), -z1.conj()),
        ],
    )?;
    let bn = b_num.mul(&n)?;
    let bd = b_den.mul(&d)?;
    let num = bn.add(&bd.scale(w1))?;
    let den = bd.add(&bn.scale(w1.conj()))?;
    Ok((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::hardy::eval_kernel_combo;
    use crate::quotient::{gram_operator_norm, module_map};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc(x: f64) -> BallPoint {
        BallPoint::disc(c(x, 0.0)).unwrap()
    }

    fn disc_data(z: &[f64], w: &[Complex64]) -> InterpolationData {
        InterpolationData::new(z.iter().map(|&x| disc(x)).collect(), w.to_vec()).unwrap()
    }

    /// Random strictly-feasible disc data: targets are drawn from a scaled
    /// contraction evaluated at the nodes.
    fn random_strict_data(rng: &mut ChaCha8Rng, m: usize) -> InterpolationData {
        loop {
            let mut zs: Vec<Complex64> = Vec::new();
            while zs.len() < m {
                let cand = c(rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7));
                if cand.norm() < 0.7 && zs.iter().all(|z| (z - cand).norm() > 0.1) {
                    zs.push(cand);
                }
            }
            let scale = rng.random_range(0.2..0.8);
            let w: Vec<Complex64> = zs.iter().map(|z| z * scale).collect();
            let points = zs.iter().map(|&z| BallPoint::disc(z).unwrap()).collect();
            let data = InterpolationData::new(points, w).unwrap();
            let pick = pick_matrix(&data).unwrap();
            let trace: f64 = (0..m).map(|i| pick.entry(i, i).re).sum();
            if pick.min_eigenvalue() > 1e-6 * trace {
                return data;
            }
        }
    }

    #[test]
    fn psi_on_one_node_is_the_constant() {
        let data = InterpolationData::new(vec![disc(0.0)], vec![c(0.3, 0.2)]).unwrap();
        let psi = solve_psi(&data).unwrap();
        assert_eq!(psi.coeffs(), &[c(0.3, 0.2)]);
    }

    #[test]
    fn psi_two_node_hand_solve() {
        let data = disc_data(&[0.0, 0.5], &[c(0.0, 0.0), c(0.5, 0.0)]);
        let psi = solve_psi(&data).unwrap();
        assert_abs_diff_eq!(psi.coeffs()[0].re, -1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(psi.coeffs()[1].re, 1.5, epsilon = 1e-12);
        // identical to the projection path by construction
        let again = project_qz(data.values(), &build_qz(data.points()).unwrap()).unwrap();
        assert_eq!(psi.coeffs(), again.coeffs());
    }

    #[test]
    fn psi_reproduces_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3usize {
            for m in 1..=6usize {
                let mut points = Vec::new();
                while points.len() < m {
                    let coords: Vec<Complex64> = (0..n)
                        .map(|_| c(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4)))
                        .collect();
                    let cand = match BallPoint::new(coords) {
                        Ok(p) => p,
                        Err(_) => continue,
                    };
                    if points.iter().all(|q: &BallPoint| {
                        q.coords()
                            .iter()
                            .zip(cand.coords())
                            .map(|(a, b)| (a - b).norm_sqr())
                            .sum::<f64>()
                            .sqrt()
                            > 0.15
                    }) {
                        points.push(cand);
                    }
                }
                let values: Vec<Complex64> = (0..m)
                    .map(|_| c(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6)) * 0.7)
                    .collect();
                let data = InterpolationData::new(points, values).unwrap();
                let psi = solve_psi(&data).unwrap();
                for (z, want) in data.points().iter().zip(data.values()) {
                    let got = eval_kernel_combo(&psi, z).unwrap();
                    assert!((got - want).norm() < 1e-10, "residual {}", (got - want).norm());
                }
            }
        }
    }

    #[test]
    fn pick_matrix_values() {
        let single = InterpolationData::new(vec![disc(0.3)], vec![c(0.5, 0.0)]).unwrap();
        let p = pick_matrix(&single).unwrap();
        assert_abs_diff_eq!(p.entry(0, 0).re, 0.75 / 0.91, epsilon = 1e-15);
        assert!(p.entry(0, 0).re > 0.0);

        let boundary = disc_data(&[0.0, 0.5], &[c(0.0, 0.0), c(0.5, 0.0)]);
        let p = pick_matrix(&boundary).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(p.entry(i, j).re, 1.0, epsilon = 1e-15);
                assert_abs_diff_eq!(p.entry(i, j).im, 0.0, epsilon = 1e-15);
            }
        }

        let infeasible = disc_data(&[0.0, 0.5], &[c(0.0, 0.0), c(0.6, 0.0)]);
        let p = pick_matrix(&infeasible).unwrap();
        let det = (p.entry(0, 0) * p.entry(1, 1) - p.entry(0, 1) * p.entry(1, 0)).re;
        assert_abs_diff_eq!(det, 0.64 / 0.75 - 1.0, epsilon = 1e-12);
        assert!(det < 0.0);
    }

    #[test]
    fn feasibility_matches_the_schwarz_lemma() {
        // data (0 -> 0, 1/2 -> w) is feasible exactly when |w| <= 1/2
        for w in [0.0, 0.2, 0.4, 0.499, 0.5] {
            let data =
                InterpolationData::new_relaxed(vec![disc(0.0), disc(0.5)], vec![c(0.0, 0.0), c(w, 0.0)])
                    .unwrap();
            assert!(pick_feasible(&data, 1e-12).unwrap(), "w = {w}");
        }
        for w in [0.501, 0.6, 0.9] {
            let data = disc_data(&[0.0, 0.5], &[c(0.0, 0.0), c(w, 0.0)]);
            assert!(!pick_feasible(&data, 1e-12).unwrap(), "w = {w}");
        }
        // identity data and zero data are feasible
        let idd = disc_data(&[0.1, -0.4, 0.3], &[c(0.1, 0.0), c(-0.4, 0.0), c(0.3, 0.0)]);
        assert!(pick_feasible(&idd, 1e-12).unwrap());
        let zero = disc_data(&[0.1, -0.4, 0.3], &[c(0.0, 0.0); 3]);
        assert!(pick_feasible(&zero, 1e-12).unwrap());
    }

    #[test]
    fn pick_constant_values() {
        let cfg = Config::default();
        let single = InterpolationData::new(vec![disc(0.3)], vec![c(0.3, -0.4)]).unwrap();
        assert_abs_diff_eq!(pick_constant(&single, &cfg).unwrap(), 0.5, epsilon = 1e-9);

        for w in [0.1, 0.25, 0.3, 0.5] {
            let data = disc_data(&[0.0, 0.5], &[c(0.0, 0.0), c(w, 0.0)]);
            assert_abs_diff_eq!(pick_constant(&data, &cfg).unwrap(), 2.0 * w, epsilon = 1e-8);
        }
    }

    #[test]
    fn pick_constant_scales_with_the_data() {
        let cfg = Config::default();
        let z = [0.1, -0.3, 0.5];
        let w = [c(0.2, 0.1), c(-0.1, 0.3), c(0.4, 0.0)];
        let base = pick_constant(&disc_data(&z, &w), &cfg).unwrap();
        let half: Vec<Complex64> = w.iter().map(|v| v * 0.5).collect();
        let got = pick_constant(&disc_data(&z, &half), &cfg).unwrap();
        assert_abs_diff_eq!(got, 0.5 * base, epsilon = 1e-9);
    }

    #[test]
    fn pick_constant_agrees_with_the_module_map_norm() {
        let cfg = Config::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = rng.random_range(1..=5);
            let data = random_strict_data(&mut rng, m);
            let t = pick_constant(&data, &cfg).unwrap();
            let norm = gram_operator_norm(
                &module_map(data.points(), data.values()).unwrap(),
                &cfg,
            )
            .unwrap();
            assert!((t - norm).abs() <= 1e-8, "pick {t} vs norm {norm}");
            // feasibility bridge
            let feasible = pick_feasible(&data, 1e-12).unwrap();
            assert_eq!(feasible, norm <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn interpolant_base_case() {
        let data = InterpolationData::new(vec![disc(0.2)], vec![c(0.4, 0.3)]).unwrap();
        let phi = schur_interpolant(&data).unwrap();
        assert!((phi.eval(c(0.7, 0.0)) - c(0.4, 0.3)).norm() < 1e-15);
    }

    #[test]
    fn interpolant_two_nodes() {
        let data = disc_data(&[0.0, 0.5], &[c(0.0, 0.0), c(0.4, 0.0)]);
        let phi = schur_interpolant(&data).unwrap();
        assert!((phi.eval(c(0.0, 0.0))).norm() < 1e-12);
        assert!((phi.eval(c(0.5, 0.0)) - c(0.4, 0.0)).norm() < 1e-12);
        assert!(phi.boundary_sup(BOUNDARY_GRID) <= 1.0 + 1e-6);
    }

    #[test]
    fn interpolant_random_strict_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..15 {
            let m = rng.random_range(1..=5);
            let data = random_strict_data(&mut rng, m);
            let phi = schur_interpolant(&data).unwrap();
            for (z, w) in data.points().iter().zip(data.values()) {
                assert!((phi.eval(z.coords()[0]) - w).norm() <= 1e-8);
            }
            assert!(phi.boundary_sup(BOUNDARY_GRID) <= 1.0 + 1e-6);
        }
    }

    #[test]
    fn degenerate_data_is_rejected() {
        // boundary Schwarz data: Pick matrix is singular
        let data = disc_data(&[0.0, 0.5], &[c(0.0, 0.0), c(0.5, 0.0)]);
        match schur_interpolant(&data) {
            Err(Error::DegenerateData(_)) => {}
            other => panic!("expected degenerate-data error, got {other:?}"),
        }
        // relaxed data is rejected outright
        let relaxed = InterpolationData::new_relaxed(
            vec![disc(0.0), disc(0.5)],
            vec![c(0.0, 0.0), c(0.4, 0.0)],
        )
        .unwrap();
        assert!(schur_interpolant(&relaxed).is_err());
    }

    #[test]
    fn rational_function_rejects_disc_zeros() {
        // denominator z - 1/2 vanishes inside the disc
        let num = ComplexPoly::constant(1, Complex64::ONE);
        let den = ComplexPoly::from_terms(
            1,
            vec![
                (MultiIndex::new(vec![0]), c(-0.5, 0.0)),
                (MultiIndex::new(vec![1]), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        assert!(RationalFn1D::new(num, den).is_err());
        // 1 - z/2 does not vanish on the closed disc
        let num = ComplexPoly::constant(1, Complex64::ONE);
        let den = ComplexPoly::from_terms(
            1,
            vec![
                (MultiIndex::new(vec![0]), c(1.0, 0.0)),
                (MultiIndex::new(vec![1]), c(-0.5, 0.0)),
            ],
        )
        .unwrap();
        assert!(RationalFn1D::new(num, den).is_ok());
    }

    #[test]
    fn rejects_values_outside_the_disc() {
        assert!(InterpolationData::new(vec![disc(0.0)], vec![c(1.0, 0.0)]).is_err());
        assert!(InterpolationData::new_relaxed(vec![disc(0.0)], vec![c(1.0, 0.0)]).is_ok());
        assert!(InterpolationData::new_relaxed(vec![disc(0.0)], vec![c(1.1, 0.0)]).is_err());
    }
}
