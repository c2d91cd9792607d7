//! Property tests for the interval layer, cube operations, the functional
//! enclosure, the Krawczyk image, pruning and time translation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wright_sops::functional::{CenterPoint, galerkin_residual, point_residual, tail_bounds};
use wright_sops::krawczyk::{Verdict, build_preconditioner, krawczyk_outer};
use wright_sops::oracle::solve;
use wright_sops::prune::{PruneFlag, PruneSteps, prune, prune_with};
use wright_sops::seed_cover::time_translate;
use wright_sops::sequence::{Coord, Cube, ProjectedCube, convolve_truncated, parse_cube_record};
use wright_sops::{ComplexInterval, Interval, IntervalMatrix};

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

fn interval() -> impl Strategy<Value = Interval> {
    (-1e3f64..1e3, 0.0f64..10.0).prop_map(|(lo, w)| iv(lo, lo + w))
}

fn inside(x: Interval, t: f64) -> f64 {
    (x.lo() + t * x.width()).clamp(x.lo(), x.hi())
}

fn sample_in(rng: &mut ChaCha8Rng, x: Interval) -> f64 {
    inside(x, rng.gen_range(0.0..=1.0))
}

/// Phase-fixed cube around a random point, each component with its own radius.
fn random_cube(rng: &mut ChaCha8Rng, m: usize) -> Cube {
    let a0 = rng.gen_range(1.6..2.3);
    let alpha = iv(a0, a0 + rng.gen_range(0.0..1e-2));
    let omega = Interval::centered(rng.gen_range(1.2..2.0), rng.gen_range(0.0..1e-2));
    let coeffs = (1..=m)
        .map(|k| {
            let r = rng.gen_range(0.0..0.3) / (k * k) as f64;
            let w = rng.gen_range(0.0..1e-2) / k as f64;
            if k == 1 {
                ComplexInterval::new(iv(0.5, 0.5 + w), Interval::ZERO)
            } else {
                let z = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
                ComplexInterval::new(Interval::centered(z.re, w), Interval::centered(z.im, w))
            }
        })
        .collect();
    Cube::new(alpha, omega, coeffs, rng.gen_range(0.0..1.0), 3.0).unwrap()
}

/// Cube of radius `r` around the true solution at `alpha_star`, shifted by fractions of `r`.
fn root_cube(rng: &mut ChaCha8Rng, alpha_star: f64, m: usize) -> (Cube, CenterPoint) {
    let root = solve(alpha_star, 24).unwrap();
    let w = rng.gen_range(1e-4..1e-3);
    let t = rng.gen_range(0.0..=1.0);
    let alpha = iv(alpha_star - t * w, alpha_star + (1.0 - t) * w);
    let r = rng.gen_range(1e-4..3e-3);
    let mut shift = || rng.gen_range(-0.9..0.9) * r;
    let omega = Interval::centered(root.omega + shift(), r);
    let coeffs = root.coeffs[..m]
        .iter()
        .enumerate()
        .map(|(i, z)| {
            if i == 0 {
                ComplexInterval::new(Interval::centered(z.re + shift(), r), Interval::ZERO)
            } else {
                ComplexInterval::new(Interval::centered(z.re + shift(), r), Interval::centered(z.im + shift(), r))
            }
        })
        .collect();
    let c0 = rng.gen_range(0.05..1.0);
    (Cube::new(alpha, omega, coeffs, c0, 3.0).unwrap(), root)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn arithmetic_encloses_rounded_results(a in interval(), b in interval(), s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let (x, y) = (inside(a, s), inside(b, t));
        prop_assert!((a + b).contains(x + y));
        prop_assert!((a - b).contains(x - y));
        prop_assert!((a * b).contains(x * y));
        prop_assert!(a.sqr().contains(x * x));
        if !b.contains(0.0) {
            prop_assert!(a.div(b).unwrap().contains(x / y));
        }
        if a.lo() >= 0.0 {
            prop_assert!(a.sqrt().unwrap().contains(x.sqrt()));
        }
    }

    #[test]
    fn hull_contains_and_intersection_is_contained(a in interval(), b in interval()) {
        let h = a.hull(b);
        prop_assert!(a.subset_of(h) && b.subset_of(h));
        let i = a.intersect(b);
        prop_assert!(i.subset_of(a) && i.subset_of(b));
        let disjoint = a.hi() < b.lo() || b.hi() < a.lo();
        prop_assert_eq!(i.is_empty(), disjoint);
    }

    #[test]
    fn modulus_bounds_bracket_every_point(re in interval(), im in interval(), s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let z = ComplexInterval::new(re, im);
        let abs = inside(re, s).hypot(inside(im, t));
        // hypot is accurate to one unit in the last place.
        prop_assert!(z.mignitude() <= abs * (1.0 + f64::EPSILON));
        prop_assert!(abs * (1.0 - f64::EPSILON) <= z.modulus_upper());
    }

    #[test]
    fn matrix_products_enclose_point_products(seed in any::<u64>(), n in 1usize..5) {
        // Entries are multiples of 1/8 so every point product is exact in binary64.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut entry = || {
            let lo = rng.gen_range(-64i32..64) as f64 / 8.0;
            iv(lo, lo + rng.gen_range(0i32..16) as f64 / 8.0)
        };
        let mut a = IntervalMatrix::zeros(n, n);
        let mut b = IntervalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = entry();
                b[(i, j)] = entry();
            }
        }
        let v: Vec<Interval> = (0..n).map(|_| entry()).collect();
        let pick = |rng: &mut ChaCha8Rng, x: Interval| x.lo() + (rng.gen_range(0i32..=16) as f64 / 8.0).min(x.width());
        let pa = DMatrix::from_fn(n, n, |i, j| pick(&mut rng, a[(i, j)]));
        let pb = DMatrix::from_fn(n, n, |i, j| pick(&mut rng, b[(i, j)]));
        let pv: Vec<f64> = v.iter().map(|x| pick(&mut rng, *x)).collect();
        prop_assert!(a.mul(&b).contains_point(&(&pa * &pb)));
        let av = a.mul_vec(&v);
        for i in 0..n {
            let exact: f64 = (0..n).map(|j| pa[(i, j)] * pv[j]).sum();
            prop_assert!(av[i].contains(exact));
        }
    }

    #[test]
    fn split_halves_hull_back_to_the_cube(seed in any::<u64>(), m in 5usize..12, dim in 0usize..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_cube(&mut rng, m);
        let c = Coord::from_dim(dim % (2 * m + 1));
        if let Ok((l, r)) = x.split(c) {
            prop_assert!(l.subset_of(&x) && r.subset_of(&x));
            prop_assert_eq!(l.hull(&r).unwrap(), x.clone());
            prop_assert_eq!(l.get(c).hi(), r.get(c).lo());
        } else {
            prop_assert!(x.get(c).is_point());
        }
    }

    #[test]
    fn records_round_trip_exactly(seed in any::<u64>(), m in 1usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = random_cube(&mut rng, m);
        x.tail_c0 = f64::from_bits(rng.gen_range(0..0x7fefffffffffffffu64));
        prop_assert_eq!(parse_cube_record(&x.to_record(), 1).unwrap(), x);
    }

    #[test]
    fn truncated_convolution_matches_brute_force(seed in any::<u64>(), m in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seq = || -> Vec<Complex64> {
            (0..m).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
        };
        let (a, b) = (seq(), seq());
        let omega = rng.gen_range(-3.0..3.0);
        let point = |v: &[Complex64]| -> Vec<ComplexInterval> { v.iter().map(|z| ComplexInterval::point(z.re, z.im)).collect() };
        let got = convolve_truncated(&point(&a), &point(&b), Interval::point(omega)).unwrap();
        // Two-sided sum over j with a_{-j} = conj(a_j) and a_0 = 0, twisted by e^{-i omega j}.
        let at = |v: &[Complex64], j: i64| -> Complex64 {
            match j {
                0 => Complex64::new(0.0, 0.0),
                j if j > 0 && j as usize <= m => v[j as usize - 1],
                j if j < 0 && (-j) as usize <= m => v[(-j) as usize - 1].conj(),
                _ => Complex64::new(0.0, 0.0),
            }
        };
        for k in 1..=m as i64 {
            let mut want = Complex64::new(0.0, 0.0);
            for j in -(m as i64)..=m as i64 {
                want += Complex64::from_polar(1.0, -omega * j as f64) * at(&a, j) * at(&b, k - j);
            }
            let z = got[k as usize - 1];
            let slack = 1e-12 * (1.0 + want.norm());
            prop_assert!(z.re.lo() - slack <= want.re && want.re <= z.re.hi() + slack, "k = {}: {} vs {:?}", k, want, z);
            prop_assert!(z.im.lo() - slack <= want.im && want.im <= z.im.hi() + slack, "k = {}: {} vs {:?}", k, want, z);
        }
    }

    #[test]
    fn l1_bound_dominates_sampled_sequences(seed in any::<u64>(), m in 5usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_cube(&mut rng, m);
        let mut sum = 0.0;
        for c in &x.coeffs {
            sum += sample_in(&mut rng, c.re).hypot(sample_in(&mut rng, c.im));
        }
        for k in m + 1..=2000 {
            sum += x.tail_c0 / (k as f64).powf(x.decay_s) * rng.gen_range(0.9..=1.0);
        }
        prop_assert!(2.0 * sum <= x.l1_upper_bound());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn residual_enclosure_is_inclusion_monotone(seed in any::<u64>(), m in 5usize..11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_cube(&mut rng, m);
        let mut y = x.clone();
        let shrink = |rng: &mut ChaCha8Rng, v: Interval| {
            let (a, b) = (sample_in(rng, v), sample_in(rng, v));
            iv(a.min(b), a.max(b))
        };
        y.alpha = shrink(&mut rng, x.alpha);
        let v: Vec<Interval> = x.vector().into_iter().map(|v| shrink(&mut rng, v)).collect();
        y.set_vector(&v);
        let fx = galerkin_residual(&x).unwrap();
        let fy = galerkin_residual(&y).unwrap();
        for (k, (a, b)) in fy.iter().zip(&fx).enumerate() {
            prop_assert!(a.subset_of(*b), "mode {}", k + 1);
        }
        let c: Vec<Complex64> = y.coeffs.iter().map(|c| Complex64::new(sample_in(&mut rng, c.re), sample_in(&mut rng, c.im))).collect();
        let (alpha, omega) = (sample_in(&mut rng, y.alpha), sample_in(&mut rng, y.omega));
        for (k, (p, e)) in point_residual(alpha, omega, &c).iter().zip(&fy).enumerate() {
            let slack = 1e-12 * (1.0 + p.norm());
            let near = |x: Interval, v: f64| x.lo() - slack <= v && v <= x.hi() + slack;
            prop_assert!(near(e.re, p.re) && near(e.im, p.im), "mode {}", k + 1);
        }
    }

    #[test]
    fn conjugating_coefficients_and_negating_frequency_conjugates_the_residual(seed in any::<u64>(), m in 5usize..11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_cube(&mut rng, m);
        let mut y = x.clone();
        y.omega = -x.omega;
        y.coeffs = x.coeffs.iter().map(|c| c.conj()).collect();
        let fx = galerkin_residual(&x).unwrap();
        let fy = galerkin_residual(&y).unwrap();
        for (k, (a, b)) in fy.iter().zip(&fx).enumerate() {
            prop_assert_eq!(*a, b.conj(), "mode {}", k + 1);
        }
    }

    #[test]
    fn krawczyk_image_contains_newton_images_of_points(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha_star = rng.gen_range(1.75..1.95);
        let (x, _) = root_cube(&mut rng, alpha_star, 10);
        let center = CenterPoint::of_cube(&x);
        let pre = build_preconditioner(&center, x.decay_s).unwrap();
        let t = tail_bounds(&x, &center).unwrap();
        let image = krawczyk_outer(&x, &center, &pre, &t).unwrap();
        for _ in 0..8 {
            let alpha = sample_in(&mut rng, x.alpha);
            let mut p = center.clone();
            p.alpha = alpha;
            let v: Vec<f64> = x.vector().iter().map(|c| sample_in(&mut rng, *c)).collect();
            p.set_vector(&v);
            let f: Vec<f64> = point_residual(alpha, p.omega, &p.coeffs).iter().flat_map(|z| [z.re, z.im]).collect();
            let step = &pre.inverse * DMatrix::from_column_slice(f.len(), 1, &f);
            for (i, enc) in image.finite.iter().enumerate() {
                let want = v[i] - step[i];
                let slack = 1e-12 * (1.0 + want.abs());
                prop_assert!(enc.lo() - slack <= want && want <= enc.hi() + slack, "coordinate {}: {} vs {}", i, want, enc);
            }
        }
    }

    #[test]
    fn shrinking_a_verified_cube_never_excludes_it(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = iv(1.899, 1.89925);
        let root = solve(alpha.mid(), 10).unwrap();
        let verified = |r: &dyn Fn(usize) -> f64, alpha: Interval, c0: f64| {
            let mut x = root.to_cube(alpha, 3.0).unwrap();
            let v: Vec<Interval> = root.vector().iter().enumerate().map(|(i, c)| Interval::centered(*c, r(i))).collect();
            x.set_vector(&v);
            x.tail_c0 = c0;
            x
        };
        let outer = verified(&|_| 1e-4, alpha, 0.1);
        prop_assert_eq!(prune(&outer).unwrap().flag, PruneFlag::Unique);
        let factors: Vec<f64> = (0..20).map(|_| rng.gen_range(0.1..=1.0)).collect();
        let a = sample_in(&mut rng, alpha);
        let sub = iv(a.min(alpha.mid()), a.max(alpha.mid()));
        let inner = verified(&|i| 1e-4 * factors[i], sub, 0.1 * rng.gen_range(0.5..=1.0));
        prop_assert!(inner.subset_of(&outer));
        let center = CenterPoint::of_cube(&inner);
        let pre = build_preconditioner(&center, inner.decay_s).unwrap();
        let t = tail_bounds(&inner, &center).unwrap();
        let image = krawczyk_outer(&inner, &center, &pre, &t).unwrap();
        prop_assert_ne!(image.verdict, Verdict::Excluded);
        prop_assert_ne!(prune(&inner).unwrap().flag, PruneFlag::Empty);
    }

    #[test]
    fn prune_keeps_solutions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha_star = rng.gen_range(1.75..1.95);
        let (x, root) = root_cube(&mut rng, alpha_star, 10);
        prop_assert!(x.contains_point(alpha_star, root.omega, &root.coeffs));
        let out = prune(&x).unwrap();
        prop_assert_ne!(out.flag, PruneFlag::Empty);
        if out.flag == PruneFlag::Reduced {
            prop_assert!(out.cube.unwrap().contains_point(alpha_star, root.omega, &root.coeffs));
        }
        if out.flag == PruneFlag::Unique {
            let bare = PruneSteps { zero_exclusion: false, hopf_neighborhood: false, residual: false };
            prop_assert_eq!(prune_with(&x, bare).unwrap().flag, PruneFlag::Unique);
        }
    }

    #[test]
    fn time_translation_contains_rotated_points(seed in any::<u64>(), m in 2usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<ComplexInterval> = (1..=m)
            .map(|k| {
                let z = Complex64::from_polar(rng.gen_range(0.0..1.0) / k as f64, rng.gen_range(-3.0..3.0));
                let w = rng.gen_range(0.0..1e-2);
                ComplexInterval::new(Interval::centered(z.re, w), Interval::centered(z.im, w))
            })
            .collect();
        let x = ProjectedCube { omega: iv(1.5, 1.6), coeffs, tail_c0: 0.1, decay_s: 3.0 };
        let y = time_translate(&x).unwrap();
        prop_assert_eq!((y.omega, y.tail_c0, y.decay_s), (x.omega, x.tail_c0, x.decay_s));
        for _ in 0..16 {
            let c: Vec<Complex64> =
                x.coeffs.iter().map(|c| Complex64::new(sample_in(&mut rng, c.re), sample_in(&mut rng, c.im))).collect();
            let theta = c[0].arg();
            for (i, (z, enc)) in c.iter().zip(&y.coeffs).enumerate() {
                let r = z * Complex64::from_polar(1.0, -theta * (i + 1) as f64);
                let slack = 1e-12 * (1.0 + r.norm());
                let near = |x: Interval, v: f64| x.lo() - slack <= v && v <= x.hi() + slack;
                prop_assert!(near(enc.re, r.re) && near(enc.im, r.im), "mode {}: {} vs {:?}", i + 1, r, enc);
            }
        }
    }
}
