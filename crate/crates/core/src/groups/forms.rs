//! Indefinite binary quadratic forms and PSL(2, ℤ) hyperbolic class counts.
//!
//! A matrix (a b; c d) of trace t fixes the form c·x² + (d − a)·xy − b·y² of
//! discriminant t² − 4, and conjugacy of matrices matches proper equivalence
//! of forms. Classes are counted as cycles of Gauss-reduced forms.

use std::collections::HashSet;

use num_integer::Roots;

type Form = (i64, i64, i64);

/// All Gauss-reduced forms (a, b, c) of discriminant `disc` (positive, non-square):
/// 0 < b < √D and √D − b < 2|a| < √D + b. Imprimitive forms included.
pub fn reduced_forms(disc: i64) -> Vec<Form> {
    let s = disc.sqrt();
    assert!(s * s != disc, "discriminant must not be a square");
    let mut out = Vec::new();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (disc - b * b) / 4;
        // 2|a| + b > √D  ⇔  2|a| + b ≥ s + 1;  2|a| − b < √D  ⇔  2|a| − b ≤ s
        let lo = (s + 1 - b + 1) / 2;
        let hi = (s + b) / 2;
        for abs_a in lo.max(1)..=hi {
            if n % abs_a == 0 {
                let c = n / abs_a;
                out.push((abs_a, b, -c));
                out.push((-abs_a, b, c));
            }
        }
        b += 2;
    }
    out
}

fn rho(f: Form, s: i64, disc: i64) -> Form {
    let (_, b, c) = f;
    let m = 2 * c.abs();
    let b2 = s - (s + b).rem_euclid(m);
    (c, b2, (b2 * b2 - disc) / (4 * c))
}

/// Number of PSL(2, ℤ)-conjugacy classes of elements with trace ±t.
pub fn modular_class_count(t: i64) -> u64 {
    assert!(t.abs() >= 3, "hyperbolic traces satisfy |t| ≥ 3");
    let disc = t * t - 4;
    let s = disc.sqrt();
    let forms = reduced_forms(disc);
    let set: HashSet<Form> = forms.iter().copied().collect();
    let mut seen: HashSet<Form> = HashSet::with_capacity(forms.len());
    let mut cycles = 0;
    for f in forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            seen.insert(g);
            g = rho(g, s, disc);
            debug_assert!(set.contains(&g), "ρ left the reduced set");
            if g == f {
                break;
            }
        }
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Conjugacy classes of SL(2, ℤ) matrices with trace t and entries in
    /// [−bound, bound], partitioned by union-find under conjugation by
    /// S, T and T⁻¹ while staying inside the box.
    fn brute_force_class_count(t: i64, bound: i64) -> usize {
        let mut mats = Vec::new();
        for a in -bound..=bound {
            let d = t - a;
            if d.abs() > bound {
                continue;
            }
            let bc = a * d - 1;
            for b in -bound..=bound {
                if b == 0 {
                    if bc == 0 {
                        for c in -bound..=bound {
                            mats.push((a, 0, c, d));
                        }
                    }
                    continue;
                }
                if bc % b == 0 && (bc / b).abs() <= bound {
                    mats.push((a, b, bc / b, d));
                }
            }
        }
        let index: std::collections::HashMap<_, _> = mats.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut parent: Vec<usize> = (0..mats.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let conj = |m: (i64, i64, i64, i64), g: (i64, i64, i64, i64), gi: (i64, i64, i64, i64)| {
            let mul = |x: (i64, i64, i64, i64), y: (i64, i64, i64, i64)| {
                (x.0 * y.0 + x.1 * y.2, x.0 * y.1 + x.1 * y.3, x.2 * y.0 + x.3 * y.2, x.2 * y.1 + x.3 * y.3)
            };
            mul(mul(g, m), gi)
        };
        let gens = [
            ((0, -1, 1, 0), (0, 1, -1, 0)),
            ((1, 1, 0, 1), (1, -1, 0, 1)),
            ((1, -1, 0, 1), (1, 1, 0, 1)),
        ];
        for (i, m) in mats.iter().enumerate() {
            for (g, gi) in gens {
                if let Some(&j) = index.get(&conj(*m, g, gi)) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        (0..mats.len()).filter(|&i| find(&mut parent, i) == i).count()
    }

    #[test]
    fn class_counts_match_brute_force() {
        for t in 3..=12 {
            assert_eq!(modular_class_count(t) as usize, brute_force_class_count(t, 50), "t={t}");
        }
        assert_eq!(modular_class_count(3), 1);
        assert_eq!(modular_class_count(4), 2);
    }

    #[test]
    fn negative_trace_same_count() {
        for t in 3..30 {
            assert_eq!(modular_class_count(t), modular_class_count(-t));
        }
    }

    #[test]
    fn explicit_witness_for_every_trace() {
        for t in 3..200i64 {
            let (a, b, c, d) = (t - 1, 1, t - 2, 1);
            assert_eq!((a * d - b * c, a + d), (1, t));
            assert!(modular_class_count(t) >= 1);
        }
    }

    #[test]
    fn reduced_forms_satisfy_conditions() {
        for t in 3..40i64 {
            let d = t * t - 4;
            let r = (d as f64).sqrt();
            for (a, b, c) in reduced_forms(d) {
                assert_eq!(b * b - 4 * a * c, d);
                let (a, b) = (a as f64, b as f64);
                assert!(b > 0.0 && b < r && r - b < 2.0 * a.abs() && 2.0 * a.abs() < r + b);
            }
        }
    }
}
