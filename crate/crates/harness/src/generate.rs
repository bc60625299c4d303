//! Seeded random instances.

use std::str::FromStr;

use asymlin::rational::{int, ratio, Matrix, Rational, Vector};
use asymlin::AsymNorm;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::{Arg, Directive, Expectation, InstanceFile, OperatorDef, OperatorKind, PolyhedronDef, SpaceDef};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    SymmetricBounded,
    AsymmetricUnbounded,
    Mixed,
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "symmetric-bounded" => Ok(Profile::SymmetricBounded),
            "asymmetric-unbounded" => Ok(Profile::AsymmetricUnbounded),
            "mixed" => Ok(Profile::Mixed),
            _ => Err(format!("unknown profile `{s}` (symmetric-bounded, asymmetric-unbounded, mixed)")),
        }
    }
}

/// The shape of a generated unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// `±a_i`: a norm.
    Symmetric,
    /// Positively spanning generators: bounded ball, `p ≠ p̄`.
    Bounded,
    /// The zero vector plus generators in a halfspace: the ball has a recession ray.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenOptions {
    pub min_dim: usize,
    pub max_dim: usize,
    pub max_generators: usize,
    /// Integer coordinates of generators lie in `-coeff..=coeff`.
    pub coeff: i64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { min_dim: 1, max_dim: 2, max_generators: 8, coeff: 3 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng, bound: i64, den: i64) -> Rational {
    ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=den))
}

pub fn random_vector(rng: &mut impl Rng, dim: usize, bound: i64, den: i64) -> Vector {
    (0..dim).map(|_| small_rational(rng, bound, den)).collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64, den: i64) -> Matrix {
    (0..rows).map(|_| random_vector(rng, cols, bound, den)).collect()
}

fn int_vector(rng: &mut impl Rng, dim: usize, coeff: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-coeff..=coeff)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

fn to_rational(v: &[i64]) -> Vector {
    v.iter().map(|&x| int(x)).collect()
}

/// A valid asymmetric norm of the given kind with at most `max_generators` generators.
pub fn random_norm(rng: &mut impl Rng, dim: usize, kind: NormKind, max_generators: usize, coeff: i64) -> AsymNorm {
    let max_generators = max_generators.max(dim + 1).max(2 * dim);
    loop {
        let gens: Vec<Vec<i64>> = match kind {
            NormKind::Symmetric => {
                let k = rng.gen_range(dim..=max_generators / 2);
                (0..k).flat_map(|_| {
                    let a = int_vector(rng, dim, coeff);
                    let b = a.iter().map(|x| -x).collect();
                    [a, b]
                })
                .collect()
            }
            NormKind::Bounded => {
                let k = rng.gen_range(dim..max_generators);
                let mut gens: Vec<Vec<i64>> = (0..k).map(|_| int_vector(rng, dim, coeff)).collect();
                let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=2)).collect();
                let last = (0..dim).map(|j| -(0..k).map(|i| weights[i] * gens[i][j]).sum::<i64>()).collect();
                gens.push(last);
                gens
            }
            NormKind::Unbounded => {
                let r = int_vector(rng, dim, 2);
                let k = rng.gen_range(dim..max_generators);
                let mut gens: Vec<Vec<i64>> = (0..k)
                    .map(|_| {
                        let a = int_vector(rng, dim, coeff);
                        let s: i64 = a.iter().zip(&r).map(|(x, y)| x * y).sum();
                        if s > 0 {
                            a.iter().map(|x| -x).collect()
                        } else {
                            a
                        }
                    })
                    .collect();
                gens.push(vec![0; dim]);
                gens
            }
        };
        if let Ok(p) = AsymNorm::new(dim, gens.iter().map(|g| to_rational(g)).collect()) {
            return p;
        }
    }
}

fn space_def(name: &str, p: &AsymNorm) -> SpaceDef {
    SpaceDef { name: name.into(), dim: p.dim(), generators: p.generators().to_vec() }
}

fn kind_for(rng: &mut impl Rng, profile: Profile, source: bool) -> NormKind {
    match profile {
        Profile::SymmetricBounded => NormKind::Symmetric,
        Profile::AsymmetricUnbounded if source => NormKind::Unbounded,
        Profile::AsymmetricUnbounded => *[NormKind::Bounded, NormKind::Unbounded].choose(rng).expect("nonempty"),
        Profile::Mixed => *[NormKind::Symmetric, NormKind::Bounded, NormKind::Unbounded].choose(rng).expect("nonempty"),
    }
}

fn report(op: &str, names: &[&str]) -> Directive {
    Directive { op: op.into(), args: names.iter().map(|n| Arg::Name(n.to_string())).collect(), expect: Expectation::Report }
}

/// One instance: spaces `p1`, `p2`, `q`; `A: p1 → q`, `T, E: p1 × p2 → q`, form `b` on `p1 × p2`.
pub fn generate_instance(rng: &mut impl Rng, profile: Profile, opts: &GenOptions) -> InstanceFile {
    let dims: Vec<usize> = (0..3).map(|_| rng.gen_range(opts.min_dim..=opts.max_dim)).collect();
    let (d1, d2, dz) = (dims[0], dims[1], dims[2]);
    let k1 = kind_for(rng, profile, true);
    let k2 = kind_for(rng, profile, true);
    let kq = kind_for(rng, profile, false);
    let p1 = random_norm(rng, d1, k1, opts.max_generators, opts.coeff);
    let p2 = random_norm(rng, d2, k2, opts.max_generators, opts.coeff);
    let q = random_norm(rng, dz, kq, opts.max_generators, opts.coeff);
    let bil = |rng: &mut _| -> Vec<Matrix> { (0..dz).map(|_| random_matrix(rng, d1, d2, 3, 2)).collect() };
    let t = bil(rng);
    let e = bil(rng);
    let operators = vec![
        OperatorDef {
            name: "A".into(),
            kind: OperatorKind::Linear { source: "p1".into(), target: "q".into(), matrix: random_matrix(rng, dz, d1, 3, 2) },
        },
        OperatorDef {
            name: "T".into(),
            kind: OperatorKind::Bilinear { source1: "p1".into(), source2: "p2".into(), target: "q".into(), tensor: t },
        },
        OperatorDef {
            name: "E".into(),
            kind: OperatorKind::Bilinear { source1: "p1".into(), source2: "p2".into(), target: "q".into(), tensor: e },
        },
        OperatorDef {
            name: "b".into(),
            kind: OperatorKind::Form { source1: "p1".into(), source2: "p2".into(), matrix: random_matrix(rng, d1, d2, 3, 2) },
        },
    ];
    InstanceFile {
        spaces: vec![space_def("p1", &p1), space_def("p2", &p2), space_def("q", &q)],
        operators,
        polyhedra: Vec::new(),
        directives: vec![
            report("norm", &["A"]),
            report("norm", &["T"]),
            report("sym-norm", &["T"]),
            report("adjoint", &["T"]),
            report("distance", &["T", "E"]),
        ],
    }
}

/// `count` instances, deterministic in `seed`.
pub fn generate_instances(seed: u64, profile: Profile, count: usize, opts: &GenOptions) -> Vec<InstanceFile> {
    let mut rng = rng(seed);
    (0..count).map(|_| generate_instance(&mut rng, profile, opts)).collect()
}

/// A random H-polyhedron containing 0 in `dim` dimensions, bounded or not.
pub fn random_polyhedron(rng: &mut impl Rng, name: &str, dim: usize, bounded: bool) -> PolyhedronDef {
    let p = random_norm(rng, dim, if bounded { NormKind::Bounded } else { NormKind::Unbounded }, 6, 3);
    let rows = p
        .generators()
        .iter()
        .filter(|g| g.iter().any(|x| x != &int(0)))
        .map(|g| {
            let mut row = g.clone();
            row.push(ratio(rng.gen_range(1..=4), rng.gen_range(1..=2)));
            row
        })
        .collect();
    PolyhedronDef { name: name.into(), dim, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{resolve, serialize};
    use asymlin::polyhedral::Caps;

    #[test]
    fn deterministic() {
        let opts = GenOptions::default();
        let a: Vec<String> = generate_instances(0, Profile::SymmetricBounded, 5, &opts).iter().map(serialize).collect();
        let b: Vec<String> = generate_instances(0, Profile::SymmetricBounded, 5, &opts).iter().map(serialize).collect();
        assert_eq!(a, b);
        let c: Vec<String> = generate_instances(1, Profile::SymmetricBounded, 5, &opts).iter().map(serialize).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn unbounded_profile_has_recession_rays() {
        let caps = Caps::default();
        for f in generate_instances(3, Profile::AsymmetricUnbounded, 12, &GenOptions::default()) {
            let r = resolve(&f, &caps).unwrap();
            for name in ["p1", "p2"] {
                let ball = r.spaces[name].unit_ball().enumerate(&caps).unwrap();
                assert!(!ball.v_rep().unwrap().rays.is_empty());
            }
        }
    }

    #[test]
    fn kinds_have_their_shape() {
        let caps = Caps::default();
        let mut g = rng(9);
        for dim in 1..=3 {
            let s = random_norm(&mut g, dim, NormKind::Symmetric, 8, 3);
            assert!(s.is_symmetric());
            let b = random_norm(&mut g, dim, NormKind::Bounded, 8, 3);
            assert!(b.unit_ball().enumerate(&caps).unwrap().v_rep().unwrap().rays.is_empty());
            assert!(b.generators().len() <= 8);
        }
    }
}
