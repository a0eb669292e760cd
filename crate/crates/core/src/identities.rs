//! Witness searches for algebraic identities.
//!
//! Gonosomal algebras are commutative, hence flexible, but stochastic ones
//! fail associativity, power associativity and the Jacobi identity. The
//! search below tries basis tuples first (including the mixed elements
//! `e_i + ẽ_p`), then seeded random elements. A `HoldsOnSamples` verdict is
//! only ever a sampled statement.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Element};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    /// `(ab)c = a(bc)`
    Associativity,
    /// `x(yx) = (xy)x`
    Flexibility,
    /// `x²y = x(xy)`
    LeftAlternativity,
    /// `yx² = (yx)x`
    RightAlternativity,
    /// `x²(xy) = x(x²y)`
    Jordan,
    /// `x²x² = x⁴`
    PowerAssociativity,
    /// `(xy)z + (yz)x + (zx)y = 0`
    Jacobi,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 7] = [
        IdentityKind::Associativity,
        IdentityKind::Flexibility,
        IdentityKind::LeftAlternativity,
        IdentityKind::RightAlternativity,
        IdentityKind::Jordan,
        IdentityKind::PowerAssociativity,
        IdentityKind::Jacobi,
    ];

    pub fn arity(self) -> usize {
        match self {
            IdentityKind::PowerAssociativity => 1,
            IdentityKind::Associativity | IdentityKind::Jacobi => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsOnSamples,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct IdentityCheck<T> {
    pub verdict: Verdict,
    /// Witness tuple when violated.
    pub witness: Option<Vec<Element<T>>>,
    /// L1 norm of the witness defect, or the largest defect seen when the
    /// identity held on every sample.
    pub defect: T,
    /// Number of tuples evaluated.
    pub tested: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct IdentityReport<T> {
    pub checks: BTreeMap<IdentityKind, IdentityCheck<T>>,
}

impl<T: Scalar> IdentityReport<T> {
    pub fn get(&self, kind: IdentityKind) -> &IdentityCheck<T> {
        &self.checks[&kind]
    }

    pub fn violated(&self, kind: IdentityKind) -> bool {
        self.get(kind).verdict == Verdict::Violated
    }
}

/// `(ab)c − a(bc)`.
pub fn associator<T: Scalar>(
    spec: &AlgebraSpec<T>,
    a: &Element<T>,
    b: &Element<T>,
    c: &Element<T>,
) -> Element<T> {
    let ab_c = spec.mul_unchecked(&spec.mul_unchecked(a, b), c);
    let a_bc = spec.mul_unchecked(a, &spec.mul_unchecked(b, c));
    ab_c.sub(&a_bc)
}

/// Principal power `x^k` with `x^1 = x` and `x^{k+1} = x·x^k`.
///
/// # Panics
/// If `k == 0`.
pub fn principal_power<T: Scalar>(spec: &AlgebraSpec<T>, a: &Element<T>, k: usize) -> Element<T> {
    assert!(k >= 1, "principal powers start at 1");
    let mut p = a.clone();
    for _ in 1..k {
        p = spec.mul_unchecked(a, &p);
    }
    p
}

/// Defect vector of `kind` at the given arguments.
pub fn defect<T: Scalar>(spec: &AlgebraSpec<T>, kind: IdentityKind, args: &[Element<T>]) -> Element<T> {
    let m = |a: &Element<T>, b: &Element<T>| spec.mul_unchecked(a, b);
    match kind {
        IdentityKind::Associativity => associator(spec, &args[0], &args[1], &args[2]),
        IdentityKind::Flexibility => {
            let (x, y) = (&args[0], &args[1]);
            m(x, &m(y, x)).sub(&m(&m(x, y), x))
        }
        IdentityKind::LeftAlternativity => {
            let (x, y) = (&args[0], &args[1]);
            m(&m(x, x), y).sub(&m(x, &m(x, y)))
        }
        IdentityKind::RightAlternativity => {
            let (x, y) = (&args[0], &args[1]);
            m(y, &m(x, x)).sub(&m(&m(y, x), x))
        }
        IdentityKind::Jordan => {
            let (x, y) = (&args[0], &args[1]);
            let x2 = m(x, x);
            m(&x2, &m(x, y)).sub(&m(x, &m(&x2, y)))
        }
        IdentityKind::PowerAssociativity => {
            let x = &args[0];
            let x2 = m(x, x);
            m(&x2, &x2).sub(&principal_power(spec, x, 4))
        }
        IdentityKind::Jacobi => {
            let (x, y, z) = (&args[0], &args[1], &args[2]);
            m(&m(x, y), z).add(&m(&m(y, z), x)).add(&m(&m(z, x), y))
        }
    }
}

/// Basis elements `e_i`, `ẽ_p` and the mixed sums `e_i + ẽ_p`.
pub fn basis_candidates<T: Scalar>(n: usize, nu: usize) -> Vec<Element<T>> {
    let mut out: Vec<Element<T>> = (0..n).map(|i| Element::female(n, nu, i)).collect();
    out.extend((0..nu).map(|p| Element::male(n, nu, p)));
    for i in 0..n {
        for p in 0..nu {
            out.push(Element::female(n, nu, i).add(&Element::male(n, nu, p)));
        }
    }
    out
}

fn tuples(len: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..len).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn check_one<T: Scalar>(
    spec: &AlgebraSpec<T>,
    kind: IdentityKind,
    basis: &[Element<T>],
    random: &[Vec<Element<T>>],
) -> IdentityCheck<T> {
    let basis_tuples = tuples(basis.len(), kind.arity())
        .into_iter()
        .map(|t| t.into_iter().map(|i| basis[i].clone()).collect::<Vec<_>>());
    let mut worst = T::zero();
    let mut tested = 0;
    for args in basis_tuples.chain(random.iter().cloned()) {
        tested += 1;
        let d = defect(spec, kind, &args).l1_norm();
        if d > T::DEFECT_TOL || !d.is_finite() {
            return IdentityCheck {
                verdict: Verdict::Violated,
                witness: Some(args),
                defect: d,
                tested,
            };
        }
        worst = worst.max(d);
    }
    IdentityCheck {
        verdict: Verdict::HoldsOnSamples,
        witness: None,
        defect: worst,
        tested,
    }
}

/// Runs every identity on all basis tuples and `samples` seeded random tuples.
///
/// Random coordinates are uniform on `[-1, 1]`. The first tuple whose defect
/// exceeds the violation threshold becomes the witness.
pub fn check_identities<T: Scalar>(spec: &AlgebraSpec<T>, samples: usize, seed: u64) -> IdentityReport<T> {
    let (n, nu) = (spec.n(), spec.nu());
    let basis = basis_candidates(n, nu);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        Element::new(
            (0..n).map(|_| T::lit(rng.gen_range(-1.0..=1.0))).collect(),
            (0..nu).map(|_| T::lit(rng.gen_range(-1.0..=1.0))).collect(),
        )
    };
    let random: Vec<[Element<T>; 3]> = (0..samples).map(|_| [draw(), draw(), draw()]).collect();
    let checks = IdentityKind::ALL
        .iter()
        .map(|&kind| {
            let rs: Vec<Vec<Element<T>>> = random.iter().map(|t| t[..kind.arity()].to_vec()).collect();
            (kind, check_one(spec, kind, &basis, &rs))
        })
        .collect();
    IdentityReport { checks }
}
