//! Parameter grids of the named suites.

use crate::verify::report::{IdentityId, Params};

/// One grid dimension. Several keys move together, which is how `(a, b)`
/// pairs are listed.
struct Axis {
    keys: Vec<&'static str>,
    values: Vec<Vec<String>>,
}

fn axis<T: ToString>(key: &'static str, values: impl IntoIterator<Item = T>) -> Axis {
    Axis { keys: vec![key], values: values.into_iter().map(|v| vec![v.to_string()]).collect() }
}

fn pairs(values: &[(u32, u32)]) -> Axis {
    Axis { keys: vec!["a", "b"], values: values.iter().map(|(a, b)| vec![a.to_string(), b.to_string()]).collect() }
}

/// Cartesian product; the last axis varies fastest.
fn product(axes: &[Axis]) -> Vec<Params> {
    let mut out = vec![Params::new()];
    for ax in axes {
        let mut next = Vec::with_capacity(out.len() * ax.values.len());
        for base in &out {
            for vals in &ax.values {
                let mut p = base.clone();
                for (k, v) in ax.keys.iter().zip(vals) {
                    p.insert((*k).to_string(), v.clone());
                }
                next.push(p);
            }
        }
        out = next;
    }
    out
}

const SYM_PAIRS: [(u32, u32); 5] = [(1, 1), (1, 3), (3, 5), (3, 7), (5, 7)];
const ZETA_PAIRS: [(u32, u32); 2] = [(1, 3), (3, 5)];
const ZETA_S: [&str; 3] = ["3/2", "5/2", "4"];

/// The full grid of `id`: the acceptance-scale sweep.
pub fn default_grid(id: IdentityId) -> Vec<Params> {
    let ah = || [axis("alpha", [1, 2]), axis("h", [1, 2])];
    match id {
        IdentityId::Recurrence => {
            let [al, h] = ah();
            product(&[axis("m", 0..=12), al, h])
        }
        IdentityId::DistributionG => {
            let [al, h] = ah();
            product(&[axis("a", [1, 3, 5]), axis("n", 1..=8), axis("x", 0..=2), al, h])
        }
        IdentityId::AdditionEq10 => {
            let [al, h] = ah();
            let mut g = product(&[axis("n", 0..=8), axis("x", 0..=3), axis("y", 0..=3), al, h]);
            g.extend(product(&[
                axis("n", 0..=8),
                axis("x", 0..=1),
                axis("y", ["1/2", "3/2"]),
                axis("alpha", [1, 2]),
                axis("h", [1]),
                axis("q", ["1/2"]),
            ]));
            g
        }
        IdentityId::SymZetaThm21 => product(&[
            pairs(&ZETA_PAIRS),
            axis("s", ZETA_S),
            axis("x", 1..=2),
            axis("alpha", [1, 2]),
            axis("h", [1]),
            axis("q", ["1/2"]),
        ]),
        IdentityId::DistZetaEq9 => product(&[
            axis("a", [1, 3, 5]),
            axis("s", ZETA_S),
            axis("x", 1..=2),
            axis("alpha", [1, 2]),
            axis("h", [1]),
            axis("q", ["1/2"]),
        ]),
        IdentityId::Cor22 => product(&[
            axis("s", ZETA_S),
            axis("x", 1..=2),
            axis("alpha", [1, 2]),
            axis("h", [1]),
            axis("q", ["1/2"]),
        ]),
        IdentityId::SymGenThm23 => {
            let [al, h] = ah();
            product(&[pairs(&SYM_PAIRS), axis("m", 1..=8), axis("x", 0..=2), al, h])
        }
        IdentityId::SymSThm25 => {
            let [al, h] = ah();
            product(&[pairs(&ZETA_PAIRS), axis("m", 0..=6), axis("x", 0..=1), al, h, axis("twist", ["derived", "literal"])])
        }
        IdentityId::ClassicalCor26 => product(&[
            axis("a", [1, 3, 5, 7]),
            axis("b", [1, 3, 5, 7]),
            axis("m", 0..=10),
            axis("x", ["0", "1/2", "1"]),
        ]),
        IdentityId::Interpolation => {
            let mut g = product(&[axis("n", 0..=6), axis("x", 1..=2), axis("alpha", [1, 2]), axis("h", [1, 2]), axis("q", ["1/2"])]);
            g.extend(product(&[axis("n", [1]), axis("x", [0]), axis("alpha", [1]), axis("h", [1]), axis("q", ["1/2"])]));
            g
        }
        IdentityId::Funceq => product(&[
            axis("s", ZETA_S),
            axis("x", 1..=2),
            axis("alpha", [1, 2]),
            axis("h", [1, 2]),
            axis("q", ["1/2"]),
        ]),
    }
}

/// A few cases per identity, for smoke runs.
pub fn quick_grid(id: IdentityId) -> Vec<Params> {
    let one = || [axis("alpha", [1, 2]), axis("h", [1])];
    match id {
        IdentityId::Recurrence => {
            let [al, h] = one();
            product(&[axis("m", 0..=4), al, h])
        }
        IdentityId::DistributionG => {
            let [al, h] = one();
            product(&[axis("a", [3]), axis("n", 1..=4), axis("x", [1]), al, h])
        }
        IdentityId::AdditionEq10 => {
            let [al, h] = one();
            let mut g = product(&[axis("n", 0..=4), axis("x", [1]), axis("y", [2]), al, h]);
            g.extend(product(&[axis("n", [3]), axis("x", [1]), axis("y", ["1/2"]), axis("alpha", [1]), axis("h", [1]), axis("q", ["1/2"])]));
            g
        }
        IdentityId::SymZetaThm21 => product(&[pairs(&[(1, 3)]), axis("s", ["5/2"]), axis("x", [1]), axis("alpha", [1]), axis("h", [1]), axis("q", ["1/2"])]),
        IdentityId::DistZetaEq9 => product(&[axis("a", [3]), axis("s", ["5/2"]), axis("x", [1]), axis("alpha", [1]), axis("h", [1]), axis("q", ["1/2"])]),
        IdentityId::Cor22 => product(&[axis("s", ["5/2"]), axis("x", [1]), axis("alpha", [1]), axis("h", [1]), axis("q", ["1/2"])]),
        IdentityId::SymGenThm23 => {
            let [al, h] = one();
            product(&[pairs(&[(3, 5)]), axis("m", 1..=4), axis("x", [1]), al, h])
        }
        IdentityId::SymSThm25 => {
            let [al, h] = one();
            product(&[pairs(&[(1, 3)]), axis("m", 0..=3), axis("x", [0]), al, h, axis("twist", ["derived", "literal"])])
        }
        IdentityId::ClassicalCor26 => product(&[pairs(&[(3, 5)]), axis("m", 0..=6), axis("x", ["1/2"])]),
        IdentityId::Interpolation => product(&[axis("n", 0..=3), axis("x", [1]), axis("alpha", [1]), axis("h", [1]), axis("q", ["1/2"])]),
        IdentityId::Funceq => product(&[axis("s", ["5/2"]), axis("x", [1]), axis("alpha", [1]), axis("h", [1]), axis("q", ["1/2"])]),
    }
}
