use serde::{Deserialize, Serialize};

use super::{AlgebraError, Gens, RationalFunction};

/// Element of a semifield: tropical (exponent vector, `⊕` = componentwise
/// min) or universal (subtraction-free rational function).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemifieldElem {
    Tropical(Vec<i64>),
    Universal(RationalFunction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemifieldKind {
    Tropical,
    Universal,
}

impl SemifieldElem {
    pub fn kind(&self) -> SemifieldKind {
        match self {
            SemifieldElem::Tropical(_) => SemifieldKind::Tropical,
            SemifieldElem::Universal(_) => SemifieldKind::Universal,
        }
    }

    pub fn generator(kind: SemifieldKind, gens: &Gens, i: usize) -> Self {
        match kind {
            SemifieldKind::Tropical => {
                let mut e = vec![0; gens.len()];
                e[i] = 1;
                SemifieldElem::Tropical(e)
            }
            SemifieldKind::Universal => SemifieldElem::Universal(RationalFunction::var(gens, i)),
        }
    }

    pub fn one_like(&self) -> Self {
        match self {
            SemifieldElem::Tropical(e) => SemifieldElem::Tropical(vec![0; e.len()]),
            SemifieldElem::Universal(r) => SemifieldElem::Universal(RationalFunction::one(r.gens())),
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        match (self, other) {
            (SemifieldElem::Tropical(a), SemifieldElem::Tropical(b)) if a.len() == b.len() => Ok(()),
            (SemifieldElem::Universal(a), SemifieldElem::Universal(b)) if a.gens() == b.gens() => Ok(()),
            _ => Err(AlgebraError::SemifieldMismatch),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        Ok(match (self, other) {
            (SemifieldElem::Tropical(a), SemifieldElem::Tropical(b)) => {
                SemifieldElem::Tropical(a.iter().zip(b).map(|(x, y)| *x.min(y)).collect())
            }
            (SemifieldElem::Universal(a), SemifieldElem::Universal(b)) => SemifieldElem::Universal(a + b),
            _ => unreachable!(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        Ok(match (self, other) {
            (SemifieldElem::Tropical(a), SemifieldElem::Tropical(b)) => {
                SemifieldElem::Tropical(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (SemifieldElem::Universal(a), SemifieldElem::Universal(b)) => SemifieldElem::Universal(a * b),
            _ => unreachable!(),
        })
    }

    pub fn pow(&self, k: i64) -> Self {
        match self {
            SemifieldElem::Tropical(a) => SemifieldElem::Tropical(a.iter().map(|x| x * k).collect()),
            SemifieldElem::Universal(r) => SemifieldElem::Universal(r.pow(k)),
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn to_canonical(&self, gens: &Gens) -> String {
        match self {
            SemifieldElem::Tropical(e) => {
                let parts: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| if x == 1 { gens[i].clone() } else { format!("{}^{}", gens[i], x) })
                    .collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            }
            SemifieldElem::Universal(r) => r.to_canonical(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::gens;

    #[test]
    fn tropical_addition_is_min() {
        let u1 = SemifieldElem::Tropical(vec![1, 0]);
        let one = u1.one_like();
        assert_eq!(u1.add(&one).unwrap(), one);
        let w = SemifieldElem::Tropical(vec![1, -1]);
        assert_eq!(w.add(&w).unwrap(), w);
    }

    #[test]
    fn universal_addition_is_sum() {
        let g = gens(&["u1", "u2"]);
        let a = SemifieldElem::generator(SemifieldKind::Universal, &g, 0);
        let b = SemifieldElem::generator(SemifieldKind::Universal, &g, 1);
        assert_eq!(a.add(&b).unwrap().to_canonical(&g), "u1 + u2");
    }

    #[test]
    fn mismatch_errors() {
        let g = gens(&["u1"]);
        let a = SemifieldElem::Tropical(vec![1]);
        let b = SemifieldElem::generator(SemifieldKind::Universal, &g, 0);
        assert_eq!(a.add(&b), Err(AlgebraError::SemifieldMismatch));
    }
}
