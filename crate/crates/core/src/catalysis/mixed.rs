use super::{CatalysisError, VerificationReport};
use crate::circuit::{prep_vector, Circuit, StatePrep};
use crate::ring::{RingElement, RingMatrix, Tower};

#[derive(Debug, Clone, PartialEq)]
pub struct MixedTerm {
    /// Real weight (self-conjugate ring element).
    pub weight: RingElement,
    pub prep: StatePrep,
}

impl MixedTerm {
    /// One-qubit circuit preparing the term's state.
    pub fn prep_circuit(&self) -> Circuit {
        let mut c = Circuit::new(1);
        c.set_prep(0, self.prep).expect("qubit 0 exists");
        c
    }
}

/// A signed ensemble `sum_j w_j |psi_j><psi_j|` of single-qubit states.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedDecomposition {
    pub terms: Vec<MixedTerm>,
    pub target: StatePrep,
}

impl MixedDecomposition {
    pub fn tower(&self) -> &Tower {
        self.terms[0].weight.tower()
    }

    /// `sum_j |w_j|`, signs read off the float embedding.
    pub fn one_norm(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight.embed_float().re.abs())
            .sum()
    }

    /// The exact one-norm as a ring element.
    pub fn one_norm_exact(&self) -> RingElement {
        let mut acc = self.tower().zero();
        for t in &self.terms {
            if t.weight.real_sign() < 0 {
                acc -= &t.weight;
            } else {
                acc += &t.weight;
            }
        }
        acc
    }

    pub fn reconstruct(&self) -> Result<RingMatrix, CatalysisError> {
        let tower = self.tower().clone();
        let mut acc = RingMatrix::zeros(&tower, 2, 2);
        for t in &self.terms {
            acc = acc.add(&density(t.prep, &tower)?.scale(&t.weight))?;
        }
        Ok(acc)
    }

    pub fn target_matrix(&self) -> Result<RingMatrix, CatalysisError> {
        density(self.target, self.tower())
    }

    pub fn verify(&self) -> Result<VerificationReport, CatalysisError> {
        let mut r = VerificationReport::new(format!("decomposition of |{}>", self.target.tag()));
        for t in &self.terms {
            r.record(t.weight.is_real(), || {
                format!("weight {} is not real", t.weight)
            });
        }
        let rec = self.reconstruct()?;
        let target = self.target_matrix()?;
        r.record(rec == target, || {
            format!("reconstruction\n{rec}differs from\n{target}")
        });
        r.note(
            "one_norm",
            format!("{} ~ {:.12}", self.one_norm_exact(), self.one_norm()),
        );
        Ok(r)
    }
}

/// `|psi><psi|` for a single-qubit preparation.
pub fn density(p: StatePrep, tower: &Tower) -> Result<RingMatrix, CatalysisError> {
    let mut c = Circuit::new(1);
    c.set_prep(0, p)?;
    let v = RingMatrix::column(prep_vector(&c, tower)?.into_amps());
    Ok(v.mul(&v.adjoint()))
}

fn build(second: StatePrep, target: StatePrep) -> MixedDecomposition {
    let tower = Tower::clifford_t();
    let inv_sqrt2 = tower.inv_sqrt2().expect("clifford+t has sqrt 2");
    // -(sqrt2 - 1)/2
    let neg = (&tower.one() - &tower.sqrt2().expect("clifford+t has sqrt 2")).div_pow2(1);
    let term = |w: &RingElement, p| MixedTerm {
        weight: w.clone(),
        prep: p,
    };
    MixedDecomposition {
        terms: vec![
            term(&inv_sqrt2, StatePrep::Plus),
            term(&inv_sqrt2, second),
            term(&neg, StatePrep::Zero),
            term(&neg, StatePrep::One),
        ],
        target,
    }
}

/// Four Clifford states with weights `1/sqrt 2, 1/sqrt 2, -(sqrt 2 - 1)/2,
/// -(sqrt 2 - 1)/2` reconstructing `|T><T|` for `|T> = T|+>`.
///
/// The second state is `|+i>`: with `|-i>` in that slot the same weights
/// reconstruct the conjugate state `T^dagger|+>` (see
/// [`decompose_t_dm_literal`]).
pub fn decompose_t_dm() -> MixedDecomposition {
    build(StatePrep::PlusI, StatePrep::T)
}

/// The same weights with `|-i>` as second state; this reconstructs
/// `|T^dagger><T^dagger|`.
pub fn decompose_t_dm_literal() -> MixedDecomposition {
    build(StatePrep::MinusI, StatePrep::Zk { k: 3, sign: -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_t_state() {
        let d = decompose_t_dm();
        let r = d.verify().unwrap();
        assert!(r.passed, "{r}");
        assert!((d.one_norm() - (2.0 * 2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(d.reconstruct().unwrap().trace().is_one());
        let t = d.tower();
        let expect = &t.sqrt2().unwrap().mul_pow2(1) - &t.one();
        assert_eq!(d.one_norm_exact(), expect);
    }

    #[test]
    fn literal_form_is_the_conjugate_state() {
        let lit = decompose_t_dm_literal();
        assert!(lit.verify().unwrap().passed);
        let plain = decompose_t_dm();
        assert_ne!(lit.reconstruct().unwrap(), plain.target_matrix().unwrap());
    }
}
