use std::fmt;
use std::str::FromStr;

use super::CircuitError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// A Pauli string, one letter per qubit, qubit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Observable {
    paulis: Vec<Pauli>,
}

impl Observable {
    pub fn new(paulis: Vec<Pauli>) -> Self {
        Observable { paulis }
    }

    pub fn identity(n: usize) -> Self {
        Observable {
            paulis: vec![Pauli::I; n],
        }
    }

    pub fn paulis(&self) -> &[Pauli] {
        &self.paulis
    }

    pub fn len(&self) -> usize {
        self.paulis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paulis.is_empty()
    }

    /// `O (x) I^extra`.
    pub fn extended(&self, extra: usize) -> Observable {
        let mut p = self.paulis.clone();
        p.extend(std::iter::repeat_n(Pauli::I, extra));
        Observable { paulis: p }
    }
}

impl FromStr for Observable {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let paulis = s
            .trim()
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(CircuitError::Syntax {
                    line: 1,
                    msg: format!("`{other}` is not a Pauli letter"),
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if paulis.is_empty() {
            return Err(CircuitError::Syntax {
                line: 1,
                msg: "empty observable".into(),
            });
        }
        Ok(Observable { paulis })
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.paulis {
            let c = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
