//! Towers of quadratic extensions `Z[1/2][a_1, ..., a_k]` with `a_j^2` in the
//! ring generated by `a_1, ..., a_{j-1}`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::dyadic::Dyadic;
use super::text::{assemble_terms, parse_terms};
use super::{RingElement, RingError};

/// One generator of a tower.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub name: String,
    /// `a_j^2`, as coefficients over the full basis; only indices below
    /// `2^j` may be nonzero.
    pub square: Vec<Dyadic>,
    /// The complex conjugate of `a_j`, as coefficients over the full basis.
    pub conjugate: Vec<Dyadic>,
    pub float_embedding: Complex64,
}

/// The data behind a [`Tower`] handle.
#[derive(Debug)]
pub struct TowerSpec {
    generators: Vec<GeneratorSpec>,
    squares: Vec<Vec<Dyadic>>,
    conj_basis: Vec<Vec<Dyadic>>,
    monomial_floats: Vec<Complex64>,
    /// `roots[k]` is a primitive `2^k`-th root of unity, when present.
    roots: Vec<Vec<Dyadic>>,
    sqrt2: Option<Vec<Dyadic>>,
}

impl PartialEq for TowerSpec {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl TowerSpec {
    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }
}

/// Shared handle to an immutable tower. Cheap to clone.
#[derive(Clone)]
pub struct Tower {
    spec: Arc<TowerSpec>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec
    }
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self
            .spec
            .generators
            .iter()
            .map(|g| g.name.as_str())
            .collect();
        write!(f, "Tower{names:?}")
    }
}

impl Tower {
    /// The bare dyadic rationals, no generators.
    pub fn dyadic() -> Tower {
        TowerBuilder::new().build().expect("empty tower is valid")
    }

    /// `Z[1/2, i, e^{i pi/4}]`, the Clifford+T ring.
    pub fn clifford_t() -> Tower {
        Tower::cyclotomic(3).expect("clifford+t tower is valid")
    }

    /// `Z[1/2, zeta_4, zeta_8, ..., zeta_{2^n}]` with generators named
    /// `i`, `w`, `w16`, `w32`, ... Requires `n >= 2`.
    pub fn cyclotomic(n: u32) -> Result<Tower, RingError> {
        if n < 2 {
            return Err(RingError::InvalidTower(
                "cyclotomic towers need n >= 2".into(),
            ));
        }
        let name = |j: u32| match j {
            2 => "i".to_string(),
            3 => "w".to_string(),
            _ => format!("w{}", 1u64 << j),
        };
        let mut b = TowerBuilder::new();
        let mut names: Vec<String> = Vec::new();
        for j in 2..=n {
            let square = match j {
                2 => "-1".to_string(),
                _ => names.last().cloned().unwrap(),
            };
            names.push(name(j));
            let conjugate = format!("-{}", names.join("*"));
            let angle = 2.0 * PI / (1u64 << j) as f64;
            b = b.generator(
                &name(j),
                &square,
                &conjugate,
                Complex64::from_polar(1.0, angle),
            );
        }
        b.build()
    }

    /// Smallest cyclotomic tower that holds `2^k`-th roots of unity and `1/sqrt 2`.
    pub fn for_phase_depth(k: u32) -> Tower {
        Tower::cyclotomic(k.max(3)).expect("valid cyclotomic depth")
    }

    pub fn spec(&self) -> &TowerSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.spec.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spec.generators.is_empty()
    }

    /// Number of basis monomials, `2^k`.
    pub fn dim(&self) -> usize {
        1 << self.len()
    }

    pub fn names(&self) -> Vec<&str> {
        self.spec
            .generators
            .iter()
            .map(|g| g.name.as_str())
            .collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.spec.generators.iter().position(|g| g.name == name)
    }

    pub(crate) fn squares(&self) -> &[Vec<Dyadic>] {
        &self.spec.squares
    }

    pub(crate) fn monomial_floats(&self) -> &[Complex64] {
        &self.spec.monomial_floats
    }

    pub fn element(&self, coeffs: Vec<Dyadic>) -> Result<RingElement, RingError> {
        if coeffs.len() != self.dim() {
            return Err(RingError::InvalidTower(format!(
                "expected {} coefficients, got {}",
                self.dim(),
                coeffs.len()
            )));
        }
        Ok(RingElement::from_parts(self.clone(), coeffs))
    }

    pub fn zero(&self) -> RingElement {
        RingElement::from_parts(self.clone(), vec![Dyadic::zero(); self.dim()])
    }

    pub fn one(&self) -> RingElement {
        self.from_dyadic(Dyadic::one())
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        self.from_dyadic(Dyadic::from_int(n))
    }

    pub fn from_dyadic(&self, d: Dyadic) -> RingElement {
        let mut c = vec![Dyadic::zero(); self.dim()];
        c[0] = d;
        RingElement::from_parts(self.clone(), c)
    }

    /// `num / 2^k`.
    pub fn ratio(&self, num: i64, denom_log2: u32) -> RingElement {
        self.from_dyadic(Dyadic::new(num, denom_log2))
    }

    /// The basis monomial `prod_{j in mask} a_j`.
    pub fn monomial(&self, mask: usize) -> RingElement {
        let mut c = vec![Dyadic::zero(); self.dim()];
        c[mask] = Dyadic::one();
        RingElement::from_parts(self.clone(), c)
    }

    pub fn generator(&self, j: usize) -> RingElement {
        self.monomial(1 << j)
    }

    pub fn parse(&self, text: &str) -> Result<RingElement, RingError> {
        super::text::parse_element(self, text)
    }

    /// A primitive `2^k`-th root of unity (`k = 0` gives 1, `k = 1` gives -1).
    pub fn root_of_unity(&self, k: u32) -> Result<RingElement, RingError> {
        self.spec
            .roots
            .get(k as usize)
            .map(|c| RingElement::from_parts(self.clone(), c.clone()))
            .ok_or(RingError::MissingRoot(k))
    }

    /// Largest `k` for which a primitive `2^k`-th root of unity is known.
    pub fn max_root_log2(&self) -> u32 {
        self.spec.roots.len() as u32 - 1
    }

    pub fn i(&self) -> Result<RingElement, RingError> {
        self.root_of_unity(2)
    }

    pub fn has_i(&self) -> bool {
        self.spec.roots.len() > 2
    }

    pub fn sqrt2(&self) -> Result<RingElement, RingError> {
        self.spec
            .sqrt2
            .as_ref()
            .map(|c| RingElement::from_parts(self.clone(), c.clone()))
            .ok_or(RingError::MissingSqrt2)
    }

    /// `1/sqrt 2 = sqrt 2 / 2`.
    pub fn inv_sqrt2(&self) -> Result<RingElement, RingError> {
        Ok(self.sqrt2()?.div_pow2(1))
    }
}

/// Incremental constructor for [`Tower`]. Square and conjugate relations are
/// given in the textual ring form over the generator names.
#[derive(Default)]
pub struct TowerBuilder {
    pending: Vec<(String, String, String, Complex64)>,
    allow_degenerate: bool,
}

impl TowerBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn generator(
        mut self,
        name: &str,
        square: &str,
        conjugate: &str,
        float: Complex64,
    ) -> Self {
        self.pending.push((
            name.to_string(),
            square.to_string(),
            conjugate.to_string(),
            float,
        ));
        self
    }

    /// Skip the check that rejects generators that appear to lie in the lower ring.
    pub fn allow_degenerate(mut self, allow: bool) -> Self {
        self.allow_degenerate = allow;
        self
    }

    pub fn build(self) -> Result<Tower, RingError> {
        let k = self.pending.len();
        let dim = 1usize << k;
        let names: Vec<String> = self.pending.iter().map(|p| p.0.clone()).collect();
        for (j, n) in names.iter().enumerate() {
            let valid = n
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || names[..j].contains(n) {
                return Err(RingError::InvalidTower(format!("bad generator name `{n}`")));
            }
        }

        let mut generators = Vec::with_capacity(k);
        for (j, (name, sq, cj, float)) in self.pending.iter().enumerate() {
            let square = assemble_terms(&parse_terms(sq)?, &names[..j], dim)?;
            let conjugate = assemble_terms(&parse_terms(cj)?, &names, dim)?;
            generators.push(GeneratorSpec {
                name: name.clone(),
                square,
                conjugate,
                float_embedding: *float,
            });
        }
        build_from_specs(generators, self.allow_degenerate)
    }
}

/// Builds a tower from fully specified generators, running every consistency check.
pub fn build_from_specs(
    generators: Vec<GeneratorSpec>,
    allow_degenerate: bool,
) -> Result<Tower, RingError> {
    let k = generators.len();
    let dim = 1usize << k;
    for (j, g) in generators.iter().enumerate() {
        if g.square.len() != dim || g.conjugate.len() != dim {
            return Err(RingError::InvalidTower(format!(
                "generator `{}` has coefficient vectors of the wrong length",
                g.name
            )));
        }
        if g.square[(1 << j)..].iter().any(|c| !c.is_zero()) {
            return Err(RingError::InvalidTower(format!(
                "square of `{}` must only involve earlier generators",
                g.name
            )));
        }
    }
    let squares: Vec<Vec<Dyadic>> = generators
        .iter()
        .enumerate()
        .map(|(j, g)| g.square[..(1 << j)].to_vec())
        .collect();

    let mut monomial_floats = vec![Complex64::new(1.0, 0.0); dim];
    for (mask, f) in monomial_floats.iter_mut().enumerate() {
        for (j, g) in generators.iter().enumerate() {
            if mask >> j & 1 == 1 {
                *f *= g.float_embedding;
            }
        }
    }
    let embed = |c: &[Dyadic]| -> Complex64 {
        c.iter()
            .zip(&monomial_floats)
            .map(|(d, m)| m * d.to_f64())
            .sum()
    };

    for g in &generators {
        let lhs = g.float_embedding * g.float_embedding;
        let rhs = embed(&g.square);
        if (lhs - rhs).norm() > 1e-12 * rhs.norm().max(1.0) {
            return Err(RingError::InvalidTower(format!(
                "float embedding of `{}` squares to {lhs}, relation says {rhs}",
                g.name
            )));
        }
        let c = embed(&g.conjugate);
        if (c - g.float_embedding.conj()).norm() > 1e-12 * c.norm().max(1.0) {
            return Err(RingError::InvalidTower(format!(
                "conjugate of `{}` embeds to {c}, expected {}",
                g.name,
                g.float_embedding.conj()
            )));
        }
    }

    let mut conj_basis = vec![Vec::new(); dim];
    conj_basis[0] = unit(dim, 0);
    for mask in 1..dim {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        conj_basis[mask] = super::mul_coeffs(
            &squares,
            &conj_basis[mask & !(1 << top)],
            &generators[top].conjugate,
        );
    }

    let mut spec = TowerSpec {
        generators,
        squares,
        conj_basis,
        monomial_floats,
        roots: Vec::new(),
        sqrt2: None,
    };

    // conj must be an involutive ring homomorphism
    for j in 0..k {
        let cj = spec.generators[j].conjugate.clone();
        let back = conj_coeffs(&spec, &cj);
        if back != unit(dim, 1 << j) {
            return Err(RingError::InvalidTower(format!(
                "conjugation is not an involution on `{}`",
                spec.generators[j].name
            )));
        }
        let sq = super::mul_coeffs(&spec.squares, &cj, &cj);
        let conj_sq = conj_coeffs(&spec, &spec.generators[j].square.clone());
        if sq != conj_sq {
            return Err(RingError::InvalidTower(format!(
                "conj(`{0}`)^2 differs from conj(`{0}`^2)",
                spec.generators[j].name
            )));
        }
    }

    if !allow_degenerate {
        for j in 0..k {
            if let Some(witness) = lower_ring_witness(&spec, j) {
                return Err(RingError::DegenerateGenerator {
                    name: spec.generators[j].name.clone(),
                    witness,
                });
            }
        }
    }

    spec.roots = find_roots(&spec);
    spec.sqrt2 = find_sqrt2(&spec);
    Ok(Tower {
        spec: Arc::new(spec),
    })
}

fn unit(dim: usize, idx: usize) -> Vec<Dyadic> {
    let mut v = vec![Dyadic::zero(); dim];
    v[idx] = Dyadic::one();
    v
}

pub(crate) fn conj_coeffs(spec: &TowerSpec, x: &[Dyadic]) -> Vec<Dyadic> {
    let mut out = vec![Dyadic::zero(); x.len()];
    for (mask, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (o, b) in out.iter_mut().zip(&spec.conj_basis[mask]) {
            if !b.is_zero() {
                *o += &(c * b);
            }
        }
    }
    out
}

fn pow2_power(spec: &TowerSpec, x: &[Dyadic], doublings: u32) -> Vec<Dyadic> {
    let mut acc = x.to_vec();
    for _ in 0..doublings {
        acc = super::mul_coeffs(&spec.squares, &acc, &acc);
    }
    acc
}

fn find_roots(spec: &TowerSpec) -> Vec<Vec<Dyadic>> {
    let dim = spec.monomial_floats.len();
    let mut roots = vec![unit(dim, 0)];
    let mut minus_one = vec![Dyadic::zero(); dim];
    minus_one[0] = Dyadic::from_int(-1);
    roots.push(minus_one.clone());
    for k in 2..=30u32 {
        let target = Complex64::from_polar(1.0, 2.0 * PI / (1u64 << k) as f64);
        let mut found = None;
        'search: for mask in 1..dim {
            for sign in [1i64, -1] {
                let f = spec.monomial_floats[mask] * sign as f64;
                if (f - target).norm() < 1e-9 {
                    let mut c = vec![Dyadic::zero(); dim];
                    c[mask] = Dyadic::from_int(sign);
                    if pow2_power(spec, &c, k - 1) == minus_one {
                        found = Some(c);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(c) => roots.push(c),
            None => break,
        }
    }
    roots
}

fn find_sqrt2(spec: &TowerSpec) -> Option<Vec<Dyadic>> {
    let dim = spec.monomial_floats.len();
    let mut two = vec![Dyadic::zero(); dim];
    two[0] = Dyadic::from_int(2);
    let roots = find_roots(spec);
    if let Some(w) = roots.get(3) {
        let s: Vec<Dyadic> = w
            .iter()
            .zip(conj_coeffs(spec, w))
            .map(|(a, b)| a + &b)
            .collect();
        return Some(s);
    }
    for mask in 1..dim {
        let mut c = vec![Dyadic::zero(); dim];
        c[mask] = Dyadic::one();
        if spec.monomial_floats[mask].re > 0.0 && super::mul_coeffs(&spec.squares, &c, &c) == two {
            return Some(c);
        }
    }
    None
}

/// Looks for a small-coefficient element of the lower ring whose square is
/// `a_j^2` and whose float embedding matches `a_j`. Finding one means `a_j`
/// is not a proper extension and representations would not be unique.
fn lower_ring_witness(spec: &TowerSpec, j: usize) -> Option<String> {
    const VALUES: [(i64, u32); 13] = [
        (0, 0),
        (1, 0),
        (-1, 0),
        (1, 1),
        (-1, 1),
        (2, 0),
        (-2, 0),
        (1, 2),
        (-1, 2),
        (3, 1),
        (-3, 1),
        (3, 2),
        (-3, 2),
    ];
    let lower = 1usize << j;
    let mut per = VALUES.len();
    while per > 2 && (per as f64).powi(lower as i32) > 200_000.0 {
        per -= 1;
    }
    let values: Vec<Dyadic> = VALUES[..per]
        .iter()
        .map(|&(n, e)| Dyadic::new(n, e))
        .collect();
    let target = spec.generators[j].float_embedding;
    let square = &spec.generators[j].square[..lower];
    let mut digits = vec![0usize; lower];
    loop {
        let f: Complex64 = digits
            .iter()
            .enumerate()
            .map(|(m, &d)| spec.monomial_floats[m] * values[d].to_f64())
            .sum();
        if (f - target).norm() < 1e-9 {
            let z: Vec<Dyadic> = digits.iter().map(|&d| values[d].clone()).collect();
            if super::mul_coeffs(&spec.squares[..j], &z, &z) == square {
                let dim = 1 << spec.generators.len();
                let mut full = z.clone();
                full.resize(dim, Dyadic::zero());
                return Some(super::text::format_coeffs(&full, &names_of(spec)));
            }
        }
        let mut pos = 0;
        loop {
            if pos == lower {
                return None;
            }
            digits[pos] += 1;
            if digits[pos] < per {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

fn names_of(spec: &TowerSpec) -> Vec<String> {
    spec.generators.iter().map(|g| g.name.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_t_generators() {
        let t = Tower::clifford_t();
        assert_eq!(t.names(), vec!["i", "w"]);
        let i = t.generator(0);
        let w = t.generator(1);
        assert_eq!(&i * &i, t.from_int(-1));
        assert_eq!(&w * &w, i);
        assert_eq!(i.conj(), -&i);
        assert_eq!(w.conj(), -(&i * &w));
        let f = w.embed_float();
        assert!((f.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((f.im - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn roots_and_sqrt2() {
        let t = Tower::cyclotomic(4).unwrap();
        assert_eq!(t.max_root_log2(), 4);
        let z = t.root_of_unity(4).unwrap();
        assert_eq!(z.pow(8), t.from_int(-1));
        let s = t.sqrt2().unwrap();
        assert_eq!(&s * &s, t.from_int(2));
        assert!(Tower::dyadic().sqrt2().is_err());
        assert_eq!(Tower::cyclotomic(2).unwrap().max_root_log2(), 2);
    }

    #[test]
    fn rejects_generator_in_lower_ring() {
        let err = TowerBuilder::new()
            .generator("r", "4", "r", Complex64::new(2.0, 0.0))
            .build()
            .unwrap_err();
        assert!(matches!(err, RingError::DegenerateGenerator { .. }));
        // explicitly overridden
        TowerBuilder::new()
            .generator("r", "4", "r", Complex64::new(2.0, 0.0))
            .allow_degenerate(true)
            .build()
            .unwrap();
        // sqrt(2) is a genuine extension of Z[1/2]
        let t = TowerBuilder::new()
            .generator("r", "2", "r", Complex64::new(2f64.sqrt(), 0.0))
            .build()
            .unwrap();
        assert_eq!(t.sqrt2().unwrap(), t.generator(0));
    }

    #[test]
    fn rejects_inconsistent_relations() {
        let bad_float = TowerBuilder::new()
            .generator("i", "-1", "-i", Complex64::new(1.0, 0.0))
            .build();
        assert!(bad_float.is_err());
        let bad_conj = TowerBuilder::new()
            .generator("i", "-1", "i", Complex64::new(0.0, 1.0))
            .build();
        assert!(bad_conj.is_err());
        let not_lower = TowerBuilder::new()
            .generator("i", "i", "-i", Complex64::new(0.0, 1.0))
            .build();
        assert!(not_lower.is_err());
    }
}
