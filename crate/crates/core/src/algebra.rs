//! Exact symbolic algebra of the group generated by qubit bit-flips and
//! diagonal ±1 phase operators.
//!
//! Every operator handled by this crate — single-qubit Paulis, CZ, CCZ,
//! star and plaquette stabilizers, entangler circuits, string operators and
//! their boundary corrections — is of the form
//!
//! ```text
//! U |z⟩ = (-1)^{p(z)} |z ⊕ x⟩
//! ```
//!
//! for a bit-flip set `x` and a Boolean polynomial `p` over F2 ("phase then
//! flip" convention, fixed globally). Products, inverses, conjugations and
//! scalar extraction are all exact; there is no floating point anywhere in
//! this module.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense non-negative index identifying one qubit (a lattice vertex or edge).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SiteId(pub u32);

impl SiteId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Product of Boolean variables `z_v` over a strictly sorted, duplicate-free
/// set of sites. The empty product is the constant 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    vars: Vec<SiteId>,
}

impl Monomial {
    /// Constant monomial 1.
    pub fn one() -> Self {
        Monomial { vars: Vec::new() }
    }

    /// Builds a monomial from arbitrary sites; sorts and deduplicates
    /// (`z_v · z_v = z_v` over F2-valued variables).
    pub fn new<I: IntoIterator<Item = SiteId>>(vars: I) -> Self {
        let mut vars: Vec<SiteId> = vars.into_iter().collect();
        vars.sort_unstable();
        vars.dedup();
        Monomial { vars }
    }

    pub fn vars(&self) -> &[SiteId] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn contains(&self, v: SiteId) -> bool {
        self.vars.binary_search(&v).is_ok()
    }

    /// Evaluates the monomial on a bit assignment (true = 1).
    pub fn eval(&self, assignment: &dyn Fn(SiteId) -> bool) -> bool {
        self.vars.iter().all(|&v| assignment(v))
    }
}

/// F2-valued phase polynomial: a set of monomials with XOR addition.
///
/// Canonical form is the set itself (no duplicate monomials); `p ⊕ p = 0`
/// by construction.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PhasePoly {
    monomials: BTreeSet<Monomial>,
}

impl PhasePoly {
    /// The zero polynomial (phase +1 on every basis state).
    pub fn zero() -> Self {
        PhasePoly::default()
    }

    /// The constant polynomial 1 (global phase −1).
    pub fn one() -> Self {
        let mut monomials = BTreeSet::new();
        monomials.insert(Monomial::one());
        PhasePoly { monomials }
    }

    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(monomials: I) -> Self {
        let mut p = PhasePoly::zero();
        for m in monomials {
            p.toggle(m);
        }
        p
    }

    /// Single-variable polynomial `z_v`.
    pub fn var(v: SiteId) -> Self {
        PhasePoly::from_monomials([Monomial::new([v])])
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// True when the polynomial is the constant 0 or 1.
    pub fn is_constant(&self) -> bool {
        self.monomials.is_empty() || (self.monomials.len() == 1 && self.has_constant_term())
    }

    pub fn has_constant_term(&self) -> bool {
        self.monomials.contains(&Monomial::one())
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.monomials.iter()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    /// Characteristic-2 sum: symmetric difference of the monomial sets.
    pub fn add(&self, other: &PhasePoly) -> PhasePoly {
        let mut out = self.clone();
        for m in &other.monomials {
            out.toggle(m.clone());
        }
        out
    }

    /// The substitution `z_v ↦ z_v ⊕ 1` for every `v` in `flips`
    /// (τ_x), expanded multilinearly and re-canonicalized.
    ///
    /// For all assignments z: `result(z) = self(z ⊕ flips)`.
    pub fn substitute(&self, flips: &BTreeSet<SiteId>) -> PhasePoly {
        let mut out = PhasePoly::zero();
        for m in &self.monomials {
            let flipped: Vec<SiteId> = m
                .vars
                .iter()
                .copied()
                .filter(|v| flips.contains(v))
                .collect();
            if flipped.is_empty() {
                out.toggle(m.clone());
                continue;
            }
            let fixed: Vec<SiteId> = m
                .vars
                .iter()
                .copied()
                .filter(|v| !flips.contains(v))
                .collect();
            // ∏_{v∈flipped} (z_v ⊕ 1) = Σ_{S ⊆ flipped} ∏_{v∈S} z_v
            for mask in 0u64..(1u64 << flipped.len()) {
                let mut vars = fixed.clone();
                for (i, &v) in flipped.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        vars.push(v);
                    }
                }
                out.toggle(Monomial::new(vars));
            }
        }
        out
    }

    /// Evaluates the polynomial on a bit assignment.
    pub fn eval(&self, assignment: &dyn Fn(SiteId) -> bool) -> bool {
        let mut acc = false;
        for m in &self.monomials {
            acc ^= m.eval(assignment);
        }
        acc
    }

    /// All sites appearing in some monomial.
    pub fn support(&self) -> BTreeSet<SiteId> {
        self.monomials
            .iter()
            .flat_map(|m| m.vars.iter().copied())
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.monomials.iter().map(|m| m.degree()).max().unwrap_or(0)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    /// The group commutator of the given pair is not ±identity.
    #[error("commutator is not a scalar: residual {0}")]
    NonScalarCommutator(Box<XdOperator>),
    /// The operator is not a ±1 multiple of the identity.
    #[error("operator is not a scalar: {0}")]
    NonScalar(Box<XdOperator>),
    #[error("bit string has length {got}, operator universe needs at least {needs}")]
    LengthMismatch { got: usize, needs: usize },
    #[error("cannot parse operator from `{0}`")]
    Parse(String),
}

/// `U |z⟩ = (-1)^{p(z)} |z ⊕ x⟩`: an X-flip support together with a diagonal
/// phase polynomial. Always unitary; diagonal iff the flip support is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct XdOperator {
    xsupport: BTreeSet<SiteId>,
    poly: PhasePoly,
}

impl XdOperator {
    pub fn identity() -> Self {
        XdOperator::default()
    }

    pub fn new(xsupport: BTreeSet<SiteId>, poly: PhasePoly) -> Self {
        XdOperator { xsupport, poly }
    }

    /// σ_x on one site.
    pub fn pauli_x(v: SiteId) -> Self {
        XdOperator {
            xsupport: BTreeSet::from([v]),
            poly: PhasePoly::zero(),
        }
    }

    /// σ_z on one site: `(-1)^{z_v}`.
    pub fn pauli_z(v: SiteId) -> Self {
        XdOperator {
            xsupport: BTreeSet::new(),
            poly: PhasePoly::var(v),
        }
    }

    /// Controlled-Z: `(-1)^{z_u z_v}`.
    pub fn cz(u: SiteId, v: SiteId) -> Self {
        XdOperator {
            xsupport: BTreeSet::new(),
            poly: PhasePoly::from_monomials([Monomial::new([u, v])]),
        }
    }

    /// Doubly-controlled Z: `(-1)^{z_u z_v z_w}`.
    pub fn ccz(u: SiteId, v: SiteId, w: SiteId) -> Self {
        XdOperator {
            xsupport: BTreeSet::new(),
            poly: PhasePoly::from_monomials([Monomial::new([u, v, w])]),
        }
    }

    /// Diagonal operator `(-1)^{p(z)}`.
    pub fn diagonal(poly: PhasePoly) -> Self {
        XdOperator {
            xsupport: BTreeSet::new(),
            poly,
        }
    }

    /// Product of σ_x over a site set.
    pub fn x_product<I: IntoIterator<Item = SiteId>>(sites: I) -> Self {
        XdOperator {
            xsupport: sites.into_iter().collect(),
            poly: PhasePoly::zero(),
        }
    }

    /// The global scalar −1.
    pub fn minus_identity() -> Self {
        XdOperator {
            xsupport: BTreeSet::new(),
            poly: PhasePoly::one(),
        }
    }

    pub fn xsupport(&self) -> &BTreeSet<SiteId> {
        &self.xsupport
    }

    pub fn poly(&self) -> &PhasePoly {
        &self.poly
    }

    pub fn is_identity(&self) -> bool {
        self.xsupport.is_empty() && self.poly.is_zero()
    }

    pub fn is_diagonal(&self) -> bool {
        self.xsupport.is_empty()
    }

    /// Returns `Some(±1)` when the operator is a scalar multiple of identity.
    pub fn scalar(&self) -> Option<i8> {
        if !self.xsupport.is_empty() || !self.poly.is_constant() {
            return None;
        }
        Some(if self.poly.has_constant_term() { -1 } else { 1 })
    }

    /// All sites the operator acts on (flips plus phase-polynomial support;
    /// the constant monomial contributes nothing).
    pub fn support(&self) -> BTreeSet<SiteId> {
        let mut s = self.poly.support();
        s.extend(self.xsupport.iter().copied());
        s
    }

    /// Group law: `(x1,p1)·(x2,p2) = (x1⊕x2, p2 ⊕ p1∘τ_{x2})`.
    pub fn multiply(&self, rhs: &XdOperator) -> XdOperator {
        let xsupport: BTreeSet<SiteId> = self
            .xsupport
            .symmetric_difference(&rhs.xsupport)
            .copied()
            .collect();
        let poly = rhs.poly.add(&self.poly.substitute(&rhs.xsupport));
        XdOperator { xsupport, poly }
    }

    /// `A⁻¹ = (x, p∘τ_x)`.
    pub fn inverse(&self) -> XdOperator {
        XdOperator {
            xsupport: self.xsupport.clone(),
            poly: self.poly.substitute(&self.xsupport),
        }
    }

    /// `A · B · A⁻¹`. Conjugation by any operator preserves diagonality.
    pub fn conjugate(&self, b: &XdOperator) -> XdOperator {
        self.multiply(b).multiply(&self.inverse())
    }

    /// Scalar part of the group commutator `A B A⁻¹ B⁻¹`.
    pub fn commutator_phase(&self, b: &XdOperator) -> Result<i8, AlgebraError> {
        let c = self.conjugate(b).multiply(&b.inverse());
        c.scalar()
            .ok_or_else(|| AlgebraError::NonScalarCommutator(Box::new(c)))
    }

    /// Applies the operator to a computational basis state given as a bit
    /// string indexed by `SiteId`. Returns the image bit string and the sign.
    pub fn apply_to_basis(&self, bits: &[bool]) -> Result<(Vec<bool>, i8), AlgebraError> {
        let needs = self
            .support()
            .iter()
            .map(|v| v.index() + 1)
            .max()
            .unwrap_or(0);
        if bits.len() < needs {
            return Err(AlgebraError::LengthMismatch {
                got: bits.len(),
                needs,
            });
        }
        let sign = if self.poly.eval(&|v| bits[v.index()]) {
            -1
        } else {
            1
        };
        let mut out = bits.to_vec();
        for v in &self.xsupport {
            out[v.index()] ^= true;
        }
        Ok((out, sign))
    }

    /// Hermitian involution test: `A² = I` iff `p = p∘τ_x`.
    pub fn is_involution(&self) -> bool {
        self.poly == self.poly.substitute(&self.xsupport)
    }
}

/// Canonical text form `X{ids};P{{m};{m};...}` with sorted ids; each monomial
/// is a comma-joined id list and the constant monomial is `{}`.
impl fmt::Display for XdOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{{")?;
        for (i, v) in self.xsupport.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}};P{{")?;
        for (i, m) in self.poly.monomials().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{{")?;
            for (j, v) in m.vars().iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for XdOperator {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AlgebraError::Parse(s.to_string());
        let s = s.trim();
        let rest = s.strip_prefix("X{").ok_or_else(err)?;
        let (xpart, rest) = rest.split_once('}').ok_or_else(err)?;
        let rest = rest
            .strip_prefix(';')
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix("P{"))
            .ok_or_else(err)?;
        let ppart = rest.strip_suffix('}').ok_or_else(err)?;

        let parse_ids = |ids: &str| -> Result<Vec<SiteId>, AlgebraError> {
            if ids.is_empty() {
                return Ok(Vec::new());
            }
            ids.split(',')
                .map(|t| t.trim().parse::<u32>().map(SiteId).map_err(|_| err()))
                .collect()
        };

        let xsupport: BTreeSet<SiteId> = parse_ids(xpart)?.into_iter().collect();
        let mut poly = PhasePoly::zero();
        if !ppart.is_empty() {
            for mtext in ppart.split(';') {
                let inner = mtext
                    .trim()
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(err)?;
                poly = poly.add(&PhasePoly::from_monomials([Monomial::new(parse_ids(
                    inner,
                )?)]));
            }
        }
        Ok(XdOperator { xsupport, poly })
    }
}

/// Draws a random operator over `n_sites` sites: random flip subset plus a
/// random phase polynomial with monomial degree at most `max_degree`.
pub fn random_op<R: rand::Rng>(rng: &mut R, n_sites: u32, max_degree: usize) -> XdOperator {
    let mut xsupport = BTreeSet::new();
    for v in 0..n_sites {
        if rng.gen_bool(0.5) {
            xsupport.insert(SiteId(v));
        }
    }
    let n_terms = rng.gen_range(0..=2 * n_sites as usize + 1);
    let mut poly = PhasePoly::zero();
    for _ in 0..n_terms {
        let deg = rng.gen_range(0..=max_degree.min(n_sites as usize));
        let mut vars = Vec::with_capacity(deg);
        for _ in 0..deg {
            vars.push(SiteId(rng.gen_range(0..n_sites)));
        }
        poly = poly.add(&PhasePoly::from_monomials([Monomial::new(vars)]));
    }
    XdOperator::new(xsupport, poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(i: u32) -> SiteId {
        SiteId(i)
    }

    /// Exact integer matrix oracle, built from first principles: gate
    /// matrices are assembled entry-by-entry from the textbook definitions
    /// and multiplied as plain integer matrices. Entries of every operator
    /// in this algebra are in {-1, 0, 1}.
    mod matrix_oracle {
        use super::super::XdOperator;

        #[derive(Clone, PartialEq, Debug)]
        pub struct Mat {
            pub n: usize,
            pub a: Vec<i64>, // row-major, dimension 2^n
        }

        impl Mat {
            pub fn dim(&self) -> usize {
                1 << self.n
            }

            pub fn get(&self, r: usize, c: usize) -> i64 {
                self.a[r * self.dim() + c]
            }

            pub fn mul(&self, rhs: &Mat) -> Mat {
                assert_eq!(self.n, rhs.n);
                let d = self.dim();
                let mut a = vec![0i64; d * d];
                for r in 0..d {
                    for k in 0..d {
                        let x = self.get(r, k);
                        if x == 0 {
                            continue;
                        }
                        for c in 0..d {
                            a[r * d + c] += x * rhs.get(k, c);
                        }
                    }
                }
                Mat { n: self.n, a }
            }

            pub fn identity(n: usize) -> Mat {
                let d = 1usize << n;
                let mut a = vec![0i64; d * d];
                for i in 0..d {
                    a[i * d + i] = 1;
                }
                Mat { n, a }
            }
        }

        /// σ_x on qubit q of an n-qubit register: permutation matrix.
        pub fn x(n: usize, q: usize) -> Mat {
            let d = 1usize << n;
            let mut a = vec![0i64; d * d];
            for col in 0..d {
                a[(col ^ (1 << q)) * d + col] = 1;
            }
            Mat { n, a }
        }

        /// σ_z on qubit q: diag((-1)^{bit q}).
        pub fn z(n: usize, q: usize) -> Mat {
            let d = 1usize << n;
            let mut a = vec![0i64; d * d];
            for col in 0..d {
                a[col * d + col] = if col & (1 << q) != 0 { -1 } else { 1 };
            }
            Mat { n, a }
        }

        /// CZ between qubits q1, q2: diag((-1)^{bit q1 · bit q2}).
        pub fn cz(n: usize, q1: usize, q2: usize) -> Mat {
            let d = 1usize << n;
            let mut a = vec![0i64; d * d];
            for col in 0..d {
                let on = col & (1 << q1) != 0 && col & (1 << q2) != 0;
                a[col * d + col] = if on { -1 } else { 1 };
            }
            Mat { n, a }
        }

        /// CCZ: diag((-1)^{xyz}).
        pub fn ccz(n: usize, q1: usize, q2: usize, q3: usize) -> Mat {
            let d = 1usize << n;
            let mut a = vec![0i64; d * d];
            for col in 0..d {
                let on = col & (1 << q1) != 0 && col & (1 << q2) != 0 && col & (1 << q3) != 0;
                a[col * d + col] = if on { -1 } else { 1 };
            }
            Mat { n, a }
        }

        /// Dense matrix of an XdOperator from its claimed basis action,
        /// used to cross machineries: column z carries (-1)^{p(z)} at row z⊕x.
        pub fn from_op(n: usize, op: &XdOperator) -> Mat {
            let d = 1usize << n;
            let mut a = vec![0i64; d * d];
            for col in 0..d {
                let bits: Vec<bool> = (0..n).map(|q| col & (1 << q) != 0).collect();
                let (out, sign) = op.apply_to_basis(&bits).unwrap();
                let row = out
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (q, &b)| acc | ((b as usize) << q));
                a[row * d + col] = sign as i64;
            }
            Mat { n, a }
        }
    }

    #[test]
    fn poly_add_examples() {
        let p = PhasePoly::var(s(0));
        assert!(p.add(&p).is_zero());

        let zu = PhasePoly::var(s(0));
        let zuv = PhasePoly::from_monomials([Monomial::new([s(0), s(1)])]);
        let sum = zu.add(&zuv);
        assert_eq!(sum.len(), 2);

        let with_const = zu.add(&PhasePoly::one());
        assert_eq!(with_const.add(&PhasePoly::one()), zu);
    }

    #[test]
    fn substitution_matches_truth_table() {
        // p = z_u z_v, x = {u}  →  z_u z_v ⊕ z_v, verified on all 4 assignments.
        let p = PhasePoly::from_monomials([Monomial::new([s(0), s(1)])]);
        let flips = BTreeSet::from([s(0)]);
        let q = p.substitute(&flips);
        let expected = p.add(&PhasePoly::var(s(1)));
        assert_eq!(q, expected);
        for bits in 0..4u32 {
            let assign = |v: SiteId| bits & (1 << v.0) != 0;
            let flipped = |v: SiteId| (bits ^ 1) & (1 << v.0) != 0;
            assert_eq!(q.eval(&assign), p.eval(&flipped));
        }
    }

    #[test]
    fn substitution_ccz_term() {
        // z_a z_e z_b with flip {a} → z_a z_e z_b ⊕ z_e z_b.
        let p = PhasePoly::from_monomials([Monomial::new([s(0), s(1), s(2)])]);
        let q = p.substitute(&BTreeSet::from([s(0)]));
        let expected = p.add(&PhasePoly::from_monomials([Monomial::new([s(1), s(2)])]));
        assert_eq!(q, expected);
    }

    #[test]
    fn substitution_empty_is_identity() {
        let p = PhasePoly::from_monomials([
            Monomial::new([s(0), s(2)]),
            Monomial::new([s(1)]),
            Monomial::one(),
        ]);
        assert_eq!(p.substitute(&BTreeSet::new()), p);
    }

    #[test]
    fn pauli_x_squares_to_identity() {
        let a = XdOperator::pauli_x(s(3));
        assert!(a.multiply(&a).is_identity());
    }

    #[test]
    fn ccz_squares_to_identity() {
        let a = XdOperator::ccz(s(0), s(1), s(2));
        assert!(a.multiply(&a).is_identity());
    }

    #[test]
    fn zx_vs_xz_differ_by_global_sign() {
        let x = XdOperator::pauli_x(s(0));
        let z = XdOperator::pauli_z(s(0));
        let zx = z.multiply(&x);
        let xz = x.multiply(&z);
        assert_eq!(zx, xz.multiply(&XdOperator::minus_identity()));

        // Against the first-principles matrix oracle.
        let m_zx = matrix_oracle::z(1, 0).mul(&matrix_oracle::x(1, 0));
        assert_eq!(matrix_oracle::from_op(1, &zx), m_zx);
    }

    #[test]
    fn anticommutation_phase() {
        let x = XdOperator::pauli_x(s(0));
        let z = XdOperator::pauli_z(s(0));
        assert_eq!(x.commutator_phase(&z).unwrap(), -1);
        assert_eq!(z.commutator_phase(&x).unwrap(), -1);
        let z1 = XdOperator::pauli_z(s(1));
        assert_eq!(x.commutator_phase(&z1).unwrap(), 1);
    }

    #[test]
    fn flip_through_ccz_leaves_cz() {
        // Ad(σ_x^{a})(CCZ_{a e b}) = CCZ_{a e b} · CZ_{e b}
        let (a, e, b) = (s(0), s(1), s(2));
        let lhs = XdOperator::pauli_x(a).conjugate(&XdOperator::ccz(a, e, b));
        let rhs = XdOperator::ccz(a, e, b).multiply(&XdOperator::cz(e, b));
        assert_eq!(lhs, rhs);

        let m_lhs = matrix_oracle::x(3, 0)
            .mul(&matrix_oracle::ccz(3, 0, 1, 2))
            .mul(&matrix_oracle::x(3, 0));
        let m_rhs = matrix_oracle::ccz(3, 0, 1, 2).mul(&matrix_oracle::cz(3, 1, 2));
        assert_eq!(m_lhs, m_rhs);
        assert_eq!(matrix_oracle::from_op(3, &lhs), m_lhs);
    }

    #[test]
    fn flip_through_cz_leaves_pauli_z() {
        // Ad(σ_x^{a})(CZ_{b a}) = CZ_{b a} · σ_z^{(b)}
        let (a, b) = (s(0), s(1));
        let lhs = XdOperator::pauli_x(a).conjugate(&XdOperator::cz(b, a));
        let rhs = XdOperator::cz(b, a).multiply(&XdOperator::pauli_z(b));
        assert_eq!(lhs, rhs);

        let m_lhs = matrix_oracle::x(2, 0)
            .mul(&matrix_oracle::cz(2, 0, 1))
            .mul(&matrix_oracle::x(2, 0));
        let m_rhs = matrix_oracle::cz(2, 0, 1).mul(&matrix_oracle::z(2, 1));
        assert_eq!(m_lhs, m_rhs);
        assert_eq!(matrix_oracle::from_op(2, &lhs), m_lhs);
    }

    #[test]
    fn flip_commutator_with_ccz_is_cz_residual() {
        let (u, v, w) = (s(0), s(1), s(2));
        let x = XdOperator::pauli_x(u);
        let ccz = XdOperator::ccz(u, v, w);
        let err = x.commutator_phase(&ccz).unwrap_err();
        match err {
            AlgebraError::NonScalarCommutator(residual) => {
                assert_eq!(*residual, XdOperator::cz(v, w));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn diagonals_commute() {
        let p = XdOperator::diagonal(PhasePoly::from_monomials([
            Monomial::new([s(0), s(1)]),
            Monomial::new([s(2)]),
        ]));
        let q = XdOperator::diagonal(PhasePoly::from_monomials([Monomial::new([s(0), s(2)])]));
        assert_eq!(p.conjugate(&q), q);
        assert!(q.is_diagonal() && q.inverse() == q);
    }

    #[test]
    fn conjugation_preserves_diagonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_op(&mut rng, 6, 3);
            let d = XdOperator::diagonal(random_op(&mut rng, 6, 3).poly().clone());
            assert!(a.conjugate(&d).is_diagonal());
        }
    }

    #[test]
    fn apply_to_basis_examples() {
        let id = XdOperator::identity();
        let (out, sign) = id.apply_to_basis(&[true, false]).unwrap();
        assert_eq!((out, sign), (vec![true, false], 1));

        let ccz = XdOperator::ccz(s(0), s(1), s(2));
        let (out, sign) = ccz.apply_to_basis(&[true, true, true]).unwrap();
        assert_eq!((out, sign), (vec![true, true, true], -1));
        let (_, sign) = ccz.apply_to_basis(&[true, true, false]).unwrap();
        assert_eq!(sign, 1);

        let x = XdOperator::pauli_x(s(1));
        let (out, sign) = x.apply_to_basis(&[false, false, true]).unwrap();
        assert_eq!((out, sign), (vec![false, true, true], 1));

        assert!(matches!(
            XdOperator::pauli_z(s(5)).apply_to_basis(&[false]),
            Err(AlgebraError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn canonical_text_round_trip() {
        let op = XdOperator::new(
            BTreeSet::from([s(0), s(3)]),
            PhasePoly::from_monomials([
                Monomial::one(),
                Monomial::new([s(1), s(2)]),
                Monomial::new([s(4)]),
            ]),
        );
        let text = op.to_string();
        assert_eq!(text, "X{0,3};P{{};{1,2};{4}}");
        let back: XdOperator = text.parse().unwrap();
        assert_eq!(back, op);
        // A space after the part separator is tolerated.
        let spaced: XdOperator = "X{0,3}; P{{};{1,2};{4}}".parse().unwrap();
        assert_eq!(spaced, op);
        assert_eq!(
            XdOperator::identity()
                .to_string()
                .parse::<XdOperator>()
                .unwrap(),
            XdOperator::identity()
        );
    }

    #[test]
    fn random_products_match_matrix_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 4;
        for _ in 0..40 {
            let a = random_op(&mut rng, n as u32, 3);
            let b = random_op(&mut rng, n as u32, 3);
            let prod = a.multiply(&b);
            let m = matrix_oracle::from_op(n, &a).mul(&matrix_oracle::from_op(n, &b));
            assert_eq!(matrix_oracle::from_op(n, &prod), m);
            let inv = a.inverse();
            assert_eq!(
                matrix_oracle::from_op(n, &a).mul(&matrix_oracle::from_op(n, &inv)),
                matrix_oracle::Mat::identity(n)
            );
        }
    }

    proptest::proptest! {
        #[test]
        fn group_law_associativity(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_op(&mut rng, 8, 3);
            let b = random_op(&mut rng, 8, 3);
            let c = random_op(&mut rng, 8, 3);
            proptest::prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
            proptest::prop_assert!(a.multiply(&a.inverse()).is_identity());
            proptest::prop_assert!(a.inverse().multiply(&a).is_identity());
        }

        #[test]
        fn substitution_composition_law(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_op(&mut rng, 8, 4).poly().clone();
            let mut x = BTreeSet::new();
            let mut y = BTreeSet::new();
            for v in 0..8u32 {
                if rng.gen_bool(0.4) { x.insert(SiteId(v)); }
                if rng.gen_bool(0.4) { y.insert(SiteId(v)); }
            }
            let xy: BTreeSet<SiteId> = x.symmetric_difference(&y).copied().collect();
            proptest::prop_assert_eq!(p.substitute(&xy), p.substitute(&x).substitute(&y));
        }

        #[test]
        fn semantics_composition_on_basis(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 5u32;
            let a = random_op(&mut rng, n, 3);
            let b = random_op(&mut rng, n, 3);
            let ab = a.multiply(&b);
            for z in 0..(1u32 << n) {
                let bits: Vec<bool> = (0..n).map(|q| z & (1 << q) != 0).collect();
                let (mid, s1) = b.apply_to_basis(&bits).unwrap();
                let (fin, s2) = a.apply_to_basis(&mid).unwrap();
                let (direct, s) = ab.apply_to_basis(&bits).unwrap();
                proptest::prop_assert_eq!(&direct, &fin);
                proptest::prop_assert_eq!(s as i16, (s1 as i16) * (s2 as i16));
            }
        }

        #[test]
        fn involution_iff_poly_fixed_by_own_flips(seed in 0u64..300) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_op(&mut rng, 8, 3);
            proptest::prop_assert_eq!(a.multiply(&a).is_identity(), a.is_involution());
        }

        #[test]
        fn canonical_form_equality_iff_equal_action(seed in 0u64..100) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 4u32;
            let a = random_op(&mut rng, n, 3);
            let b = random_op(&mut rng, n, 3);
            let mut same_action = true;
            for z in 0..(1u32 << n) {
                let bits: Vec<bool> = (0..n).map(|q| z & (1 << q) != 0).collect();
                if a.apply_to_basis(&bits).unwrap() != b.apply_to_basis(&bits).unwrap() {
                    same_action = false;
                    break;
                }
            }
            proptest::prop_assert_eq!(a == b, same_action);
        }
    }
}
