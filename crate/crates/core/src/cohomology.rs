//! Exact finite-group cohomology with permutation modules.
//!
//! The coefficient module is `M = ⊕_labels U(1)` where the group permutes
//! the label summands; U(1) values are exact rationals `q` mod 1 standing
//! for `e^{2πiq}`. The left action used throughout is
//! `(g ★ x)_a = x_{a^{(g⁻¹)}}`, so a 2-cochain `η` is a cocycle iff
//!
//! ```text
//! η_{a^{(g⁻¹)}}(h,k) + η_a(g,hk) = η_a(gh,k) + η_a(g,h)      (mod 1)
//! ```
//!
//! for every label `a` and all `g,h,k`. Class comparison is exhaustive
//! search over rephasings below a configurable bound, with an exact
//! linear-algebra fallback over Z_n; `H²(G, Z_n)` for the trivial action is
//! computed from the bar-resolution differentials by integer Smith normal
//! form and cross-checked against brute-force cochain enumeration.

#![allow(clippy::needless_range_loop)] // index math mirrors the formulas

use std::fmt;

use num::rational::Ratio;
use num::{BigInt, Integer, One, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("label action is not a right action: {0}")]
    NotAnAction(String),
    #[error("phase denominator must be positive")]
    BadPhase,
    #[error("cochain shape does not match the module")]
    ShapeMismatch,
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
}

/// Exact U(1) element `e^{2πiq}` with `q ∈ [0,1)` a reduced rational.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Phase(Ratio<i64>);

impl Phase {
    /// The identity phase `+1`.
    pub fn one() -> Self {
        Phase(Ratio::zero())
    }

    /// The phase `−1` (`q = 1/2`).
    pub fn minus_one() -> Self {
        Phase(Ratio::new(1, 2))
    }

    pub fn new(num: i64, den: i64) -> Result<Self, CohomologyError> {
        if den <= 0 {
            return Err(CohomologyError::BadPhase);
        }
        Ok(Phase(Ratio::new(num, den)).normalized())
    }

    fn normalized(self) -> Self {
        let mut q = self.0.fract();
        if q < Ratio::zero() {
            q += Ratio::one();
        }
        Phase(q)
    }

    pub fn from_sign(sign: i8) -> Self {
        if sign < 0 {
            Phase::minus_one()
        } else {
            Phase::one()
        }
    }

    /// `Some(±1)` when the phase is real.
    pub fn to_sign(self) -> Option<i8> {
        if self.0.is_zero() {
            Some(1)
        } else if self.0 == Ratio::new(1, 2) {
            Some(-1)
        } else {
            None
        }
    }

    pub fn is_one(self) -> bool {
        self.0.is_zero()
    }

    /// Multiplicative order: the reduced denominator of `q`.
    pub fn order(self) -> u64 {
        *self.0.denom() as u64
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }
}

/// Group law of U(1) in additive exponent form: `e^{2πiq}·e^{2πir} = e^{2πi(q+r)}`.
impl std::ops::Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase(self.0 + rhs.0).normalized()
    }
}

impl std::ops::Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase(self.0 - rhs.0).normalized()
    }
}

impl std::ops::Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase(-self.0).normalized()
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_phase(&text).map_err(|e| de::Error::custom(format!("bad phase `{text}`: {e}")))
    }
}

pub fn parse_phase(text: &str) -> Result<Phase, CohomologyError> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim()
                .parse::<i64>()
                .map_err(|_| CohomologyError::BadPhase)?,
            d.trim()
                .parse::<i64>()
                .map_err(|_| CohomologyError::BadPhase)?,
        ),
        None => (
            text.parse::<i64>().map_err(|_| CohomologyError::BadPhase)?,
            1,
        ),
    };
    Phase::new(num, den)
}

/// A finite group given by its multiplication table; elements are `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    id: usize,
}

impl FiniteGroup {
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self, CohomologyError> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|r| r.len() != n) {
            return Err(CohomologyError::NotAGroup("table is not square".into()));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return Err(CohomologyError::NotAGroup("entry out of range".into()));
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| CohomologyError::NotAGroup("no identity".into()))?;
        let mut inv = vec![usize::MAX; n];
        for (g, slot) in inv.iter_mut().enumerate() {
            *slot = (0..n)
                .find(|&h| mul[g][h] == id && mul[h][g] == id)
                .ok_or_else(|| CohomologyError::NotAGroup(format!("{g} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(CohomologyError::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { mul, inv, id })
    }

    /// The Klein four-group with elements ordered `(0,0),(1,0),(0,1),(1,1)`
    /// under componentwise XOR.
    pub fn klein() -> Self {
        let mul = (0..4).map(|g| (0..4).map(|h| g ^ h).collect()).collect();
        Self::from_table(mul).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n)
            .map(|g| (0..n).map(|h| (g + h) % n).collect())
            .collect();
        Self::from_table(mul).unwrap()
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn identity(&self) -> usize {
        self.id
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order()
    }

    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.mul
    }
}

/// Permutation module `⊕_labels U(1)`: `theta[g][a] = a^{(g)}` is a right
/// action (`(a^{(h)})^{(g)} = a^{(gh)}`) by label permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    group: FiniteGroup,
    labels: Vec<String>,
    theta: Vec<Vec<usize>>,
}

impl GModule {
    pub fn new(
        group: FiniteGroup,
        labels: Vec<String>,
        theta: Vec<Vec<usize>>,
    ) -> Result<Self, CohomologyError> {
        let n = group.order();
        let m = labels.len();
        if theta.len() != n || theta.iter().any(|r| r.len() != m) {
            return Err(CohomologyError::NotAnAction("shape mismatch".into()));
        }
        for g in 0..n {
            let mut seen = vec![false; m];
            for a in 0..m {
                let t = theta[g][a];
                if t >= m || seen[t] {
                    return Err(CohomologyError::NotAnAction(format!(
                        "theta[{g}] is not a permutation"
                    )));
                }
                seen[t] = true;
            }
        }
        if (0..m).any(|a| theta[group.identity()][a] != a) {
            return Err(CohomologyError::NotAnAction(
                "identity acts nontrivially".into(),
            ));
        }
        for g in 0..n {
            for h in 0..n {
                for a in 0..m {
                    if theta[g][theta[h][a]] != theta[group.mul(g, h)][a] {
                        return Err(CohomologyError::NotAnAction(format!(
                            "(a^(h))^(g) != a^(gh) at g={g}, h={h}, a={a}"
                        )));
                    }
                }
            }
        }
        Ok(GModule {
            group,
            labels,
            theta,
        })
    }

    /// Module with the trivial label action.
    pub fn trivial(group: FiniteGroup, labels: Vec<String>) -> Self {
        let n = group.order();
        let m = labels.len();
        GModule {
            group,
            labels,
            theta: vec![(0..m).collect(); n],
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    /// `a^{(g)}`.
    pub fn act(&self, g: usize, a: usize) -> usize {
        self.theta[g][a]
    }

    /// `a^{(g⁻¹)}` — the index shift of the left module action.
    pub fn act_inv(&self, g: usize, a: usize) -> usize {
        self.theta[self.group.inverse(g)][a]
    }
}

/// 1-cochain `λ: G → (label → Phase)`, stored as `values[g][a]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cochain1 {
    pub values: Vec<Vec<Phase>>,
}

impl Cochain1 {
    pub fn constant_one(module: &GModule) -> Self {
        Cochain1 {
            values: vec![vec![Phase::one(); module.n_labels()]; module.group().order()],
        }
    }
}

/// 2-cochain `η: G × G → (label → Phase)`, stored as `values[g][h][a]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cochain2 {
    pub values: Vec<Vec<Vec<Phase>>>,
}

impl Cochain2 {
    pub fn constant_one(module: &GModule) -> Self {
        let n = module.group().order();
        Cochain2 {
            values: vec![vec![vec![Phase::one(); module.n_labels()]; n]; n],
        }
    }

    pub fn get(&self, g: usize, h: usize, a: usize) -> Phase {
        self.values[g][h][a]
    }

    /// Pointwise `self · rhs⁻¹`.
    pub fn ratio(&self, rhs: &Cochain2) -> Cochain2 {
        self.zip(rhs, |x, y| x - y)
    }

    /// Pointwise product.
    pub fn mul(&self, rhs: &Cochain2) -> Cochain2 {
        self.zip(rhs, |x, y| x + y)
    }

    fn zip(&self, rhs: &Cochain2, f: impl Fn(Phase, Phase) -> Phase) -> Cochain2 {
        let values = self
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(r1, r2)| {
                r1.iter()
                    .zip(r2)
                    .map(|(c1, c2)| c1.iter().zip(c2).map(|(&x, &y)| f(x, y)).collect())
                    .collect()
            })
            .collect();
        Cochain2 { values }
    }

    fn shape_ok(&self, module: &GModule) -> bool {
        let n = module.group().order();
        let m = module.n_labels();
        self.values.len() == n
            && self
                .values
                .iter()
                .all(|r| r.len() == n && r.iter().all(|c| c.len() == m))
    }

    /// Least common multiplicative order of the values.
    pub fn value_order(&self) -> u64 {
        self.values
            .iter()
            .flatten()
            .flatten()
            .map(|p| p.order())
            .fold(1, num::integer::lcm)
    }
}

/// `η_a(g,h) = ω^{(a^{((gh)⁻¹)})}(g,h)` where `omega[a][g][h]` holds the
/// per-label tables.
pub fn eta_from_omega(
    omega: &[Vec<Vec<Phase>>],
    module: &GModule,
) -> Result<Cochain2, CohomologyError> {
    let n = module.group().order();
    let m = module.n_labels();
    if omega.len() != m
        || omega
            .iter()
            .any(|t| t.len() != n || t.iter().any(|r| r.len() != n))
    {
        return Err(CohomologyError::ShapeMismatch);
    }
    let mut values = vec![vec![vec![Phase::one(); m]; n]; n];
    for g in 0..n {
        for h in 0..n {
            let gh = module.group().mul(g, h);
            for (a, slot) in values[g][h].iter_mut().enumerate().take(m) {
                let b = module.act_inv(gh, a);
                *slot = omega[b][g][h];
            }
        }
    }
    Ok(Cochain2 { values })
}

/// First violated instance of the 2-cocycle condition, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleWitness {
    pub g: usize,
    pub h: usize,
    pub k: usize,
    pub label: usize,
    pub lhs: Phase,
    pub rhs: Phase,
}

/// Checks `η_{a^{(g⁻¹)}}(h,k) + η_a(g,hk) = η_a(gh,k) + η_a(g,h)` for all
/// `|G|³ · |labels|` instances exactly.
pub fn cocycle2_check(eta: &Cochain2, module: &GModule) -> Result<(), Box<CocycleWitness>> {
    assert!(eta.shape_ok(module), "cochain shape mismatch");
    let n = module.group().order();
    let grp = module.group();
    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                let hk = grp.mul(h, k);
                let gh = grp.mul(g, h);
                for a in 0..module.n_labels() {
                    let lhs = eta.get(h, k, module.act_inv(g, a)) + eta.get(g, hk, a);
                    let rhs = eta.get(gh, k, a) + eta.get(g, h, a);
                    if lhs != rhs {
                        return Err(Box::new(CocycleWitness {
                            g,
                            h,
                            k,
                            label: a,
                            lhs,
                            rhs,
                        }));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Standard 2-coboundary `dλ_a(g,h) = λ_{a^{(g⁻¹)}}(h) − λ_a(gh) + λ_a(g)`.
pub fn standard_coboundary(lambda: &Cochain1, module: &GModule) -> Cochain2 {
    let n = module.group().order();
    let m = module.n_labels();
    let mut values = vec![vec![vec![Phase::one(); m]; n]; n];
    for g in 0..n {
        for h in 0..n {
            let gh = module.group().mul(g, h);
            for (a, slot) in values[g][h].iter_mut().enumerate().take(m) {
                *slot = lambda.values[h][module.act_inv(g, a)] - lambda.values[gh][a]
                    + lambda.values[g][a];
            }
        }
    }
    Cochain2 { values }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassComparison {
    /// Cohomologous, with a witness rephasing.
    Yes(Box<Cochain1>),
    No,
    Unknown(String),
}

impl ClassComparison {
    pub fn is_yes(&self) -> bool {
        matches!(self, ClassComparison::Yes(_))
    }
}

/// Are `η1` and `η2` cohomologous? Values must lie in a small cyclic group
/// `Z_n`; searches all `λ: labels × G → Z_n` exhaustively when `n^(|labels|·|G|)`
/// stays within `search_bound`, otherwise solves the linear system over
/// `Z_n` via Smith normal form.
pub fn cohomologous(
    eta1: &Cochain2,
    eta2: &Cochain2,
    module: &GModule,
    search_bound: u64,
) -> ClassComparison {
    if !eta1.shape_ok(module) || !eta2.shape_ok(module) {
        return ClassComparison::Unknown("cochain shape mismatch".into());
    }
    let xi = eta1.ratio(eta2);
    let n = xi.value_order().max(2);
    if n > 64 {
        return ClassComparison::Unknown(format!("value group Z_{n} too large"));
    }
    let grp = module.group().order();
    let m = module.n_labels();
    let cells = m * grp;

    let mut count: u64 = 1;
    let mut exhaustive = true;
    for _ in 0..cells {
        count = count.saturating_mul(n);
        if count > search_bound {
            exhaustive = false;
            break;
        }
    }

    if exhaustive {
        let mut digits = vec![0u64; cells];
        loop {
            let lambda = Cochain1 {
                values: (0..grp)
                    .map(|g| {
                        (0..m)
                            .map(|a| Phase::new(digits[g * m + a] as i64, n as i64).unwrap())
                            .collect()
                    })
                    .collect(),
            };
            if standard_coboundary(&lambda, module) == xi {
                return ClassComparison::Yes(Box::new(lambda));
            }
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return ClassComparison::No;
                }
                digits[i] += 1;
                if digits[i] < n {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    } else {
        solve_coboundary_mod(&xi, module, n)
    }
}

/// Linear-algebra route: solve `dλ = ξ` over `Z_n`.
fn solve_coboundary_mod(xi: &Cochain2, module: &GModule, n: u64) -> ClassComparison {
    let grp = module.group();
    let ng = grp.order();
    let m = module.n_labels();
    let unknowns = ng * m;
    let equations = ng * ng * m;

    let idx = |g: usize, a: usize| g * m + a;
    let mut a_mat = vec![vec![BigInt::zero(); unknowns]; equations];
    let mut b_vec = vec![BigInt::zero(); equations];
    let n_big = BigInt::from(n);
    let mut row = 0;
    for g in 0..ng {
        for h in 0..ng {
            let gh = grp.mul(g, h);
            for a in 0..m {
                a_mat[row][idx(h, module.act_inv(g, a))] += 1;
                a_mat[row][idx(gh, a)] -= 1;
                a_mat[row][idx(g, a)] += 1;
                let p = xi.get(g, h, a);
                let scaled = p.numer() * (n as i64 / p.denom());
                b_vec[row] = BigInt::from(scaled.rem_euclid(n as i64));
                row += 1;
            }
        }
    }

    match snf::solve_mod(&a_mat, &b_vec, &n_big) {
        Some(x) => {
            let lambda = Cochain1 {
                values: (0..ng)
                    .map(|g| {
                        (0..m)
                            .map(|a| {
                                let v = x[idx(g, a)].mod_floor(&n_big);
                                let v: i64 = v.try_into().expect("small modulus");
                                Phase::new(v, n as i64).unwrap()
                            })
                            .collect()
                    })
                    .collect(),
            };
            ClassComparison::Yes(Box::new(lambda))
        }
        None => ClassComparison::No,
    }
}

/// Result of the `H²(G, Z_n)` computation for the trivial action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H2Result {
    /// Cyclic decomposition: invariant factors > 1.
    pub invariant_factors: Vec<u64>,
    pub order: u128,
    /// Independent `|Z²|/|B²|` count when the enumeration is small enough.
    pub brute_force_order: Option<u128>,
}

/// `H²(G, Z_n)` with trivial action, via Smith normal form of the
/// bar-resolution differentials, cross-checked by brute-force cochain
/// enumeration when at most 2^20 cochains exist.
pub fn h2_trivial_action(group: &FiniteGroup, n: u64) -> Result<H2Result, CohomologyError> {
    let ng = group.order();
    if ng > 16 {
        return Err(CohomologyError::SizeBound(format!("|G| = {ng} > 16")));
    }
    if !(2..=12).contains(&n) {
        return Err(CohomologyError::SizeBound(format!("coefficient order {n}")));
    }

    let m1 = ng;
    let m2 = ng * ng;
    let m3 = ng * ng * ng;
    let i2 = |g: usize, h: usize| g * ng + h;
    let i3 = |g: usize, h: usize, k: usize| (g * ng + h) * ng + k;

    // d¹: C¹ → C², (dλ)(g,h) = λ(h) − λ(gh) + λ(g).
    let mut d2 = vec![vec![BigInt::zero(); m1]; m2];
    for g in 0..ng {
        for h in 0..ng {
            let r = i2(g, h);
            d2[r][h] += 1;
            d2[r][group.mul(g, h)] -= 1;
            d2[r][g] += 1;
        }
    }
    // d²: C² → C³, (dη)(g,h,k) = η(h,k) − η(gh,k) + η(g,hk) − η(g,h).
    let mut d3 = vec![vec![BigInt::zero(); m2]; m3];
    for g in 0..ng {
        for h in 0..ng {
            for k in 0..ng {
                let r = i3(g, h, k);
                d3[r][i2(h, k)] += 1;
                d3[r][i2(group.mul(g, h), k)] -= 1;
                d3[r][i2(g, group.mul(h, k))] += 1;
                d3[r][i2(g, h)] -= 1;
            }
        }
    }

    let n_big = BigInt::from(n);

    // Kernel lattice K = {x : d3·x ≡ 0 (mod n)} via SNF of d3:
    // with u·d3·v = D, the constraint on y = v⁻¹x is D·y ≡ 0, so
    // y_i ∈ (n / gcd(D_ii, n))·Z, and K has basis v·diag(scale).
    let snf3 = snf::smith_normal_form(&d3);
    let mut scale = vec![BigInt::one(); m2];
    for (i, s) in scale.iter_mut().enumerate() {
        if i < m3.min(m2) && !snf3.d[i][i].is_zero() {
            *s = &n_big / snf3.d[i][i].gcd(&n_big);
        }
    }
    let mut k_basis = vec![vec![BigInt::zero(); m2]; m2];
    for r in 0..m2 {
        for c in 0..m2 {
            k_basis[r][c] = &snf3.v[r][c] * &scale[c];
        }
    }

    // Sublattice L = d2·Z^{m1} + n·Z^{m2} ⊆ K, in K coordinates.
    let mut l_gens = vec![vec![BigInt::zero(); m1 + m2]; m2];
    for (r, row) in l_gens.iter_mut().enumerate() {
        row[..m1].clone_from_slice(&d2[r][..m1]);
        row[m1 + r] = n_big.clone();
    }
    let coords =
        snf::solve_exact(&k_basis, &l_gens).expect("image lattice must lie in the kernel lattice");

    // Invariant factors of K / L.
    let snf_q = snf::smith_normal_form(&coords);
    let mut invariant_factors = Vec::new();
    let mut order: u128 = 1;
    for i in 0..m2.min(m1 + m2) {
        let d = &snf_q.d[i][i];
        if d.is_zero() {
            return Err(CohomologyError::SizeBound(
                "unexpected infinite factor".into(),
            ));
        }
        let f: u128 = d.magnitude().try_into().unwrap();
        if f > 1 {
            order *= f;
            invariant_factors.push(f as u64);
        }
    }
    invariant_factors.sort_unstable();

    let mut cochains: u128 = 1;
    let mut small = true;
    for _ in 0..m2 {
        cochains = cochains.saturating_mul(n as u128);
        if cochains > 1 << 20 {
            small = false;
            break;
        }
    }
    let brute_force_order = if small {
        Some(brute_force_h2_order(group, n))
    } else {
        None
    };

    Ok(H2Result {
        invariant_factors,
        order,
        brute_force_order,
    })
}

/// |Z²|/|B²| by direct enumeration of all Z_n-valued cochains.
fn brute_force_h2_order(group: &FiniteGroup, n: u64) -> u128 {
    let ng = group.order();
    let m2 = ng * ng;
    let i2 = |g: usize, h: usize| g * ng + h;

    let is_cocycle = |c: &[u64]| -> bool {
        for g in 0..ng {
            for h in 0..ng {
                for k in 0..ng {
                    let lhs = c[i2(h, k)] + c[i2(g, group.mul(h, k))];
                    let rhs = c[i2(group.mul(g, h), k)] + c[i2(g, h)];
                    if lhs % n != rhs % n {
                        return false;
                    }
                }
            }
        }
        true
    };

    let mut z2: u128 = 0;
    let mut c = vec![0u64; m2];
    'outer: loop {
        if is_cocycle(&c) {
            z2 += 1;
        }
        let mut i = 0;
        loop {
            if i == m2 {
                break 'outer;
            }
            c[i] += 1;
            if c[i] < n {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }

    let mut seen = std::collections::BTreeSet::new();
    let mut lam = vec![0u64; ng];
    'outer2: loop {
        let mut d = vec![0u64; m2];
        for g in 0..ng {
            for h in 0..ng {
                d[i2(g, h)] = (lam[h] + lam[g] + n - lam[group.mul(g, h)]) % n;
            }
        }
        seen.insert(d);
        let mut i = 0;
        loop {
            if i == ng {
                break 'outer2;
            }
            lam[i] += 1;
            if lam[i] < n {
                break;
            }
            lam[i] = 0;
            i += 1;
        }
    }
    z2 / seen.len() as u128
}

/// On-disk cochain bundle: group table, labels, action, and the 2-cochain
/// values indexed `[g][h][label]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CochainFile {
    pub schema: String,
    pub group: Vec<Vec<usize>>,
    pub labels: Vec<String>,
    /// `action[g][a] = a^{(g)}`.
    pub action: Vec<Vec<usize>>,
    pub values: Vec<Vec<Vec<Phase>>>,
}

pub const COCHAIN_SCHEMA: &str = "setlab-cochain/1";

impl CochainFile {
    pub fn new(module: &GModule, eta: &Cochain2) -> Self {
        CochainFile {
            schema: COCHAIN_SCHEMA.into(),
            group: module.group().table().clone(),
            labels: module.labels().to_vec(),
            action: module.theta.clone(),
            values: eta.values.clone(),
        }
    }

    pub fn resolve(&self) -> Result<(GModule, Cochain2), CohomologyError> {
        if self.schema != COCHAIN_SCHEMA {
            return Err(CohomologyError::ShapeMismatch);
        }
        let group = FiniteGroup::from_table(self.group.clone())?;
        let module = GModule::new(group, self.labels.clone(), self.action.clone())?;
        let eta = Cochain2 {
            values: self.values.clone(),
        };
        if !eta.shape_ok(&module) {
            return Err(CohomologyError::ShapeMismatch);
        }
        Ok((module, eta))
    }
}

pub mod snf {
    //! Integer Smith normal form over `BigInt`, with exact solvers built on
    //! it. Small matrices only; clarity over speed.

    use num::{BigInt, Integer, One, Signed, Zero};

    pub struct Snf {
        /// Row transform; `u · m · v = d`.
        pub u: Vec<Vec<BigInt>>,
        /// Column transform.
        pub v: Vec<Vec<BigInt>>,
        /// Diagonal with the divisibility chain `d₁ | d₂ | …`.
        pub d: Vec<Vec<BigInt>>,
    }

    fn identity(n: usize) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        m
    }

    pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let (r, inner, c) = (a.len(), b.len(), b[0].len());
        let mut out = vec![vec![BigInt::zero(); c]; r];
        for i in 0..r {
            for k in 0..inner {
                if a[i][k].is_zero() {
                    continue;
                }
                for j in 0..c {
                    if !b[k][j].is_zero() {
                        out[i][j] += &a[i][k] * &b[k][j];
                    }
                }
            }
        }
        out
    }

    /// `u·m·v = d` with unimodular `u`, `v`.
    pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Snf {
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut d: Vec<Vec<BigInt>> = m.to_vec();
        let mut u = identity(rows);
        let mut v = identity(cols);

        for k in 0..rows.min(cols) {
            loop {
                let mut pivot: Option<(usize, usize)> = None;
                for i in k..rows {
                    for j in k..cols {
                        if !d[i][j].is_zero()
                            && pivot
                                .map(|(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                                .unwrap_or(true)
                        {
                            pivot = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = pivot else {
                    return Snf { u, v, d };
                };
                d.swap(k, pi);
                u.swap(k, pi);
                if pj != k {
                    for row in d.iter_mut() {
                        row.swap(k, pj);
                    }
                    for row in v.iter_mut() {
                        row.swap(k, pj);
                    }
                }
                if d[k][k].is_negative() {
                    for x in d[k].iter_mut() {
                        *x = -x.clone();
                    }
                    for x in u[k].iter_mut() {
                        *x = -x.clone();
                    }
                }

                let mut clean = true;
                for i in k + 1..rows {
                    if !d[i][k].is_zero() {
                        let q = d[i][k].div_floor(&d[k][k]);
                        for j in 0..cols {
                            let delta = &q * &d[k][j];
                            d[i][j] -= delta;
                        }
                        for j in 0..rows {
                            let delta = &q * &u[k][j];
                            u[i][j] -= delta;
                        }
                        if !d[i][k].is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in k + 1..cols {
                    if !d[k][j].is_zero() {
                        let q = d[k][j].div_floor(&d[k][k]);
                        for i in 0..rows {
                            let delta = &q * &d[i][k];
                            d[i][j] -= delta;
                        }
                        for i in 0..cols {
                            let delta_v = &q * &v[i][k];
                            v[i][j] -= delta_v;
                        }
                        if !d[k][j].is_zero() {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    continue;
                }

                // Divisibility fix: fold in a row holding a non-divisible
                // remainder and restart the reduction at this pivot.
                let mut fixed = true;
                'scan: for i in k + 1..rows {
                    for j in k + 1..cols {
                        if !(&d[i][j] % &d[k][k]).is_zero() {
                            for col in 0..cols {
                                let add = d[i][col].clone();
                                d[k][col] += add;
                            }
                            for col in 0..rows {
                                let add = u[i][col].clone();
                                u[k][col] += add;
                            }
                            fixed = false;
                            break 'scan;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
        }
        Snf { u, v, d }
    }

    /// Solves `basis · x = targets` exactly over the integers, column by
    /// column; `None` when a target is outside the spanned lattice.
    pub fn solve_exact(basis: &[Vec<BigInt>], targets: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
        let snf = smith_normal_form(basis);
        let n = basis.len();
        let cols = targets[0].len();
        // basis = u⁻¹ d v⁻¹, so x = v · d⁻¹ · u · target.
        let ut = mat_mul(&snf.u, targets);
        let mut scaled = vec![vec![BigInt::zero(); cols]; n];
        for i in 0..n {
            let di = &snf.d[i][i];
            for j in 0..cols {
                if di.is_zero() {
                    if !ut[i][j].is_zero() {
                        return None;
                    }
                } else {
                    let (q, r) = ut[i][j].div_rem(di);
                    if !r.is_zero() {
                        return None;
                    }
                    scaled[i][j] = q;
                }
            }
        }
        Some(mat_mul(&snf.v, &scaled))
    }

    /// Solves `a · x ≡ b (mod n)`; returns one solution if any.
    pub fn solve_mod(a: &[Vec<BigInt>], b: &[BigInt], n: &BigInt) -> Option<Vec<BigInt>> {
        let snf = smith_normal_form(a);
        let rows = a.len();
        let cols = a[0].len();
        let bt: Vec<Vec<BigInt>> = b.iter().map(|x| vec![x.clone()]).collect();
        let ub = mat_mul(&snf.u, &bt);
        let mut y = vec![BigInt::zero(); cols];
        for (i, ub_row) in ub.iter().enumerate() {
            let rhs = ub_row[0].mod_floor(n);
            let di = if i < rows.min(cols) {
                snf.d[i][i].clone()
            } else {
                BigInt::zero()
            };
            if di.is_zero() || i >= cols {
                if !rhs.is_zero() {
                    return None;
                }
                continue;
            }
            // d_i · y_i ≡ rhs (mod n): solvable iff gcd(d_i, n) | rhs.
            let g = di.gcd(n);
            let (q, r) = rhs.div_rem(&g);
            if !r.is_zero() {
                return None;
            }
            let n_red = n / &g;
            let d_red = (&di / &g).mod_floor(&n_red);
            let inv = mod_inverse(&d_red, &n_red)?;
            y[i] = (q * inv).mod_floor(&n_red);
        }
        let yt: Vec<Vec<BigInt>> = y.iter().map(|x| vec![x.clone()]).collect();
        let x = mat_mul(&snf.v, &yt);
        Some(x.into_iter().map(|r| r[0].mod_floor(n)).collect())
    }

    fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
        if n.is_one() {
            return Some(BigInt::zero());
        }
        let e = a.extended_gcd(n);
        if !e.gcd.is_one() {
            return None;
        }
        Some(e.x.mod_floor(n))
    }

    /// Smith normal form of a matrix regarded over `Z_n`: each nonzero
    /// diagonal entry is normalized to `gcd(d, n)` (the canonical generator
    /// of its ideal in Z_n) with the row transform rescaled by a unit, so
    /// `u·m·v ≡ d (mod n)` with `u`, `v` invertible mod n.
    pub fn smith_normal_form_mod(m: &[Vec<BigInt>], n: &BigInt) -> Snf {
        let mut snf = smith_normal_form(m);
        let rows = snf.d.len();
        let cols = if rows == 0 { 0 } else { snf.d[0].len() };
        for k in 0..rows.min(cols) {
            let dk = snf.d[k][k].mod_floor(n);
            if dk.is_zero() {
                snf.d[k][k] = BigInt::zero();
                continue;
            }
            let g = dk.gcd(n);
            if g != dk {
                let w = find_unit_scale(&dk, &g, n).expect("associates differ by a unit in Z_n");
                for j in 0..cols {
                    snf.d[k][j] = (&snf.d[k][j] * &w).mod_floor(n);
                }
                for j in 0..snf.u[k].len() {
                    snf.u[k][j] = (&snf.u[k][j] * &w).mod_floor(n);
                }
            }
        }
        for r in &mut snf.d {
            for x in r.iter_mut() {
                *x = x.mod_floor(n);
            }
        }
        snf
    }

    fn find_unit_scale(d: &BigInt, g: &BigInt, n: &BigInt) -> Option<BigInt> {
        let mut w = BigInt::one();
        while &w < n {
            if w.gcd(n).is_one() && (&w * d).mod_floor(n) == *g {
                return Some(w);
            }
            w += 1;
        }
        None
    }
}
