//! Dense state-vector oracle: brute-force ground truth for every
//! vacuum-level identity the symbolic machinery asserts.
//!
//! States are dense complex amplitude vectors over at most 24 qubits,
//! ordered by `SiteId` (basis index bit `i` = site `i`). The reference
//! vacuum is the stabilizer ground state on the edge qubits tensored with
//! `|+⟩` on every vertex qubit; the model vacuum applies the full CCZ
//! entangler on top. All reductions run in a fixed order so reports are
//! bit-stable across runs.

use num::complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::algebra::{PhasePoly, XdOperator};
use crate::lattice::{HoneycombLattice, Sublattice};
use crate::model::{GroupElem, SetModel};

pub const MAX_QUBITS: usize = 24;
pub const TOL: f64 = 1e-12;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum OracleError {
    #[error("{qubits} qubits exceed the guard ({max})")]
    TooManyQubits { qubits: usize, max: usize },
    #[error("operator acts on site {site} outside a {qubits}-qubit register")]
    SizeMismatch { site: usize, qubits: usize },
    #[error("projection annihilated the state (norm {norm:.3e})")]
    ZeroNormProjection { norm: f64 },
}

/// Dense amplitude vector of `2^n` complex entries.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state.
    pub fn zero_state(n: usize) -> Result<Self, OracleError> {
        if n > MAX_QUBITS {
            return Err(OracleError::TooManyQubits {
                qubits: n,
                max: MAX_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self, OracleError> {
        if n > MAX_QUBITS {
            return Err(OracleError::TooManyQubits {
                qubits: n,
                max: MAX_QUBITS,
            });
        }
        assert_eq!(amps.len(), 1 << n);
        Ok(StateVector { n, amps })
    }

    /// A seeded random state, normalized.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Result<Self, OracleError> {
        if n > MAX_QUBITS {
            return Err(OracleError::TooManyQubits {
                qubits: n,
                max: MAX_QUBITS,
            });
        }
        let mut amps = Vec::with_capacity(1 << n);
        for _ in 0..(1usize << n) {
            amps.push(Complex64::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ));
        }
        let mut s = StateVector { n, amps };
        s.normalize();
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Bit masks compiled from an operator for dense application.
struct CompiledOp {
    xmask: usize,
    /// One mask per monomial; the constant monomial is mask 0 (always on).
    terms: Vec<usize>,
}

fn compile_op(op: &XdOperator, n: usize) -> Result<CompiledOp, OracleError> {
    let check = |site: usize| -> Result<(), OracleError> {
        if site >= n {
            Err(OracleError::SizeMismatch { site, qubits: n })
        } else {
            Ok(())
        }
    };
    let mut xmask = 0usize;
    for v in op.xsupport() {
        check(v.index())?;
        xmask |= 1 << v.index();
    }
    let mut terms = Vec::new();
    for m in op.poly().monomials() {
        let mut mask = 0usize;
        for v in m.vars() {
            check(v.index())?;
            mask |= 1 << v.index();
        }
        terms.push(mask);
    }
    Ok(CompiledOp { xmask, terms })
}

/// Applies `U|z⟩ = (-1)^{p(z)}|z⊕x⟩` densely. Norm-preserving.
pub fn apply_xd(op: &XdOperator, state: &StateVector) -> Result<StateVector, OracleError> {
    let compiled = compile_op(op, state.n)?;
    let mut out = vec![Complex64::new(0.0, 0.0); state.amps.len()];
    for (z, &amp) in state.amps.iter().enumerate() {
        let mut parity = false;
        for &mask in &compiled.terms {
            parity ^= (z & mask) == mask;
        }
        let target = z ^ compiled.xmask;
        out[target] = if parity { -amp } else { amp };
    }
    StateVector::from_amplitudes(state.n, out)
}

/// `⟨s|A|s⟩`.
pub fn expectation(op: &XdOperator, state: &StateVector) -> Result<Complex64, OracleError> {
    let applied = apply_xd(op, state)?;
    Ok(state.inner(&applied))
}

/// Reference and entangled vacuum for a lattice, with the stabilizers used.
#[derive(Clone, Debug)]
pub struct GroundStateBundle {
    /// `(toric ground state on edges) ⊗ |+…+⟩` on vertices.
    pub reference: StateVector,
    /// The reference with the full CCZ entangler applied.
    pub entangled: StateVector,
    pub stabilizers: Vec<XdOperator>,
}

/// Builds the vacuum: start from `|0…0⟩_E ⊗ |+…+⟩_V`, project with
/// `(1+B_p)/2` for every plaquette (renormalizing each step), verify all
/// stabilizer expectations are 1, then apply the entangler.
pub fn ground_state(model: &SetModel) -> Result<GroundStateBundle, OracleError> {
    let lat = model.lattice();
    let n = lat.n_sites();
    if n > MAX_QUBITS {
        return Err(OracleError::TooManyQubits {
            qubits: n,
            max: MAX_QUBITS,
        });
    }
    let n_edges = lat.n_edges();

    // |0…0⟩ on edges ⊗ |+…+⟩ on vertices: uniform over vertex bits.
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    let n_vertices = lat.n_vertices();
    let scale = 1.0 / ((1u64 << n_vertices) as f64).sqrt();
    for v_bits in 0..(1usize << n_vertices) {
        amps[v_bits << n_edges] = Complex64::new(scale, 0.0);
    }
    let mut reference = StateVector::from_amplitudes(n, amps)?;

    for p in lat.plaquette_ids() {
        reference = project_plus_one(&model.plaquette_op(p), &reference)?;
    }

    let mut stabilizers = Vec::new();
    for v in lat.vertex_ids() {
        stabilizers.push(model.vertex_op(v));
    }
    for p in lat.plaquette_ids() {
        stabilizers.push(model.plaquette_op(p));
    }
    for s in &stabilizers {
        let e = expectation(s, &reference)?;
        debug_assert!(
            (e.re - 1.0).abs() < 1e-9 && e.im.abs() < 1e-9,
            "stabilizer expectation {e} on the reference state"
        );
    }

    let entangled = apply_xd(model.full_entangler().operator(), &reference)?;
    Ok(GroundStateBundle {
        reference,
        entangled,
        stabilizers,
    })
}

/// `(1 + S)/2` projection followed by renormalization.
pub fn project_plus_one(op: &XdOperator, state: &StateVector) -> Result<StateVector, OracleError> {
    let applied = apply_xd(op, state)?;
    let mut amps = Vec::with_capacity(state.amps.len());
    for (a, b) in state.amps.iter().zip(&applied.amps) {
        amps.push((a + b) * 0.5);
    }
    let mut out = StateVector::from_amplitudes(state.n, amps)?;
    let norm = out.norm();
    if norm < 1e-9 {
        return Err(OracleError::ZeroNormProjection { norm });
    }
    out.normalize();
    Ok(out)
}

/// Max over the sampled local observables of `|φ(β_g(A)) − φ(A)|` on the
/// entangled vacuum.
pub fn symmetry_invariance_check(
    model: &SetModel,
    bundle: &GroundStateBundle,
    g: GroupElem,
    observables: &[XdOperator],
) -> Result<f64, OracleError> {
    let mut worst: f64 = 0.0;
    for a in observables {
        let lhs = expectation(&model.beta_conjugate(g, a), &bundle.entangled)?;
        let rhs = expectation(a, &bundle.entangled)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// `‖π(u(L))Ω − π(W₂)Ω‖` for the restricted flip of one sublattice over a
/// loop-bounded region: the half-space action excites only the boundary.
pub fn boundary_excitation_check(
    model: &SetModel,
    bundle: &GroundStateBundle,
    part: &crate::lattice::RegionPartition,
    flipped: Sublattice,
) -> Result<f64, OracleError> {
    let g = match flipped {
        Sublattice::A => GroupElem::FLIP_A,
        Sublattice::B => GroupElem::FLIP_B,
    };
    let u = model.u_restriction(g, part).operator;
    let w2 = model.boundary_w_sub(flipped, part).w2;
    let lhs = apply_xd(&u, &bundle.entangled)?;
    let rhs = apply_xd(&w2, &bundle.entangled)?;
    Ok(lhs.distance(&rhs))
}

/// Dimension of the joint +1 eigenspace of all `A_v`, `B_p` on the edge
/// system, by iterated projection over every edge basis state (trace of the
/// product projector). Independent of the F2-rank route in the model.
pub fn stabilizer_uniqueness_check(model: &SetModel) -> Result<u64, OracleError> {
    let lat = model.lattice();
    let n = lat.n_edges();
    if n > MAX_QUBITS {
        return Err(OracleError::TooManyQubits {
            qubits: n,
            max: MAX_QUBITS,
        });
    }
    // Stabilizers act on edge sites only, so work in the edge register.
    let mut projectors: Vec<XdOperator> = Vec::new();
    for v in lat.vertex_ids() {
        projectors.push(model.vertex_op(v));
    }
    for p in lat.plaquette_ids() {
        projectors.push(model.plaquette_op(p));
    }
    stabilizer_projector_trace(n, &projectors)
}

/// `tr ∏_s (1+s)/2` over an `n`-qubit register by applying the projector to
/// each basis state.
pub fn stabilizer_projector_trace(
    n: usize,
    stabilizers: &[XdOperator],
) -> Result<u64, OracleError> {
    if n > MAX_QUBITS {
        return Err(OracleError::TooManyQubits {
            qubits: n,
            max: MAX_QUBITS,
        });
    }
    let compiled: Vec<CompiledOp> = stabilizers
        .iter()
        .map(|s| compile_op(s, n))
        .collect::<Result<_, _>>()?;
    let dim = 1usize << n;
    let mut trace = 0.0f64;
    let mut buf_a = vec![Complex64::new(0.0, 0.0); dim];
    let mut buf_b = vec![Complex64::new(0.0, 0.0); dim];
    for basis in 0..dim {
        for a in buf_a.iter_mut() {
            *a = Complex64::new(0.0, 0.0);
        }
        buf_a[basis] = Complex64::new(1.0, 0.0);
        for op in &compiled {
            for b in buf_b.iter_mut() {
                *b = Complex64::new(0.0, 0.0);
            }
            for (z, &amp) in buf_a.iter().enumerate() {
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let mut parity = false;
                for &mask in &op.terms {
                    parity ^= (z & mask) == mask;
                }
                let target = z ^ op.xmask;
                buf_b[target] += if parity { -amp } else { amp };
            }
            for (a, b) in buf_a.iter_mut().zip(&buf_b) {
                *a = (*a + b) * 0.5;
            }
        }
        trace += buf_a[basis].re;
    }
    Ok(trace.round() as u64)
}

/// Samples a local observable: a random operator supported within graph
/// distance 1 of a random vertex.
pub fn random_local_observable<R: Rng>(lat: &HoneycombLattice, rng: &mut R) -> XdOperator {
    use crate::algebra::{Monomial, SiteId};
    use std::collections::BTreeSet;

    let seed = crate::lattice::VertexId(rng.gen_range(0..lat.n_vertices() as u32));
    let sites: Vec<SiteId> = lat
        .sites_within(&BTreeSet::from([seed]), 1)
        .into_iter()
        .collect();
    let mut xsupport = BTreeSet::new();
    for &s in &sites {
        if rng.gen_bool(0.4) {
            xsupport.insert(s);
        }
    }
    let mut poly = PhasePoly::zero();
    for _ in 0..rng.gen_range(0..4) {
        let deg = rng.gen_range(0..=2usize);
        let mut vars = Vec::new();
        for _ in 0..deg {
            vars.push(sites[rng.gen_range(0..sites.len())]);
        }
        poly = poly.add(&PhasePoly::from_monomials([Monomial::new(vars)]));
    }
    XdOperator::new(xsupport, poly)
}

/// Binary state dump: magic, version, qubit count, endianness tag, then
/// `2^n` little-endian `(re, im)` f64 pairs.
pub fn dump_state(state: &StateVector, writer: &mut impl std::io::Write) -> std::io::Result<()> {
    writer.write_all(b"SLSV")?;
    writer.write_all(&1u16.to_le_bytes())?;
    writer.write_all(&(state.n as u16).to_le_bytes())?;
    writer.write_all(&0x01u8.to_le_bytes())?; // endianness tag: little
    for a in &state.amps {
        writer.write_all(&a.re.to_le_bytes())?;
        writer.write_all(&a.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn load_state(reader: &mut impl std::io::Read) -> std::io::Result<StateVector> {
    use std::io::{Error, ErrorKind};
    let mut magic = [0u8; 4];
    reader.read_exact(&mut magic)?;
    if &magic != b"SLSV" {
        return Err(Error::new(ErrorKind::InvalidData, "bad magic"));
    }
    let mut buf2 = [0u8; 2];
    reader.read_exact(&mut buf2)?;
    if u16::from_le_bytes(buf2) != 1 {
        return Err(Error::new(ErrorKind::InvalidData, "bad version"));
    }
    reader.read_exact(&mut buf2)?;
    let n = u16::from_le_bytes(buf2) as usize;
    let mut tag = [0u8; 1];
    reader.read_exact(&mut tag)?;
    if tag[0] != 0x01 {
        return Err(Error::new(ErrorKind::InvalidData, "bad endianness tag"));
    }
    let mut amps = Vec::with_capacity(1 << n);
    let mut buf8 = [0u8; 8];
    for _ in 0..(1usize << n) {
        reader.read_exact(&mut buf8)?;
        let re = f64::from_le_bytes(buf8);
        reader.read_exact(&mut buf8)?;
        let im = f64::from_le_bytes(buf8);
        amps.push(Complex64::new(re, im));
    }
    StateVector::from_amplitudes(n, amps)
        .map_err(|e| Error::new(ErrorKind::InvalidData, e.to_string()))
}
