//! Circle-valued cohomology of finite groups with trivial coefficients.
//!
//! Cochains take values in ℚ/ℤ ([`Phase`]). Linear algebra runs on the
//! normalized bar complex: an `n`-cochain is determined by its values on
//! tuples with no identity entry, and the differential is an integer
//! matrix between those coordinates.

mod extension;
pub mod snf;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use smallvec::SmallVec;

use crate::error::{input, Error, Result};
use crate::groups::{enumerate_subgroups, Group, GroupTable, Surjection};
use crate::phase::Phase;

pub use extension::{find_trivializing_extension, twisted_product_group, TrivializingExtension};
use snf::{smith_normal_form, IntMatrix, SmithForm, Track};

pub type Tuple = SmallVec<[usize; 4]>;

/// Largest group order accepted by [`cohomology_group`].
pub const MAX_COHOMOLOGY_ORDER: usize = 8;
/// Largest group order accepted by the coboundary solver.
pub const MAX_SOLVER_ORDER: usize = 16;

#[derive(Clone, Debug)]
pub struct Cochain {
    group: Group,
    degree: usize,
    values: Vec<Phase>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Cochain) -> bool {
        self.degree == other.degree
            && self.group.product_table() == other.group.product_table()
            && self.values == other.values
    }
}

impl Cochain {
    pub fn zero(group: Group, degree: usize) -> Cochain {
        let len = group.order().pow(degree as u32);
        Cochain { group, degree, values: vec![Phase::ZERO; len] }
    }

    /// A cochain from values listed in tuple order (first argument most significant).
    /// Normalization is not enforced here; see [`Cochain::is_normalized`].
    pub fn from_values(group: Group, degree: usize, values: Vec<Phase>) -> Result<Cochain> {
        let len = group.order().pow(degree as u32);
        if values.len() != len {
            return input(format!("degree-{degree} cochain on order {} needs {len} values", group.order()));
        }
        Ok(Cochain { group, degree, values })
    }

    pub fn from_fn(group: Group, degree: usize, mut f: impl FnMut(&[usize]) -> Phase) -> Cochain {
        let n = group.order();
        let values = (0..n.pow(degree as u32)).map(|i| f(&decode(i, n, degree))).collect();
        Cochain { group, degree, values }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    pub fn get(&self, args: &[usize]) -> Phase {
        debug_assert_eq!(args.len(), self.degree);
        self.values[encode(args, self.group.order())]
    }

    pub fn set(&mut self, args: &[usize], p: Phase) {
        let i = encode(args, self.group.order());
        self.values[i] = p;
    }

    pub fn tuples(&self) -> impl Iterator<Item = Tuple> + '_ {
        let n = self.group.order();
        (0..self.values.len()).map(move |i| decode(i, n, self.degree))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|p| p.is_zero())
    }

    pub fn is_normalized(&self) -> bool {
        self.tuples().zip(&self.values).all(|(t, v)| v.is_zero() || !t.contains(&0))
    }

    /// First tuple with an identity entry and a nonzero value.
    pub fn normalization_violation(&self) -> Option<Tuple> {
        self.tuples().zip(&self.values).find(|(t, v)| !v.is_zero() && t.contains(&0)).map(|(t, _)| t)
    }

    pub fn scale(&self, k: i64) -> Cochain {
        self.map(|p| p.scale(k))
    }

    pub fn negated(&self) -> Cochain {
        self.map(|p| -p)
    }

    fn map(&self, f: impl Fn(Phase) -> Phase) -> Cochain {
        Cochain { group: self.group.clone(), degree: self.degree, values: self.values.iter().map(|&p| f(p)).collect() }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect();
        Ok(Cochain { group: self.group.clone(), degree: self.degree, values })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.negated())
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if self.group.product_table() != other.group.product_table() {
            return input(format!(
                "cochains live on different groups ({} vs {})",
                self.group.name(),
                other.group.name()
            ));
        }
        if self.degree != other.degree {
            return input(format!("degree mismatch: {} vs {}", self.degree, other.degree));
        }
        Ok(())
    }

    /// Tuples where the two cochains differ.
    pub fn pointwise_differences(&self, other: &Cochain) -> Vec<Tuple> {
        if self.degree != other.degree || self.values.len() != other.values.len() {
            return vec![Tuple::new()];
        }
        self.tuples().zip(self.values.iter().zip(&other.values)).filter(|(_, (a, b))| a != b).map(|(t, _)| t).collect()
    }
}

pub fn encode(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

pub fn decode(mut idx: usize, n: usize, degree: usize) -> Tuple {
    let mut t: Tuple = SmallVec::from_elem(0, degree);
    for slot in (0..degree).rev() {
        t[slot] = idx % n;
        idx /= n;
    }
    t
}

/// Terms of the bar differential at `args` (length `d+1`): `(sign, argument tuple of length d)`.
fn bar_terms(g: &GroupTable, args: &[usize]) -> Vec<(i128, Tuple)> {
    let m = args.len();
    let mut out = Vec::with_capacity(m + 1);
    out.push((1, args[1..].iter().copied().collect()));
    for i in 0..m - 1 {
        let mut t: Tuple = SmallVec::with_capacity(m - 1);
        t.extend_from_slice(&args[..i]);
        t.push(g.mul(args[i], args[i + 1]));
        t.extend_from_slice(&args[i + 2..]);
        out.push((if (i + 1) % 2 == 0 { 1 } else { -1 }, t));
    }
    out.push((if m.is_multiple_of(2) { 1 } else { -1 }, args[..m - 1].iter().copied().collect()));
    out
}

/// Bar differential with trivial action, evaluated pointwise.
pub fn differential(c: &Cochain) -> Result<Cochain> {
    if c.degree == 0 || c.degree > 3 {
        return input(format!("differential implemented for degrees 1..=3, got {}", c.degree));
    }
    let g = c.group.clone();
    let d = c.degree + 1;
    Ok(Cochain::from_fn(g.clone(), d, |args| {
        bar_terms(&g, args).into_iter().map(|(s, t)| c.get(&t).scale(s as i64)).sum()
    }))
}

pub fn is_cocycle(c: &Cochain) -> Result<bool> {
    Ok(differential(c)?.is_zero())
}

/// First tuple where `dc` is nonzero.
pub fn cocycle_violation(c: &Cochain) -> Result<Option<Tuple>> {
    let d = differential(c)?;
    let found = d.tuples().zip(d.values()).find(|(_, v)| !v.is_zero()).map(|(t, _)| t);
    Ok(found)
}

fn normalized_tuples(n: usize, degree: usize) -> Vec<usize> {
    (0..n.pow(degree as u32)).filter(|&i| !decode(i, n, degree).contains(&0)).collect()
}

/// Integer matrix of `d: C^{deg}_norm → C^{deg+1}_norm`, with its row and column tuple indices.
fn normalized_differential(g: &GroupTable, degree: usize) -> (IntMatrix, Vec<usize>, Vec<usize>) {
    let n = g.order();
    let rows = normalized_tuples(n, degree + 1);
    let cols = normalized_tuples(n, degree);
    let mut col_pos = vec![usize::MAX; n.pow(degree as u32)];
    for (p, &c) in cols.iter().enumerate() {
        col_pos[c] = p;
    }
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (r, &ri) in rows.iter().enumerate() {
        for (s, t) in bar_terms(g, &decode(ri, n, degree + 1)) {
            let p = col_pos[encode(&t, n)];
            if p != usize::MAX {
                m.add_to(r, p, s);
            }
        }
    }
    (m, rows, cols)
}

/// Marks cochain arguments whose value is pinned to zero.
type ZeroMask<'a> = &'a dyn Fn(&[usize]) -> bool;

/// Decides `D·x ≡ b (mod 1)` for a fixed integer matrix, reusing one Smith form
/// across right-hand sides.
#[derive(Debug)]
pub struct CongruenceSolver {
    snf: SmithForm,
}

impl CongruenceSolver {
    pub fn new(d: &IntMatrix) -> Result<CongruenceSolver> {
        let snf = smith_normal_form(d, Track { row_log: true, v: true, ..Track::default() })?;
        Ok(CongruenceSolver { snf })
    }

    pub fn rank(&self) -> usize {
        self.snf.rank()
    }

    pub fn solve(&self, b: &[Phase]) -> Option<Vec<Phase>> {
        let mut ub = b.to_vec();
        self.snf.apply_u_phases(&mut ub);
        let r = self.snf.rank();
        if ub[r..].iter().any(|p| !p.is_zero()) {
            return None;
        }
        let y: Vec<Phase> = (0..r)
            .map(|i| {
                let p = ub[i];
                let s = self.snf.diag[i];
                Phase::new(p.numer() as i64, (p.denom() as i128 * s) as i64)
            })
            .collect();
        let v = self.snf.v.as_ref().expect("v tracked");
        let x = (0..self.snf.cols)
            .map(|j| {
                (0..r)
                    .filter(|&i| !y[i].is_zero())
                    .map(|i| y[i].scale((v.get(j, i) % y[i].denom() as i128) as i64))
                    .sum()
            })
            .collect();
        Some(x)
    }
}

#[derive(Debug)]
struct CoboundarySolver {
    order: usize,
    degree: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    solver: CongruenceSolver,
}

impl CoboundarySolver {
    /// Solver for `dη = w` with `w` of the given degree; columns for which
    /// `fixed_zero` holds are excluded (the corresponding values of η are 0).
    fn build(g: &GroupTable, degree: usize, fixed_zero: Option<ZeroMask>) -> Result<Self> {
        let n = g.order();
        let (mut d, rows, mut cols) = normalized_differential(g, degree - 1);
        if let Some(f) = fixed_zero {
            let keep: Vec<usize> = (0..cols.len()).filter(|&p| !f(&decode(cols[p], n, degree - 1))).collect();
            let mut reduced = IntMatrix::zeros(d.rows(), keep.len());
            for r in 0..d.rows() {
                for (q, &p) in keep.iter().enumerate() {
                    reduced.set(r, q, d.get(r, p));
                }
            }
            cols = keep.iter().map(|&p| cols[p]).collect();
            d = reduced;
        }
        Ok(CoboundarySolver { order: n, degree, rows, cols, solver: CongruenceSolver::new(&d)? })
    }

    fn solve(&self, w: &Cochain) -> Option<Cochain> {
        let b: Vec<Phase> = self.rows.iter().map(|&r| w.values[r]).collect();
        let x = self.solver.solve(&b)?;
        let mut eta = Cochain::zero(w.group.clone(), self.degree - 1);
        for (&c, &v) in self.cols.iter().zip(&x) {
            eta.values[c] = v;
        }
        debug_assert_eq!(eta.group.order(), self.order);
        Some(eta)
    }
}

type SolverKey = (Vec<usize>, usize);

fn solver_cache() -> &'static Mutex<HashMap<SolverKey, Arc<CoboundarySolver>>> {
    static CACHE: OnceLock<Mutex<HashMap<SolverKey, Arc<CoboundarySolver>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached_solver(g: &GroupTable, degree: usize) -> Result<Arc<CoboundarySolver>> {
    let key = (g.product_table().to_vec(), degree);
    if let Some(s) = solver_cache().lock().expect("solver cache poisoned").get(&key) {
        return Ok(s.clone());
    }
    let s = Arc::new(CoboundarySolver::build(g, degree, None)?);
    solver_cache().lock().expect("solver cache poisoned").entry(key).or_insert(s.clone());
    Ok(s)
}

fn check_solvable_input(w: &Cochain) -> Result<()> {
    if !(2..=3).contains(&w.degree) {
        return input(format!("coboundary solver handles degrees 2 and 3, got {}", w.degree));
    }
    if w.group.order() > MAX_SOLVER_ORDER {
        return input(format!("coboundary solver limited to order {MAX_SOLVER_ORDER}"));
    }
    if let Some(t) = w.normalization_violation() {
        return input(format!("cochain is not normalized at {:?}", t.as_slice()));
    }
    if let Some(t) = cocycle_violation(w)? {
        return input(format!("cochain is not a cocycle: differential nonzero at {:?}", t.as_slice()));
    }
    Ok(())
}

/// A normalized `η` with `dη = w`, or `None` when `w` is not a coboundary over ℚ/ℤ.
pub fn solve_coboundary(w: &Cochain) -> Result<Option<Cochain>> {
    check_solvable_input(w)?;
    let solver = cached_solver(&w.group, w.degree)?;
    finish_solution(w, solver.solve(w))
}

/// As [`solve_coboundary`], with `η` forced to vanish on tuples where `fixed_zero` holds.
pub fn solve_coboundary_constrained(w: &Cochain, fixed_zero: &dyn Fn(&[usize]) -> bool) -> Result<Option<Cochain>> {
    check_solvable_input(w)?;
    let solver = CoboundarySolver::build(&w.group, w.degree, Some(fixed_zero))?;
    finish_solution(w, solver.solve(w))
}

fn finish_solution(w: &Cochain, eta: Option<Cochain>) -> Result<Option<Cochain>> {
    if let Some(eta) = &eta {
        let d = differential(eta)?;
        if d.values != w.values {
            return Err(Error::Invariant("coboundary solver returned η with dη ≠ w".into()));
        }
    }
    Ok(eta)
}

#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub degree: usize,
    pub coeff_order: u64,
    /// Invariant factors `e_1 | e_2 | …` of the group, all greater than 1.
    pub elementary_divisors: Vec<u64>,
    /// One cocycle per invariant factor, generating the corresponding cyclic summand.
    pub representatives: Vec<Cochain>,
}

impl CohomologyResult {
    pub fn order(&self) -> u64 {
        self.elementary_divisors.iter().product()
    }

    /// `Σ coords[i]·rep_i`.
    pub fn class_representative(&self, group: &Group, coords: &[u64]) -> Result<Cochain> {
        if coords.len() != self.representatives.len() {
            return input(format!("expected {} coordinates, got {}", self.representatives.len(), coords.len()));
        }
        let mut acc = Cochain::zero(group.clone(), self.degree);
        for (rep, &a) in self.representatives.iter().zip(coords) {
            acc = acc.add(&rep.scale(a as i64))?;
        }
        Ok(acc)
    }

    /// Representative for the class with mixed-radix index `j` (first factor least significant).
    pub fn class_by_index(&self, group: &Group, j: u64) -> Result<Cochain> {
        if j >= self.order() {
            return input(format!("class index {j} out of range; the group has order {}", self.order()));
        }
        let mut rest = j;
        let coords: Vec<u64> = self
            .elementary_divisors
            .iter()
            .map(|&e| {
                let c = rest % e;
                rest /= e;
                c
            })
            .collect();
        self.class_representative(group, &coords)
    }

    /// One representative per class, in class-index order.
    pub fn all_classes(&self, group: &Group) -> Result<Vec<Cochain>> {
        (0..self.order()).map(|j| self.class_by_index(group, j)).collect()
    }
}

/// `H^n(G, ℤ_m)` with ℤ_m embedded in ℚ/ℤ as `(1/m)ℤ/ℤ`.
pub fn cohomology_group(g: &Group, degree: usize, coeff_order: u64) -> Result<CohomologyResult> {
    if !(2..=3).contains(&degree) {
        return input(format!("cohomology_group supports degrees 2 and 3, got {degree}"));
    }
    if g.order() > MAX_COHOMOLOGY_ORDER {
        return input(format!("cohomology_group limited to order {MAX_COHOMOLOGY_ORDER}, got {}", g.order()));
    }
    if coeff_order == 0 || coeff_order > 64 {
        return input(format!("coefficient order must lie in 1..=64, got {coeff_order}"));
    }
    let n = g.order();
    let m = coeff_order as i128;
    let (dn, _, cols) = normalized_differential(g, degree);
    let (dprev, _, _) = normalized_differential(g, degree - 1);
    let c = cols.len();
    let snf = smith_normal_form(&dn, Track { v: true, v_inv: true, ..Track::default() })?;
    let v = snf.v.as_ref().expect("v tracked");
    let v_inv = snf.v_inv.as_ref().expect("v_inv tracked");
    // Kernel of d_n mod m is spanned by the columns of V·diag(t).
    let t: Vec<i128> = (0..c).map(|i| if i < snf.rank() { m / snf.diag[i].gcd(&m) } else { 1 }).collect();
    // Coordinates of coboundaries and of m·ℤ^c in that basis.
    let vd = v_inv.mul(&dprev)?;
    let cp = dprev.cols();
    let mut r = IntMatrix::zeros(c, cp + c);
    for i in 0..c {
        for j in 0..cp + c {
            let x = if j < cp { vd.get(i, j) } else { m * v_inv.get(i, j - cp) };
            if x % t[i] != 0 {
                return Err(Error::Invariant("coboundaries not contained in cocycles".into()));
            }
            r.set(i, j, x / t[i]);
        }
    }
    let rs = smith_normal_form(&r, Track { u_inv: true, ..Track::default() })?;
    let u_inv = rs.u_inv.as_ref().expect("u_inv tracked");
    let mut divisors = Vec::new();
    let mut reps = Vec::new();
    for (i, &e) in rs.diag.iter().enumerate() {
        if e == 1 {
            continue;
        }
        let mut cochain = Cochain::zero(g.clone(), degree);
        for row in 0..c {
            let mut x: i128 = 0;
            for k in 0..c {
                let coeff = u_inv.get(k, i) % m;
                if coeff != 0 {
                    x = (x + (v.get(row, k) % m) * t[k] % m * coeff) % m;
                }
            }
            cochain.values[cols[row]] = Phase::new(x.rem_euclid(m) as i64, m as i64);
        }
        if !is_cocycle(&cochain)? {
            return Err(Error::Invariant("cohomology representative is not a cocycle".into()));
        }
        divisors.push(e as u64);
        reps.push(cochain);
    }
    debug_assert!(n > 0);
    Ok(CohomologyResult { degree, coeff_order, elementary_divisors: divisors, representatives: reps })
}

/// `ω_j(a,b,c) = j·a·[b+c ≥ n]/n` on `C_n`.
pub fn standard_cyclic_cocycle(n: usize, j: usize) -> Result<Cochain> {
    if n < 2 || j >= n {
        return input(format!("standard_cyclic_cocycle needs n ≥ 2 and 0 ≤ j < n, got ({n}, {j})"));
    }
    let g = Arc::new(GroupTable::cyclic(n));
    Ok(Cochain::from_fn(g, 3, |a| {
        let carry = if a[1] + a[2] >= n { 1 } else { 0 };
        Phase::new((j * a[0] * carry) as i64, n as i64)
    }))
}

/// `(ρ*w)(γ_1, …, γ_n) = w(ρ(γ_1), …, ρ(γ_n))`.
pub fn pullback(rho: &Surjection, w: &Cochain) -> Result<Cochain> {
    if rho.target.product_table() != w.group.product_table() {
        return input("pullback: cochain does not live on the target of the surjection");
    }
    let mut buf: Tuple = SmallVec::new();
    Ok(Cochain::from_fn(rho.source.clone(), w.degree, |args| {
        buf.clear();
        buf.extend(args.iter().map(|&x| rho.map[x]));
        w.get(&buf)
    }))
}

/// Restriction to a subgroup, renumbered as in [`GroupTable::subgroup_table`].
pub fn restrict(w: &Cochain, h: &[usize]) -> Result<Cochain> {
    let table = Arc::new(w.group.subgroup_table(h)?);
    let mut sorted = h.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut buf: Tuple = SmallVec::new();
    Ok(Cochain::from_fn(table, w.degree, |args| {
        buf.clear();
        buf.extend(args.iter().map(|&x| sorted[x]));
        w.get(&buf)
    }))
}

pub fn class_equal(w1: &Cochain, w2: &Cochain) -> Result<bool> {
    w1.check_compatible(w2)?;
    Ok(solve_coboundary(&w1.sub(w2)?)?.is_some())
}

/// Least `k ≥ 1` with `k·w` a coboundary.
pub fn class_order(w: &Cochain) -> Result<u64> {
    check_solvable_input(w)?;
    let n = w.group.order() as u64;
    for k in 1..=n {
        if n.is_multiple_of(k) && solve_coboundary(&w.scale(k as i64))?.is_some() {
            return Ok(k);
        }
    }
    Err(Error::Invariant("no multiple of the class up to |G| is trivial".into()))
}

#[derive(Clone, Debug)]
pub struct SubgroupScan {
    /// `(subgroup, [w|_H] ≠ 0)` for every subgroup, trivial one included.
    pub entries: Vec<(Vec<usize>, bool)>,
    /// True iff the restriction is nontrivial on every nontrivial subgroup.
    pub hypothesis_holds: bool,
}

pub fn subgroup_nontriviality_scan(w: &Cochain) -> Result<SubgroupScan> {
    if w.degree != 3 {
        return input("subgroup scan expects a 3-cocycle");
    }
    check_solvable_input(w)?;
    let mut entries = Vec::new();
    for h in enumerate_subgroups(&w.group)? {
        let nontrivial = if h.len() == 1 { false } else { solve_coboundary(&restrict(w, &h)?)?.is_none() };
        entries.push((h, nontrivial));
    }
    let hypothesis_holds = entries.iter().filter(|(h, _)| h.len() > 1).all(|(_, b)| *b);
    Ok(SubgroupScan { entries, hypothesis_holds })
}

/// Shifts an arbitrary cocycle by a coboundary so that it becomes normalized.
/// Returns the normalized cocycle and the cochain `f` with `w − df` normalized.
pub fn normalize_cocycle(w: &Cochain) -> Result<(Cochain, Cochain)> {
    if !(2..=3).contains(&w.degree) {
        return input(format!("normalization supports degrees 2 and 3, got {}", w.degree));
    }
    if let Some(t) = cocycle_violation(w)? {
        return input(format!("cannot normalize a non-cocycle: differential nonzero at {:?}", t.as_slice()));
    }
    let g = &w.group;
    let n = g.order();
    let deg = w.degree;
    let rows: Vec<usize> = (0..n.pow(deg as u32)).filter(|&i| decode(i, n, deg).contains(&0)).collect();
    let cols = n.pow(deg as u32 - 1);
    let mut d = IntMatrix::zeros(rows.len(), cols);
    for (r, &ri) in rows.iter().enumerate() {
        for (s, t) in bar_terms(g, &decode(ri, n, deg)) {
            d.add_to(r, encode(&t, n), s);
        }
    }
    let b: Vec<Phase> = rows.iter().map(|&r| w.values[r]).collect();
    let x = CongruenceSolver::new(&d)?
        .solve(&b)
        .ok_or_else(|| Error::Invariant("cocycle admits no normalizing shift".into()))?;
    let f = Cochain::from_values(g.clone(), deg - 1, x)?;
    let shifted = w.sub(&differential(&f)?)?;
    if !shifted.is_normalized() {
        return Err(Error::Invariant("normalizing shift left identity entries".into()));
    }
    Ok((shifted, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_named_group, make_surjection};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_normalized(g: &Group, degree: usize, den: i64, rng: &mut impl Rng) -> Cochain {
        Cochain::from_fn(g.clone(), degree, |a| {
            if a.contains(&0) {
                Phase::ZERO
            } else {
                Phase::new(rng.gen_range(0..den), den)
            }
        })
    }

    #[test]
    fn differential_of_zero_is_zero() {
        let g = make_named_group("S3").unwrap();
        for deg in 1..=3 {
            assert!(differential(&Cochain::zero(g.clone(), deg)).unwrap().is_zero());
        }
    }

    #[test]
    fn c2_two_cochains_are_closed() {
        let g = make_named_group("C2").unwrap();
        for t in 0..6 {
            let mut c = Cochain::zero(g.clone(), 2);
            c.set(&[1, 1], Phase::new(t, 6));
            assert!(is_cocycle(&c).unwrap());
        }
    }

    #[test]
    fn s3_two_cochain_with_nonzero_differential() {
        let g = make_named_group("S3").unwrap();
        let mut c = Cochain::zero(g.clone(), 2);
        c.set(&[1, 2], Phase::new(1, 3));
        assert!(!is_cocycle(&c).unwrap());
    }

    #[test]
    fn standard_cyclic_values() {
        let w = standard_cyclic_cocycle(2, 1).unwrap();
        assert_eq!(w.get(&[1, 1, 1]), Phase::HALF);
        assert!(standard_cyclic_cocycle(5, 0).unwrap().is_zero());
        let w4 = standard_cyclic_cocycle(4, 1).unwrap();
        assert_eq!(w4.get(&[2, 2, 2]), Phase::HALF);
        for n in 2..=8 {
            assert!(is_cocycle(&standard_cyclic_cocycle(n, 1).unwrap()).unwrap(), "n = {n}");
            assert!(standard_cyclic_cocycle(n, 1).unwrap().is_normalized());
        }
    }

    #[test]
    fn solver_on_c2_generator() {
        let w = standard_cyclic_cocycle(2, 1).unwrap();
        assert!(solve_coboundary(&w).unwrap().is_none());
        let z = Cochain::zero(w.group().clone(), 3);
        assert!(solve_coboundary(&z).unwrap().unwrap().is_zero());
    }

    #[test]
    fn fourth_multiple_of_c4_generator_is_trivial() {
        let w = standard_cyclic_cocycle(4, 1).unwrap().scale(4);
        assert!(w.is_zero());
        let eta = solve_coboundary(&w).unwrap().unwrap();
        assert_eq!(differential(&eta).unwrap(), w);
    }

    #[test]
    fn solver_rejects_non_cocycles() {
        let g = make_named_group("S3").unwrap();
        let mut c = Cochain::zero(g, 2);
        c.set(&[1, 2], Phase::new(1, 3));
        assert!(matches!(solve_coboundary(&c), Err(Error::Input(_))));
    }

    /// Brute force: count normalized ℤ_m cocycles and coboundaries.
    fn brute_force_h_order(g: &Group, degree: usize, m: i64) -> u64 {
        let n = g.order();
        let slots = normalized_tuples(n, degree);
        let prev_slots = normalized_tuples(n, degree - 1);
        let total = (m as u64).pow(slots.len() as u32);
        let mut cocycles = 0u64;
        for code in 0..total {
            let mut c = Cochain::zero(g.clone(), degree);
            let mut rest = code;
            for &s in &slots {
                c.values[s] = Phase::new((rest % m as u64) as i64, m);
                rest /= m as u64;
            }
            if is_cocycle(&c).unwrap() {
                cocycles += 1;
            }
        }
        let mut boundaries = std::collections::BTreeSet::new();
        let prev_total = (m as u64).pow(prev_slots.len() as u32);
        for code in 0..prev_total {
            let mut c = Cochain::zero(g.clone(), degree - 1);
            let mut rest = code;
            for &s in &prev_slots {
                c.values[s] = Phase::new((rest % m as u64) as i64, m);
                rest /= m as u64;
            }
            let d = differential(&c).unwrap();
            boundaries.insert(d.values.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","));
        }
        cocycles / boundaries.len() as u64
    }

    #[test]
    fn cohomology_of_c2_matches_enumeration() {
        let g = make_named_group("C2").unwrap();
        let h3 = cohomology_group(&g, 3, 2).unwrap();
        assert_eq!(h3.elementary_divisors, vec![2]);
        assert_eq!(h3.order(), brute_force_h_order(&g, 3, 2));
        let h2 = cohomology_group(&g, 2, 2).unwrap();
        assert_eq!(h2.elementary_divisors, vec![2]);
        assert_eq!(h2.order(), brute_force_h_order(&g, 2, 2));
    }

    #[test]
    fn cohomology_of_c3_and_klein_matches_enumeration() {
        let c3 = make_named_group("C3").unwrap();
        assert_eq!(cohomology_group(&c3, 2, 3).unwrap().order(), brute_force_h_order(&c3, 2, 3));
        let v = make_named_group("C2xC2").unwrap();
        assert_eq!(cohomology_group(&v, 2, 2).unwrap().order(), brute_force_h_order(&v, 2, 2));
    }

    #[test]
    fn h3_of_cyclic_groups() {
        for n in 2..=6 {
            let g = Arc::new(GroupTable::cyclic(n));
            let h = cohomology_group(&g, 3, n as u64).unwrap();
            assert_eq!(h.elementary_divisors, vec![n as u64], "C{n}");
            assert_eq!(class_order(&h.representatives[0]).unwrap(), n as u64);
        }
    }

    #[test]
    fn representatives_are_pairwise_non_cohomologous() {
        let g = make_named_group("S3").unwrap();
        let h = cohomology_group(&g, 3, 6).unwrap();
        let classes = h.all_classes(&g).unwrap();
        assert_eq!(classes.len(), 6);
        for i in 0..classes.len() {
            for j in 0..i {
                assert!(!class_equal(&classes[i], &classes[j]).unwrap(), "{i} ~ {j}");
            }
        }
    }

    #[test]
    fn class_orders_of_standard_cocycles() {
        for n in 2..=6usize {
            for j in 0..n {
                let w = standard_cyclic_cocycle(n, j).unwrap();
                assert_eq!(class_order(&w).unwrap(), (n / n.gcd(&j)) as u64, "n={n} j={j}");
            }
        }
        assert_eq!(class_order(&standard_cyclic_cocycle(4, 2).unwrap()).unwrap(), 2);
    }

    #[test]
    fn pullback_and_restrict_examples() {
        let c4 = make_named_group("C4").unwrap();
        let c2 = make_named_group("C2").unwrap();
        let rho = make_surjection(c4.clone(), c2.clone(), vec![0, 1, 0, 1]).unwrap();
        let w = standard_cyclic_cocycle(2, 1).unwrap();
        let p = pullback(&rho, &w).unwrap();
        for t in p.tuples() {
            let odd = t.iter().all(|x| x % 2 == 1);
            assert_eq!(p.get(&t), if odd { Phase::HALF } else { Phase::ZERO });
        }
        let id = Surjection::identity(c2.clone());
        assert_eq!(pullback(&id, &w).unwrap(), w);

        let w4 = standard_cyclic_cocycle(4, 1).unwrap();
        let r = restrict(&w4, &[0, 2]).unwrap();
        assert_eq!(r.get(&[1, 1, 1]), Phase::HALF);
        let r2 = restrict(&standard_cyclic_cocycle(4, 2).unwrap(), &[0, 2]).unwrap();
        assert!(r2.is_zero());
        let triv = restrict(&w4, &[0]).unwrap();
        assert_eq!(triv.group().order(), 1);
        assert!(triv.is_zero());
        assert!(restrict(&w4, &[0, 1]).is_err());
    }

    #[test]
    fn subgroup_scans_on_c4() {
        let scan = subgroup_nontriviality_scan(&standard_cyclic_cocycle(4, 1).unwrap()).unwrap();
        assert_eq!(scan.entries, vec![(vec![0], false), (vec![0, 2], true), (vec![0, 1, 2, 3], true)]);
        assert!(scan.hypothesis_holds);
        let scan2 = subgroup_nontriviality_scan(&standard_cyclic_cocycle(4, 2).unwrap()).unwrap();
        assert_eq!(scan2.entries[1], (vec![0, 2], false));
        assert!(!scan2.hypothesis_holds);
        let zero = Cochain::zero(make_named_group("C4").unwrap(), 3);
        let scan0 = subgroup_nontriviality_scan(&zero).unwrap();
        assert!(scan0.entries.iter().all(|(_, b)| !b));
        assert!(!scan0.hypothesis_holds);
    }

    #[test]
    fn class_equal_examples() {
        let w = standard_cyclic_cocycle(2, 1).unwrap();
        assert!(class_equal(&w, &w).unwrap());
        assert!(!class_equal(&w, &Cochain::zero(w.group().clone(), 3)).unwrap());
        let other = standard_cyclic_cocycle(3, 1).unwrap();
        assert!(class_equal(&w, &other).is_err());
    }

    #[test]
    fn normalization_shift() {
        let g = make_named_group("C3").unwrap();
        let w = standard_cyclic_cocycle(3, 1).unwrap();
        // add the coboundary of a non-normalized 2-cochain
        let f = Cochain::from_fn(g.clone(), 2, |a| Phase::new((a[0] + 2 * a[1] + 1) as i64, 9));
        let raw = w.add(&differential(&f).unwrap()).unwrap();
        assert!(!raw.is_normalized());
        let (normed, shift) = normalize_cocycle(&raw).unwrap();
        assert!(normed.is_normalized());
        assert!(is_cocycle(&normed).unwrap());
        assert_eq!(raw.sub(&differential(&shift).unwrap()).unwrap(), normed);
        assert!(class_equal(&normed, &w).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn d_squared_is_zero(seed in any::<u64>(), gi in 0usize..4, deg in 1usize..3) {
            let name = ["C3", "C2xC2", "S3", "C4"][gi];
            let g = make_named_group(name).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_normalized(&g, deg, 12, &mut rng);
            let dd = differential(&differential(&c).unwrap()).unwrap();
            prop_assert!(dd.is_zero());
        }

        #[test]
        fn solver_inverts_random_coboundaries(seed in any::<u64>(), gi in 0usize..3) {
            let name = ["S3", "C2xC2", "C4"][gi];
            let g = make_named_group(name).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let eta = random_normalized(&g, 2, 24, &mut rng);
            let w = differential(&eta).unwrap();
            let back = solve_coboundary(&w).unwrap().expect("coboundary must be solvable");
            prop_assert_eq!(differential(&back).unwrap(), w);
        }

        #[test]
        fn class_equal_is_an_equivalence(seed in any::<u64>()) {
            let g = make_named_group("C4").unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = standard_cyclic_cocycle(4, rng.gen_range(0..4)).unwrap();
            let shift = |rng: &mut ChaCha8Rng| differential(&random_normalized(&g, 2, 8, rng)).unwrap();
            let a = base.add(&shift(&mut rng)).unwrap();
            let b = base.add(&shift(&mut rng)).unwrap();
            let c = standard_cyclic_cocycle(4, rng.gen_range(0..4)).unwrap();
            prop_assert!(class_equal(&a, &a).unwrap());
            prop_assert_eq!(class_equal(&a, &b).unwrap(), class_equal(&b, &a).unwrap());
            prop_assert!(class_equal(&a, &b).unwrap());
            if class_equal(&a, &c).unwrap() {
                prop_assert!(class_equal(&b, &c).unwrap());
            }
        }

        #[test]
        fn pullback_and_restriction_commute_with_d(seed in any::<u64>(), deg in 1usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s3 = make_named_group("S3").unwrap();
            let c2 = make_named_group("C2").unwrap();
            let rho = make_surjection(s3.clone(), c2.clone(), vec![0, 1, 1, 0, 0, 1]).unwrap();
            let c = random_normalized(&c2, deg, 10, &mut rng);
            prop_assert_eq!(
                differential(&pullback(&rho, &c).unwrap()).unwrap(),
                pullback(&rho, &differential(&c).unwrap()).unwrap()
            );
            let d = random_normalized(&s3, deg, 10, &mut rng);
            for h in enumerate_subgroups(&s3).unwrap() {
                prop_assert_eq!(
                    differential(&restrict(&d, &h).unwrap()).unwrap(),
                    restrict(&differential(&d).unwrap(), &h).unwrap()
                );
            }
        }
    }
}
