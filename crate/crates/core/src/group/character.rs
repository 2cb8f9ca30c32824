use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::subgroup::{derived_subgroup, left_cosets, right_cosets, subgroup_closure, Subgroup};
use super::GroupTable;
use crate::error::{Error, Result};
use crate::util::fmt_complex;

/// Tolerance for deciding that two phases agree.
pub const PHASE_TOL: f64 = 1e-9;

/// A homomorphism from a subgroup into the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterMap {
    domain: Subgroup,
    /// Aligned with `domain.elements()`.
    values: Vec<Complex64>,
}

impl CharacterMap {
    /// Builds a character after checking unimodularity and multiplicativity
    /// to `tol`.
    pub fn new(domain: Subgroup, values: Vec<Complex64>, tol: f64) -> Result<Self> {
        if values.len() != domain.order() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a subgroup of order {}",
                values.len(),
                domain.order()
            )));
        }
        let chi = Self { domain, values };
        let residual = chi.invariant_residual();
        if residual > tol {
            return Err(Error::InvalidArgument(format!(
                "not a character: invariant residual {residual:e}"
            )));
        }
        Ok(chi)
    }

    pub fn trivial(domain: Subgroup) -> Self {
        let values = vec![Complex64::new(1.0, 0.0); domain.order()];
        Self { domain, values }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, g: usize) -> Option<Complex64> {
        self.domain.position(g).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.domain.elements().iter().copied().zip(self.values.iter().copied())
    }

    pub fn conj(&self) -> Self {
        Self { domain: self.domain.clone(), values: self.values.iter().map(|v| v.conj()).collect() }
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.values.iter().all(|v| (v - 1.0).norm() <= tol)
    }

    /// Largest violation of `|χ| = 1`, `χ(e) = 1` and `χ(ab) = χ(a)χ(b)`.
    pub fn invariant_residual(&self) -> f64 {
        let g = self.domain.parent();
        let mut worst: f64 = 0.0;
        for (_, v) in self.iter() {
            worst = worst.max((v.norm() - 1.0).abs());
        }
        if let Some(e) = self.value(g.identity()) {
            worst = worst.max((e - 1.0).norm());
        }
        for (a, va) in self.iter() {
            for (b, vb) in self.iter() {
                let vab = self.value(g.mul(a, b)).expect("closed domain");
                worst = worst.max((vab - va * vb).norm());
            }
        }
        worst
    }

    /// Maximum distance to another character on the same domain; infinite
    /// when the domains differ.
    pub fn distance(&self, other: &CharacterMap) -> f64 {
        if self.domain.elements() != other.domain.elements() {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Extends `χ` from `H` to a unimodular function `ψ` on the whole group
    /// with `ψ(h t) = χ(h) ψ(t)` for `h ∈ H`: on each right coset `H r`
    /// (with minimal representative `r`) set `ψ(h r) = χ(h)`.
    pub fn coset_extension(&self) -> Vec<Complex64> {
        let g = self.domain.parent();
        let mut psi = vec![Complex64::new(0.0, 0.0); g.order()];
        for coset in right_cosets(&self.domain) {
            let r = coset[0];
            for (h, v) in self.iter() {
                psi[g.mul(h, r)] = v;
            }
        }
        psi
    }
}

impl Serialize for CharacterMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, [f64; 2]> =
            self.iter().map(|(g, v)| (g.to_string(), [v.re, v.im])).collect();
        map.serialize(s)
    }
}

impl fmt::Display for CharacterMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.domain.parent();
        let parts: Vec<String> = self
            .iter()
            .map(|(h, v)| format!("{}↦{}", g.label(h), fmt_complex(v)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `exp(2πi·k/n)`, exact on quarter turns.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

/// Characters of `H` in exponent form: each character is a vector, aligned
/// with `H.elements()`, of exponents `k` meaning `exp(2πi·k/modulus)`.
///
/// Factors through the abelianization `H/[H,H]` and builds the characters
/// of that quotient by peeling off elements of maximal order: given all
/// characters of a subgroup `K`, adjoining `g` with `g^m ∈ K` (minimal `m`)
/// extends each one in exactly `m` ways, one per `m`-th root of `ψ(g^m)`.
pub(crate) fn character_exponents(subgroup: &Subgroup) -> (u64, Vec<Vec<u64>>) {
    let g = subgroup.parent();
    let derived = derived_subgroup(subgroup);

    // quotient H/[H,H]: cosets of the derived subgroup inside H
    let mut coset_of = HashMap::new();
    let mut reps = Vec::new();
    for coset in left_cosets(&derived) {
        if subgroup.contains(coset[0]) {
            for &x in &coset {
                coset_of.insert(x, reps.len());
            }
            reps.push(coset[0]);
        }
    }
    let n = reps.len();
    let qmul = |a: usize, b: usize| coset_of[&g.mul(reps[a], reps[b])];
    let q_identity = coset_of[&g.identity()];
    let q_order = |x: usize| {
        let mut y = x;
        let mut k = 1;
        while y != q_identity {
            y = qmul(y, x);
            k += 1;
        }
        k
    };
    let modulus = n as u64;

    // in_k[x]: membership of quotient element x in the current subgroup K
    let mut in_k = vec![false; n];
    in_k[q_identity] = true;
    let mut k_elems = vec![q_identity];
    let mut chars: Vec<Vec<Option<u64>>> = vec![{
        let mut c = vec![None; n];
        c[q_identity] = Some(0);
        c
    }];
    while k_elems.len() < n {
        let gen = (0..n)
            .filter(|&x| !in_k[x])
            .max_by(|&a, &b| q_order(a).cmp(&q_order(b)).then(b.cmp(&a)))
            .expect("K is proper");
        let mut m = 1;
        let mut gm = gen;
        while !in_k[gm] {
            gm = qmul(gm, gen);
            m += 1;
        }
        // gm = gen^m ∈ K; new elements k·gen^j for 0 <= j < m
        let mut powers = vec![q_identity];
        for j in 1..m {
            powers.push(qmul(powers[j - 1], gen));
        }
        let mut new_chars = Vec::new();
        for psi in &chars {
            let a = psi[gm].expect("gen^m in K");
            for b in 0..modulus {
                if (m as u64 * b) % modulus != a {
                    continue;
                }
                let mut chi = vec![None; n];
                for &k in &k_elems {
                    for (j, &p) in powers.iter().enumerate() {
                        let x = qmul(k, p);
                        chi[x] = Some((psi[k].unwrap() + j as u64 * b) % modulus);
                    }
                }
                new_chars.push(chi);
            }
        }
        let mut next = Vec::new();
        for &k in &k_elems {
            for &p in &powers {
                let x = qmul(k, p);
                if !in_k[x] {
                    in_k[x] = true;
                    next.push(x);
                }
            }
        }
        k_elems.extend(next);
        chars = new_chars;
    }

    let lifted = chars
        .into_iter()
        .map(|chi| subgroup.elements().iter().map(|h| chi[coset_of[h]].unwrap()).collect())
        .collect();
    (modulus, lifted)
}

/// All characters `H → 𝕋`, one per element of `H/[H,H]`.
pub fn characters_of(subgroup: &Subgroup) -> Vec<CharacterMap> {
    let (modulus, exps) = character_exponents(subgroup);
    exps.into_iter()
        .map(|e| CharacterMap {
            domain: subgroup.clone(),
            values: e.into_iter().map(|k| root_of_unity(k, modulus)).collect(),
        })
        .collect()
}

/// The dual group of a finite abelian group.
#[derive(Clone, Debug)]
pub struct DualGroup {
    /// Cayley table of the characters under pointwise product.
    pub group: Arc<GroupTable>,
    /// `characters[k]` is the character labelled `k` in `group`.
    pub characters: Vec<CharacterMap>,
    /// `pairing[g][k] = χ_k(g)`.
    pub pairing: Vec<Vec<Complex64>>,
}

impl DualGroup {
    pub fn pair(&self, g: usize, k: usize) -> Complex64 {
        self.pairing[g][k]
    }

    /// The index of the character whose values match `values` to `tol`.
    pub fn find(&self, values: &[Complex64], tol: f64) -> Option<usize> {
        self.characters.iter().position(|chi| {
            chi.values().iter().zip(values).all(|(a, b)| (a - b).norm() <= tol)
        })
    }

    /// The annihilator `S^⊥ = {χ : χ = 1 on S}`.
    pub fn annihilator(&self, set: &[usize], tol: f64) -> Vec<usize> {
        (0..self.characters.len())
            .filter(|&k| set.iter().all(|&g| (self.pairing[g][k] - 1.0).norm() <= tol))
            .collect()
    }
}

/// Dual group `Â` with its pairing; rejects non-abelian groups.
pub fn dual_group(group: &Arc<GroupTable>) -> Result<DualGroup> {
    if !group.is_abelian() {
        return Err(Error::NotAbelian(group.name().to_string()));
    }
    let whole = Subgroup::whole(group);
    let (modulus, exps) = character_exponents(&whole);
    let index: HashMap<&Vec<u64>, usize> = exps.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let n = exps.len();
    let mut mul = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let prod: Vec<u64> = exps[a].iter().zip(&exps[b]).map(|(x, y)| (x + y) % modulus).collect();
            mul[a * n + b] = index[&prod];
        }
    }
    let identity = index[&vec![0; group.order()]];
    let labels = (0..n).map(|k| format!("χ{k}")).collect();
    let table = GroupTable::from_table(format!("dual({})", group.name()), n, mul, identity, Some(labels))?;
    let characters = characters_of(&whole);
    let pairing = group
        .elements()
        .map(|g| characters.iter().map(|chi| chi.values[g]).collect())
        .collect();
    Ok(DualGroup { group: Arc::new(table), characters, pairing })
}

/// A witness that prescribed phases are not the restriction of a character:
/// two products landing on the same element force different values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conflict {
    pub element: usize,
    pub word: Vec<usize>,
    pub word_value: [f64; 2],
    pub other_word: Vec<usize>,
    pub other_value: [f64; 2],
    pub rendered: String,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered)
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

fn render_word(group: &GroupTable, word: &[usize]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        out.push_str(&format!("χ({})", group.label(word[i])));
        if j - i > 1 {
            out.push_str(&superscript(j - i));
        }
        i = j;
    }
    out
}

fn render_side(group: &GroupTable, element: usize, word: &[usize]) -> String {
    if word.len() == 1 && word[0] == element {
        format!("χ({}) prescribed", group.label(element))
    } else {
        format!("χ({})={}", group.label(element), render_word(group, word))
    }
}

/// Extends prescribed phases on `S` to a character of the subgroup they
/// generate, or returns a [`Conflict`].
///
/// Elements are reached from the identity by multiplying on the right by
/// generators, introducing the generators one at a time (sorted order) so
/// that witnesses prefer powers of a single generator. Every edge
/// `x ↦ x·s` is checked, which makes the result a homomorphism.
pub fn extend_character(
    group: &Arc<GroupTable>,
    phases: &BTreeMap<usize, Complex64>,
) -> Result<std::result::Result<CharacterMap, Conflict>> {
    extend_character_with_tol(group, phases, PHASE_TOL)
}

pub fn extend_character_with_tol(
    group: &Arc<GroupTable>,
    phases: &BTreeMap<usize, Complex64>,
    tol: f64,
) -> Result<std::result::Result<CharacterMap, Conflict>> {
    for &g in phases.keys() {
        group.check_element(g)?;
    }
    let gens: Vec<(usize, Complex64)> = phases.iter().map(|(&g, &v)| (g, v)).collect();
    let mut assigned: Vec<Option<(Complex64, Vec<usize>)>> = vec![None; group.order()];
    assigned[group.identity()] = Some((Complex64::new(1.0, 0.0), Vec::new()));

    for stage in 0..gens.len() {
        let mut queue: VecDeque<usize> =
            (0..group.order()).filter(|&x| assigned[x].is_some()).collect();
        while let Some(x) = queue.pop_front() {
            let (vx, wx) = assigned[x].clone().expect("queued elements are assigned");
            for &(s, phase) in &gens[..=stage] {
                let y = group.mul(x, s);
                let vy = vx * phase;
                let mut wy = wx.clone();
                wy.push(s);
                match &assigned[y] {
                    None => {
                        assigned[y] = Some((vy, wy));
                        queue.push_back(y);
                    }
                    Some((existing, wexisting)) => {
                        if (existing - vy).norm() > tol {
                            let rendered = format!(
                                "{} = {} but {} = {}",
                                render_side(group, y, wexisting),
                                fmt_complex(*existing),
                                render_side(group, y, &wy),
                                fmt_complex(vy)
                            );
                            return Ok(Err(Conflict {
                                element: y,
                                word: wexisting.clone(),
                                word_value: [existing.re, existing.im],
                                other_word: wy,
                                other_value: [vy.re, vy.im],
                                rendered,
                            }));
                        }
                    }
                }
            }
        }
    }

    let keys: Vec<usize> = gens.iter().map(|&(g, _)| g).collect();
    let domain = subgroup_closure(group, &keys)?;
    let values = domain
        .elements()
        .iter()
        .map(|&h| assigned[h].as_ref().expect("closure is reached").0)
        .collect();
    Ok(Ok(CharacterMap { domain, values }))
}
