use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order a Cayley table may have.
pub const MAX_ORDER: usize = 256;

/// A finite group given by its Cayley table.
///
/// Elements are the indices `0..order`. The table is validated on
/// construction (closure, identity, inverses, associativity), so every
/// `GroupTable` value is a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    abelian: bool,
    labels: Vec<String>,
}

impl GroupTable {
    /// Validates a row-major Cayley table and derives inverses and the
    /// commutativity flag.
    pub fn from_table(
        name: impl Into<String>,
        order: usize,
        mul: Vec<usize>,
        identity: usize,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if order == 0 || order > MAX_ORDER {
            return Err(Error::InvalidTable(format!(
                "order {order} outside 1..={MAX_ORDER}"
            )));
        }
        if mul.len() != order * order {
            return Err(Error::InvalidTable(format!(
                "table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if let Some(&bad) = mul.iter().find(|&&x| x >= order) {
            return Err(Error::ElementOutOfRange { element: bad, order });
        }
        if identity >= order {
            return Err(Error::ElementOutOfRange { element: identity, order });
        }
        let at = |a: usize, b: usize| mul[a * order + b];
        for g in 0..order {
            if at(identity, g) != g || at(g, identity) != g {
                return Err(Error::InvalidTable(format!(
                    "{identity} is not a two-sided identity (fails at {g})"
                )));
            }
        }
        let mut inv = vec![usize::MAX; order];
        for g in 0..order {
            let right = (0..order).find(|&h| at(g, h) == identity);
            match right {
                Some(h) if at(h, g) == identity => inv[g] = h,
                _ => {
                    return Err(Error::InvalidTable(format!("element {g} has no inverse")));
                }
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let abelian = (0..order).all(|a| (0..a).all(|b| at(a, b) == at(b, a)));
        let labels = match labels {
            Some(l) if l.len() == order => l,
            Some(l) => {
                return Err(Error::InvalidTable(format!(
                    "{} labels for {order} elements",
                    l.len()
                )))
            }
            None => (0..order).map(|g| g.to_string()).collect(),
        };
        Ok(Self {
            name: name.into(),
            order,
            mul,
            identity,
            inv,
            abelian,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Row-major Cayley table.
    pub fn table(&self) -> &[usize] {
        &self.mul
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// `g^k` for `k >= 0`.
    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    /// Order of the element `g`.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { element: g, order: self.order })
        }
    }

    /// Builds the group described by `spec`.
    pub fn build(spec: &GroupSpec) -> Result<Self> {
        spec.validate()?;
        let name = spec.to_string();
        match spec {
            GroupSpec::Cyclic(n) => {
                let n = *n;
                let mul = (0..n * n).map(|x| (x / n + x % n) % n).collect();
                GroupTable::from_table(name, n, mul, 0, None)
            }
            GroupSpec::Dihedral(n) => {
                let n = *n;
                let order = 2 * n;
                // r^k -> k, s r^k -> n + k, with r s = s r^{-1}
                let mut mul = vec![0; order * order];
                for a in 0..order {
                    for b in 0..order {
                        let (ra, sa) = (a % n, a >= n);
                        let (rb, sb) = (b % n, b >= n);
                        let prod = match (sa, sb) {
                            (false, false) => (ra + rb) % n,
                            (false, true) => n + (rb + n - ra) % n,
                            (true, false) => n + (ra + rb) % n,
                            (true, true) => (rb + n - ra) % n,
                        };
                        mul[a * order + b] = prod;
                    }
                }
                let labels = (0..order)
                    .map(|g| match (g < n, g % n) {
                        (true, 0) => "e".to_string(),
                        (true, k) => format!("r^{k}"),
                        (false, 0) => "s".to_string(),
                        (false, k) => format!("s r^{k}"),
                    })
                    .collect();
                GroupTable::from_table(name, order, mul, 0, Some(labels))
            }
            GroupSpec::Symmetric(n) => {
                let perms = permutations(*n);
                let order = perms.len();
                let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
                let mut mul = vec![0; order * order];
                for (a, pa) in perms.iter().enumerate() {
                    for (b, pb) in perms.iter().enumerate() {
                        let comp: Vec<usize> = pb.iter().map(|&x| pa[x]).collect();
                        mul[a * order + b] = index(&comp);
                    }
                }
                let labels = perms
                    .iter()
                    .map(|p| {
                        let body: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                        format!("[{}]", body.join(" "))
                    })
                    .collect();
                GroupTable::from_table(name, order, mul, 0, Some(labels))
            }
            GroupSpec::Quaternion8 => {
                // index = 2 * unit + negated, unit in {1, i, j, k}
                const UNIT: [[(usize, bool); 4]; 4] = [
                    [(0, false), (1, false), (2, false), (3, false)],
                    [(1, false), (0, true), (3, false), (2, true)],
                    [(2, false), (3, true), (0, true), (1, false)],
                    [(3, false), (2, false), (1, true), (0, true)],
                ];
                let mut mul = vec![0; 64];
                for a in 0..8 {
                    for b in 0..8 {
                        let (u, neg) = UNIT[a / 2][b / 2];
                        let neg = neg ^ (a % 2 == 1) ^ (b % 2 == 1);
                        mul[a * 8 + b] = 2 * u + neg as usize;
                    }
                }
                let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                GroupTable::from_table(name, 8, mul, 0, Some(labels))
            }
            GroupSpec::Product(a, b) => {
                let ga = GroupTable::build(a)?;
                let gb = GroupTable::build(b)?;
                let (na, nb) = (ga.order, gb.order);
                let order = na * nb;
                let mut mul = vec![0; order * order];
                for x in 0..order {
                    for y in 0..order {
                        let (xa, xb) = (x / nb, x % nb);
                        let (ya, yb) = (y / nb, y % nb);
                        mul[x * order + y] = ga.mul(xa, ya) * nb + gb.mul(xb, yb);
                    }
                }
                let labels = (0..order)
                    .map(|x| format!("({},{})", ga.label(x / nb), gb.label(x % nb)))
                    .collect();
                let identity = ga.identity * nb + gb.identity;
                GroupTable::from_table(name, order, mul, identity, Some(labels))
            }
        }
    }

    /// Parses a spec string and builds the group.
    pub fn parse(spec: &str) -> Result<Self> {
        GroupTable::build(&spec.parse()?)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            name: self.name.clone(),
            order: self.order,
            mul: self.mul.clone(),
            identity: self.identity,
        }
    }

    pub fn from_json(json: GroupJson) -> Result<Self> {
        GroupTable::from_table(json.name, json.order, json.mul, json.identity, None)
    }
}

/// Serialized form of a group: name, order, row-major table, identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub name: String,
    pub order: usize,
    pub mul: Vec<usize>,
    pub identity: usize,
}

impl Serialize for GroupTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = GroupJson::deserialize(d)?;
        GroupTable::from_json(json).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Text description of a built-in group.
///
/// Grammar: `cyclic:N`, `dihedral:N`, `symmetric:N`, `quaternion8`,
/// `product(SPEC,SPEC)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Quaternion8,
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    pub fn order(&self) -> usize {
        match self {
            GroupSpec::Cyclic(n) => *n,
            GroupSpec::Dihedral(n) => 2 * n,
            GroupSpec::Symmetric(n) => (1..=*n).product(),
            GroupSpec::Quaternion8 => 8,
            GroupSpec::Product(a, b) => a.order().saturating_mul(b.order()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::GroupSpec { spec: self.to_string(), reason: reason.to_string() })
        };
        match self {
            GroupSpec::Cyclic(n) if *n < 1 || *n > MAX_ORDER => bad("cyclic order must be in 1..=256"),
            GroupSpec::Dihedral(n) if *n < 2 || 2 * n > MAX_ORDER => {
                bad("dihedral parameter must be in 2..=128")
            }
            GroupSpec::Symmetric(n) if *n < 1 || *n > 5 => bad("symmetric degree must be in 1..=5"),
            GroupSpec::Product(a, b) => {
                a.validate()?;
                b.validate()?;
                if self.order() > MAX_ORDER {
                    bad("product order exceeds 256")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// The groups exercised by the verification suites.
    pub fn builtins() -> Vec<GroupSpec> {
        use GroupSpec::*;
        vec![
            Cyclic(2),
            Cyclic(4),
            Cyclic(6),
            Product(Box::new(Cyclic(2)), Box::new(Cyclic(2))),
            Product(Box::new(Cyclic(2)), Box::new(Cyclic(3))),
            Dihedral(4),
            Quaternion8,
            Symmetric(3),
            Symmetric(4),
        ]
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Quaternion8 => write!(f, "quaternion8"),
            GroupSpec::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::GroupSpec { spec: s.to_string(), reason: reason.to_string() };
        let t = s.trim();
        if t == "quaternion8" {
            return Ok(GroupSpec::Quaternion8);
        }
        if let Some(inner) = t.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
            // split at the top-level comma
            let mut depth = 0usize;
            let mut split = None;
            for (i, c) in inner.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => depth = depth.checked_sub(1).ok_or_else(|| err("unbalanced parentheses"))?,
                    ',' if depth == 0 => {
                        split = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let i = split.ok_or_else(|| err("product needs two factors"))?;
            let a: GroupSpec = inner[..i].parse()?;
            let b: GroupSpec = inner[i + 1..].parse()?;
            let spec = GroupSpec::Product(Box::new(a), Box::new(b));
            spec.validate()?;
            return Ok(spec);
        }
        let (kind, arg) = t.split_once(':').ok_or_else(|| err("expected `kind:N`"))?;
        let n: i64 = arg.trim().parse().map_err(|_| err("parameter is not an integer"))?;
        if n < 0 {
            return Err(err("parameter must be non-negative"));
        }
        let n = n as usize;
        let spec = match kind.trim() {
            "cyclic" => GroupSpec::Cyclic(n),
            "dihedral" => GroupSpec::Dihedral(n),
            "symmetric" => GroupSpec::Symmetric(n),
            _ => return Err(err("unknown group family")),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The integer lattice ℤ. Weak* statements on ℤ are tested against point
/// masses inside `[-window, window]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeGroup {
    window: i64,
}

impl LatticeGroup {
    pub const DEFAULT_WINDOW: i64 = 64;

    pub fn new(window: i64) -> Result<Self> {
        if window < 1 {
            return Err(Error::InvalidArgument(format!("window must be >= 1, got {window}")));
        }
        Ok(Self { window })
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn contains(&self, n: i64) -> bool {
        n.abs() <= self.window
    }
}

impl Default for LatticeGroup {
    fn default() -> Self {
        Self { window: Self::DEFAULT_WINDOW }
    }
}
