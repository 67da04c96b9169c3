//! The group corpus: named families, their pairwise direct products,
//! fingerprint dedup, manifests and the JSON group file format.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::automorphism::Automorphism;
use crate::constructions::semidirect_with_cyclic_capped;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, DEFAULT_ORDER_CAP};

/// Largest order `enumerate_catalog` accepts.
pub const CATALOG_ORDER_CAP: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtraspecialKind {
    /// Exponent `p` for odd `p`; the `D8` central-product type for `p = 2`.
    ExponentP,
    /// Exponent `p^2` for odd `p`; the `Q8` type for `p = 2`.
    ExponentP2,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AutRef {
    /// `x ↦ x^r`; an automorphism only on abelian bases.
    Power {
        r: i64,
    },
    Images {
        images: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic {
        m: u32,
    },
    /// Direct product of cyclic groups of the listed orders.
    Abelian {
        factors: Vec<u32>,
    },
    /// Order `2m`.
    Dihedral {
        m: u32,
    },
    /// Order `4m`.
    Dicyclic {
        m: u32,
    },
    Symmetric {
        k: u32,
    },
    Alternating {
        k: u32,
    },
    ElementaryAbelian {
        p: u32,
        k: u32,
    },
    /// Order `p^(1+2 rank)`.
    Extraspecial {
        p: u32,
        kind: ExtraspecialKind,
        #[serde(default = "one")]
        rank: u32,
    },
    Product {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
    Semidirect {
        base: Box<GroupSpec>,
        aut: AutRef,
        n: u32,
    },
    Imported {
        file: String,
    },
}

fn one() -> u32 {
    1
}

impl GroupSpec {
    pub fn product(left: GroupSpec, right: GroupSpec) -> Self {
        GroupSpec::Product { left: Box::new(left), right: Box::new(right) }
    }

    pub fn semidirect(base: GroupSpec, aut: AutRef, n: u32) -> Self {
        GroupSpec::Semidirect { base: Box::new(base), aut, n }
    }

    /// Order without building the group; `None` for imported files or on
    /// overflow.
    pub fn order(&self) -> Option<u64> {
        use GroupSpec::*;
        let pow = |p: u32, e: u32| (p as u64).checked_pow(e);
        match self {
            Cyclic { m } => Some(*m as u64),
            Abelian { factors } => factors.iter().try_fold(1u64, |acc, &f| acc.checked_mul(f as u64)),
            Dihedral { m } => (*m as u64).checked_mul(2),
            Dicyclic { m } => (*m as u64).checked_mul(4),
            Symmetric { k } => (1..=*k as u64).try_fold(1u64, |acc, i| acc.checked_mul(i)),
            Alternating { k } => Symmetric { k: *k }.order().map(|o| if *k >= 2 { o / 2 } else { o }),
            ElementaryAbelian { p, k } => pow(*p, *k),
            Extraspecial { p, rank, .. } => rank.checked_mul(2).and_then(|e| pow(*p, e + 1)),
            Product { left, right } => left.order()?.checked_mul(right.order()?),
            Semidirect { base, n, .. } => base.order()?.checked_mul(*n as u64),
            Imported { .. } => None,
        }
    }

    /// Tie-break among specs with equal fingerprints; lower is preferred.
    pub fn family_rank(&self) -> u32 {
        use GroupSpec::*;
        match self {
            Cyclic { .. } => 0,
            ElementaryAbelian { .. } => 1,
            Abelian { .. } => 2,
            Symmetric { .. } => 3,
            Alternating { .. } => 4,
            Dihedral { .. } => 5,
            Dicyclic { .. } => 6,
            Extraspecial { .. } => 7,
            Semidirect { .. } => 8,
            Product { .. } => 9,
            Imported { .. } => 10,
        }
    }

    /// Short display name such as `C6`, `D8`, `Q8`, `S3xC2`.
    pub fn name(&self) -> String {
        use GroupSpec::*;
        match self {
            Cyclic { m } => format!("C{m}"),
            Abelian { factors } => factors.iter().map(|f| format!("C{f}")).collect::<Vec<_>>().join("x"),
            Dihedral { m } => format!("D{}", 2 * m),
            Dicyclic { m } if m.is_power_of_two() => format!("Q{}", 4 * m),
            Dicyclic { m } => format!("Dic{m}"),
            Symmetric { k } => format!("S{k}"),
            Alternating { k } => format!("A{k}"),
            ElementaryAbelian { p, k } => format!("C{p}^{k}"),
            Extraspecial { p, kind, rank } => {
                let tag = match (p, kind) {
                    (2, ExtraspecialKind::ExponentP) => "+".to_string(),
                    (2, ExtraspecialKind::ExponentP2) => "-".to_string(),
                    (_, ExtraspecialKind::ExponentP) => format!("e{p}"),
                    (_, ExtraspecialKind::ExponentP2) => format!("e{}", p * p),
                };
                format!("ES({p}^1+{},{tag})", 2 * rank)
            }
            Product { left, right } => format!("{}x{}", left.operand_name(), right.operand_name()),
            Semidirect { base, aut, n } => {
                let action = match aut {
                    AutRef::Power { r } => format!("x^{r}"),
                    AutRef::Images { images } => {
                        let digest = Sha256::digest(serde_json::to_vec(images).expect("serializable"));
                        format!("#{}", &hex::encode(digest)[..8])
                    }
                };
                format!("{}:C{n}<{action}>", base.operand_name())
            }
            Imported { file } => {
                Path::new(file).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| file.clone())
            }
        }
    }

    fn operand_name(&self) -> String {
        match self {
            GroupSpec::Product { .. } | GroupSpec::Semidirect { .. } => format!("({})", self.name()),
            _ => self.name(),
        }
    }
}

/// Call syntax, e.g. `product(dihedral(4),cyclic(3))`; parsed back by
/// [`GroupSpec::from_str`].
impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupSpec::*;
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            Cyclic { m } => write!(f, "cyclic({m})"),
            Abelian { factors } => write!(f, "abelian({})", join(factors)),
            Dihedral { m } => write!(f, "dihedral({m})"),
            Dicyclic { m } => write!(f, "dicyclic({m})"),
            Symmetric { k } => write!(f, "symmetric({k})"),
            Alternating { k } => write!(f, "alternating({k})"),
            ElementaryAbelian { p, k } => write!(f, "elementary_abelian({p},{k})"),
            Extraspecial { p, kind, rank } => {
                let kind = match kind {
                    ExtraspecialKind::ExponentP => "exponent_p",
                    ExtraspecialKind::ExponentP2 => "exponent_p2",
                };
                write!(f, "extraspecial({p},{kind},{rank})")
            }
            Product { left, right } => write!(f, "product({left},{right})"),
            Semidirect { base, aut, n } => {
                let aut = match aut {
                    AutRef::Power { r } => format!("power({r})"),
                    AutRef::Images { images } => format!("images({})", join(images)),
                };
                write!(f, "semidirect({base},{aut},{n})")
            }
            Imported { file } => write!(f, "imported({file:?})"),
        }
    }
}

#[derive(Debug)]
enum Node {
    Atom(String),
    Call(String, Vec<Node>),
}

struct SpecParser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> SpecParser<'a> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("group spec `{}`: {what} at offset {}", self.text, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn node(&mut self) -> Result<Node> {
        self.skip_ws();
        if self.peek() == Some('"') {
            let rest = &self.text[self.pos + 1..];
            let end = rest.find('"').ok_or_else(|| self.error("unterminated string"))?;
            let atom = rest[..end].to_string();
            self.pos += end + 2;
            return Ok(Node::Atom(atom));
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if matches!(c, '(' | ')' | ',') || c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
        let head = self.text[start..self.pos].to_string();
        if head.is_empty() {
            return Err(self.error("expected a name"));
        }
        self.skip_ws();
        if self.peek() != Some('(') {
            return Ok(Node::Atom(head));
        }
        self.pos += 1;
        let mut args = Vec::new();
        self.skip_ws();
        if self.peek() == Some(')') {
            self.pos += 1;
            return Ok(Node::Call(head, args));
        }
        loop {
            args.push(self.node()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(Node::Call(head, args));
                }
                _ => return Err(self.error("expected `,` or `)`")),
            }
        }
    }
}

fn atom_number<T: FromStr>(node: &Node) -> Result<T> {
    match node {
        Node::Atom(a) => a.parse().map_err(|_| Error::Parse(format!("expected a number, got `{a}`"))),
        Node::Call(h, _) => Err(Error::Parse(format!("expected a number, got `{h}(..)`"))),
    }
}

fn spec_from_node(node: &Node) -> Result<GroupSpec> {
    let (head, args) = match node {
        Node::Call(h, a) => (h.as_str(), a.as_slice()),
        Node::Atom(a) => return Err(Error::Parse(format!("expected a family call, got `{a}`"))),
    };
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!("`{head}` takes {n} argument(s), got {}", args.len())))
        }
    };
    let numbers = || args.iter().map(atom_number::<u32>).collect::<Result<Vec<_>>>();
    Ok(match head {
        "cyclic" => {
            arity(1)?;
            GroupSpec::Cyclic { m: atom_number(&args[0])? }
        }
        "abelian" => GroupSpec::Abelian { factors: numbers()? },
        "dihedral" => {
            arity(1)?;
            GroupSpec::Dihedral { m: atom_number(&args[0])? }
        }
        "dicyclic" => {
            arity(1)?;
            GroupSpec::Dicyclic { m: atom_number(&args[0])? }
        }
        "symmetric" => {
            arity(1)?;
            GroupSpec::Symmetric { k: atom_number(&args[0])? }
        }
        "alternating" => {
            arity(1)?;
            GroupSpec::Alternating { k: atom_number(&args[0])? }
        }
        "elementary_abelian" => {
            arity(2)?;
            GroupSpec::ElementaryAbelian { p: atom_number(&args[0])?, k: atom_number(&args[1])? }
        }
        "extraspecial" => {
            if !(2..=3).contains(&args.len()) {
                return Err(Error::Parse("`extraspecial` takes 2 or 3 arguments".into()));
            }
            let kind = match &args[1] {
                Node::Atom(a) if a == "exponent_p" => ExtraspecialKind::ExponentP,
                Node::Atom(a) if a == "exponent_p2" => ExtraspecialKind::ExponentP2,
                _ => return Err(Error::Parse("extraspecial type is `exponent_p` or `exponent_p2`".into())),
            };
            let rank = args.get(2).map(atom_number).transpose()?.unwrap_or(1);
            GroupSpec::Extraspecial { p: atom_number(&args[0])?, kind, rank }
        }
        "product" => {
            arity(2)?;
            GroupSpec::product(spec_from_node(&args[0])?, spec_from_node(&args[1])?)
        }
        "semidirect" => {
            arity(3)?;
            let aut = match &args[1] {
                Node::Call(h, a) if h == "power" && a.len() == 1 => AutRef::Power { r: atom_number(&a[0])? },
                Node::Call(h, a) if h == "images" => {
                    AutRef::Images { images: a.iter().map(atom_number).collect::<Result<_>>()? }
                }
                _ => return Err(Error::Parse("automorphism is `power(r)` or `images(..)`".into())),
            };
            GroupSpec::semidirect(spec_from_node(&args[0])?, aut, atom_number(&args[2])?)
        }
        "imported" => {
            arity(1)?;
            match &args[0] {
                Node::Atom(file) => GroupSpec::Imported { file: file.clone() },
                Node::Call(..) => return Err(Error::Parse("`imported` takes a file path".into())),
            }
        }
        other => return Err(Error::UnknownFamily(other.to_string())),
    })
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut parser = SpecParser { text, pos: 0 };
        let node = parser.node()?;
        parser.skip_ws();
        if parser.pos != text.len() {
            return Err(parser.error("trailing input"));
        }
        spec_from_node(&node)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

/// Builds the group named by `spec` with the default order cap.
pub fn generate_family(spec: &GroupSpec) -> Result<FiniteGroup> {
    generate_family_capped(spec, DEFAULT_ORDER_CAP)
}

pub fn generate_family_capped(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
    use GroupSpec::*;
    if let Some(order) = spec.order() {
        if order > cap as u64 {
            return Err(Error::OrderCapExceeded { cap });
        }
    } else if !matches!(spec, Imported { .. } | Product { .. } | Semidirect { .. }) {
        return Err(Error::OrderCapExceeded { cap });
    }
    let group = match spec {
        Cyclic { m } => {
            let m = positive(*m, "cyclic order")?;
            FiniteGroup::from_fn(m, |a, b| (a + b) % m)?
        }
        Abelian { factors } => {
            let factors = factors.iter().map(|&f| positive(f, "abelian factor")).collect::<Result<Vec<_>>>()?;
            abelian(&factors)?
        }
        Dihedral { m } => {
            let m = positive(*m, "dihedral parameter")?;
            // r^i s^a at index a*m + i
            FiniteGroup::from_fn(2 * m, |x, y| {
                let (i, a, k, b) = (x % m, x / m, y % m, y / m);
                let rot = if a == 0 { i + k } else { i + m - k };
                ((a + b) % 2) * m + rot % m
            })?
        }
        Dicyclic { m } => {
            let m = positive(*m, "dicyclic parameter")?;
            let h = 2 * m;
            // a^i x^j at index j*2m + i; x a x^{-1} = a^{-1}, x^2 = a^m
            FiniteGroup::from_fn(2 * h, |x, y| {
                let (i, j, k, l) = (x % h, x / h, y % h, y / h);
                if j == 0 {
                    l * h + (i + k) % h
                } else if l == 0 {
                    h + (i + h - k) % h
                } else {
                    (i + h - k + m) % h
                }
            })?
        }
        Symmetric { k } => {
            let k = positive(*k, "symmetric degree")?;
            if k == 1 {
                FiniteGroup::trivial()
            } else {
                let swap = (0..k).map(|i| if i < 2 { 1 - i } else { i }).collect();
                let cycle = (0..k).map(|i| (i + 1) % k).collect();
                FiniteGroup::from_permutations_with_cap(&[swap, cycle], cap)?
            }
        }
        Alternating { k } => {
            let k = positive(*k, "alternating degree")?;
            if k < 3 {
                FiniteGroup::trivial()
            } else {
                let gens: Vec<Vec<usize>> = (2..k)
                    .map(|t| {
                        (0..k)
                            .map(|i| {
                                if i == 0 {
                                    1
                                } else if i == 1 {
                                    t
                                } else if i == t {
                                    0
                                } else {
                                    i
                                }
                            })
                            .collect()
                    })
                    .collect();
                FiniteGroup::from_permutations_with_cap(&gens, cap)?
            }
        }
        ElementaryAbelian { p, k } => {
            if !is_prime(*p) {
                return Err(invalid(format!("elementary abelian needs a prime, got {p}")));
            }
            abelian(&vec![*p as usize; *k as usize])?
        }
        Extraspecial { p, kind, rank } => {
            if !is_prime(*p) || *rank == 0 {
                return Err(invalid(format!("extraspecial needs a prime and rank >= 1, got p={p} rank={rank}")));
            }
            extraspecial(*p as usize, *kind, *rank as usize)?
        }
        Product { left, right } => {
            let l = generate_family_capped(left, cap)?;
            let r = generate_family_capped(right, cap)?;
            l.direct_product_with_cap(&r, cap)?
        }
        Semidirect { base, aut, n } => {
            let g = generate_family_capped(base, cap)?;
            let images: Vec<usize> = match aut {
                AutRef::Power { r } => (0..g.order()).map(|x| g.pow(x, *r)).collect(),
                AutRef::Images { images } => images.iter().map(|&i| i as usize).collect(),
            };
            let alpha = Automorphism::new(&g, &images)?;
            semidirect_with_cyclic_capped(&g, &alpha, *n, cap)?.group
        }
        Imported { file } => {
            let g = import_group_file(Path::new(file))?;
            if g.order() > cap {
                return Err(Error::OrderCapExceeded { cap });
            }
            g
        }
    };
    Ok(group)
}

fn positive(v: u32, what: &str) -> Result<usize> {
    if v == 0 {
        Err(invalid(format!("{what} must be positive")))
    } else {
        Ok(v as usize)
    }
}

/// Mixed radix, first factor most significant.
fn abelian(factors: &[usize]) -> Result<FiniteGroup> {
    let order = factors
        .iter()
        .try_fold(1usize, |acc, &f| acc.checked_mul(f))
        .ok_or(Error::OrderCapExceeded { cap: DEFAULT_ORDER_CAP })?;
    FiniteGroup::from_fn(order, |a, b| {
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for &f in factors.iter().rev() {
            out += ((a % f + b % f) % f) * place;
            place *= f;
            a /= f;
            b /= f;
        }
        out
    })
}

/// Extraspecial group of order `p^(1+2r)`.
///
/// Odd `p`, exponent `p`: pairs `(v, c)` with `v ∈ F_p^{2r}` and the cocycle
/// `a·b'`. Odd `p`, exponent `p^2`: `M(p) = C_{p^2} ⋊ C_p` centrally
/// amalgamated with `r - 1` Heisenberg factors. `p = 2`: the cocycle
/// `Σ a_i b'_i`, plus `a_1 a'_1 + b_1 b'_1` for the `Q8` type.
fn extraspecial(p: usize, kind: ExtraspecialKind, r: usize) -> Result<FiniteGroup> {
    let order = p
        .checked_pow((2 * r + 1) as u32)
        .filter(|&o| o <= DEFAULT_ORDER_CAP)
        .ok_or(Error::OrderCapExceeded { cap: DEFAULT_ORDER_CAP })?;
    let digits = |mut x: usize, len: usize| {
        let mut d = vec![0; len];
        for slot in d.iter_mut().rev() {
            *slot = x % p;
            x /= p;
        }
        d
    };
    let pack = |d: &[usize]| d.iter().fold(0, |acc, &v| acc * p + v);
    if p != 2 && kind == ExtraspecialKind::ExponentP2 {
        // (x ∈ Z_{p^2}, y ∈ Z_p, a, b ∈ F_p^{r-1}) packed as [x, y, a.., b..]
        let pp = p * p;
        let m = r - 1;
        let low = p.pow((2 * r - 1) as u32);
        return FiniteGroup::from_fn(order, |u, v| {
            let (xu, du) = (u / low, digits(u % low, 2 * r - 1));
            let (xv, dv) = (v / low, digits(v % low, 2 * r - 1));
            let twist = (1..=du[0]).fold(1, |acc, _| acc * (1 + p) % pp);
            let dot: usize = (0..m).map(|i| du[1 + i] * dv[1 + m + i]).sum();
            let x = (xu + xv * twist + p * dot) % pp;
            let mut d = vec![(du[0] + dv[0]) % p];
            d.extend((1..2 * r - 1).map(|i| (du[i] + dv[i]) % p));
            x * low + pack(&d)
        });
    }
    let minus = p == 2 && kind == ExtraspecialKind::ExponentP2;
    // packed as [c, a_1..a_r, b_1..b_r]
    FiniteGroup::from_fn(order, |u, v| {
        let du = digits(u, 2 * r + 1);
        let dv = digits(v, 2 * r + 1);
        let mut cocycle: usize = (0..r).map(|i| du[1 + i] * dv[1 + r + i]).sum();
        if minus {
            cocycle += du[1] * dv[1] + du[1 + r] * dv[1 + r];
        }
        let mut d: Vec<usize> = (0..=2 * r).map(|i| (du[i] + dv[i]) % p).collect();
        d[0] = (d[0] + cocycle) % p;
        pack(&d)
    })
}

/// Isomorphism invariants used for dedup; field order is the sort order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    /// `(element order, count)` ascending.
    pub element_orders: Vec<(u32, usize)>,
    /// Conjugacy class sizes ascending, with multiplicity.
    pub class_sizes: Vec<usize>,
    pub center_order: usize,
    pub derived_order: usize,
    pub exponent: u64,
}

pub fn fingerprint(g: &FiniteGroup) -> Fingerprint {
    let mut histogram: BTreeMap<u32, usize> = BTreeMap::new();
    for &o in g.element_orders() {
        *histogram.entry(o).or_default() += 1;
    }
    let mut class_sizes: Vec<usize> = g.conjugacy_classes().sizes.iter().map(|&s| s as usize).collect();
    class_sizes.sort_unstable();
    Fingerprint {
        order: g.order(),
        element_orders: histogram.into_iter().collect(),
        class_sizes,
        center_order: g.center().order(),
        derived_order: g.derived_subgroup().order(),
        exponent: g.exponent(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogFilter {
    pub solvable_only: bool,
    /// Keep only groups whose order is a power of this prime.
    pub p_group: Option<u64>,
    /// Keep only groups whose exponent divides this value.
    pub exponent_divides: Option<u64>,
}

impl CatalogFilter {
    pub fn solvable() -> Self {
        CatalogFilter { solvable_only: true, ..Self::default() }
    }

    pub fn p_groups(p: u64) -> Self {
        CatalogFilter { p_group: Some(p), ..Self::default() }
    }

    fn order_allowed(&self, order: u64) -> bool {
        match self.p_group {
            Some(p) => {
                let mut o = order;
                while o > 1 && o % p == 0 {
                    o /= p;
                }
                o == 1
            }
            None => true,
        }
    }

    fn accepts(&self, g: &FiniteGroup) -> bool {
        self.order_allowed(g.order() as u64)
            && (!self.solvable_only || g.is_solvable())
            && self.exponent_divides.is_none_or(|e| e % g.exponent() == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Family,
    Product,
    Extra,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub spec: GroupSpec,
    pub name: String,
    pub fingerprint: Fingerprint,
    pub source: Source,
    /// Further specs with the same fingerprint that were dropped.
    pub merged: usize,
    pub group: FiniteGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub spec: GroupSpec,
    pub name: String,
    pub fingerprint: Fingerprint,
    pub source: Source,
    pub merged: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub max_order: usize,
    pub filter: CatalogFilter,
    pub entries: Vec<ManifestEntry>,
    /// Sum of `merged` over entries.
    pub fingerprint_merges: usize,
    /// SHA-256 of the JSON encoding of the fields above.
    pub hash: String,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub max_order: usize,
    pub filter: CatalogFilter,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CatalogEntry> {
        self.entries.iter()
    }

    /// Entries passing `keep`, with the manifest identity recomputed.
    pub fn restrict(&self, keep: impl Fn(&CatalogEntry) -> bool) -> Catalog {
        Catalog {
            max_order: self.max_order,
            filter: self.filter.clone(),
            entries: self.entries.iter().filter(|e| keep(e)).cloned().collect(),
        }
    }

    pub fn manifest(&self) -> Manifest {
        let entries: Vec<ManifestEntry> = self
            .entries
            .iter()
            .map(|e| ManifestEntry {
                spec: e.spec.clone(),
                name: e.name.clone(),
                fingerprint: e.fingerprint.clone(),
                source: e.source,
                merged: e.merged,
            })
            .collect();
        let fingerprint_merges = entries.iter().map(|e| e.merged).sum();
        let body = serde_json::to_vec(&(self.max_order, &self.filter, &entries, fingerprint_merges))
            .expect("manifest serializes");
        let hash = hex::encode(Sha256::digest(body));
        Manifest { max_order: self.max_order, filter: self.filter.clone(), entries, fingerprint_merges, hash }
    }

    pub fn hash(&self) -> String {
        self.manifest().hash
    }
}

/// All family instances up to `max_order`.
pub fn family_specs(max_order: usize) -> Vec<GroupSpec> {
    use GroupSpec::*;
    let max = max_order as u64;
    let mut specs = Vec::new();
    for m in 1..=max_order as u32 {
        specs.push(Cyclic { m });
    }
    let mut stack: Vec<Vec<u32>> = (2..=max_order as u32).map(|d| vec![d]).collect();
    while let Some(factors) = stack.pop() {
        let order: u64 = factors.iter().map(|&f| f as u64).product();
        let last = *factors.last().expect("nonempty");
        let mut next = last;
        while order * next as u64 <= max {
            let mut f = factors.clone();
            f.push(next);
            specs.push(Abelian { factors: f.clone() });
            stack.push(f);
            next += last;
        }
    }
    for p in (2..=max_order as u32).filter(|&p| is_prime(p)) {
        for k in 2.. {
            let spec = ElementaryAbelian { p, k };
            if spec.order().is_none_or(|o| o > max) {
                break;
            }
            specs.push(spec);
        }
        for rank in 1.. {
            let probe = Extraspecial { p, kind: ExtraspecialKind::ExponentP, rank };
            if probe.order().is_none_or(|o| o > max) {
                break;
            }
            for kind in [ExtraspecialKind::ExponentP, ExtraspecialKind::ExponentP2] {
                specs.push(Extraspecial { p, kind, rank });
            }
        }
    }
    specs.extend((3..).map(|m| Dihedral { m }).take_while(|s| s.order().is_some_and(|o| o <= max)));
    specs.extend((2..).map(|m| Dicyclic { m }).take_while(|s| s.order().is_some_and(|o| o <= max)));
    specs.extend((3..).map(|k| Symmetric { k }).take_while(|s| s.order().is_some_and(|o| o <= max)));
    specs.extend((4..).map(|k| Alternating { k }).take_while(|s| s.order().is_some_and(|o| o <= max)));
    specs.extend(metacyclic_specs(max_order));
    if max_order >= 24 {
        specs.push(sl23_spec());
    }
    specs
}

/// `C_m ⋊ C_k` by `x ↦ x^r`, one `r` per cyclic subgroup generator class.
fn metacyclic_specs(max_order: usize) -> Vec<GroupSpec> {
    let mut specs = Vec::new();
    for m in 3..=max_order as u64 / 2 {
        for k in 2..=max_order as u64 / m {
            for r in 2..m {
                if r.gcd(&m) != 1 || pow_mod(r, k, m) != 1 {
                    continue;
                }
                let canonical = (1..k).filter(|j| j.gcd(&k) == 1).map(|j| pow_mod(r, j, m)).min().unwrap_or(r);
                if canonical == r {
                    specs.push(GroupSpec::semidirect(
                        GroupSpec::Cyclic { m: m as u32 },
                        AutRef::Power { r: r as i64 },
                        k as u32,
                    ));
                }
            }
        }
    }
    specs
}

fn pow_mod(base: u64, exp: u64, m: u64) -> u64 {
    (0..exp).fold(1 % m, |acc, _| acc * base % m)
}

/// `Q8 ⋊ C3`, which is `SL(2,3)`.
fn sl23_spec() -> GroupSpec {
    let base = GroupSpec::Dicyclic { m: 2 };
    let q8 = generate_family(&base).expect("Q8 builds");
    let alpha = q8
        .automorphisms_of_order_dividing(3)
        .expect("Aut(Q8) is small")
        .iter()
        .find(|a| a.order() == 3)
        .expect("Q8 has an automorphism of order 3")
        .clone();
    let images = alpha.images().into_iter().map(|i| i as u32).collect();
    GroupSpec::semidirect(base, AutRef::Images { images }, 3)
}

struct Built {
    spec: GroupSpec,
    fingerprint: Fingerprint,
    source: Source,
    merged: usize,
    group: FiniteGroup,
}

fn sort_key(b: &Built) -> (usize, &Fingerprint, u32, String) {
    (b.fingerprint.order, &b.fingerprint, b.spec.family_rank(), b.spec.name())
}

fn build_all(specs: Vec<(GroupSpec, Source)>) -> Result<Vec<Built>> {
    specs
        .into_par_iter()
        .map(|(spec, source)| {
            let group = generate_family(&spec)?;
            Ok(Built { fingerprint: fingerprint(&group), spec, source, merged: 0, group })
        })
        .collect()
}

/// Sorts and keeps the preferred spec per fingerprint.
fn dedup(mut built: Vec<Built>) -> Vec<CatalogEntry> {
    built.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
    let mut out: Vec<CatalogEntry> = Vec::new();
    for b in built {
        if let Some(last) = out.last_mut() {
            if last.fingerprint == b.fingerprint {
                last.merged += 1 + b.merged;
                continue;
            }
        }
        out.push(CatalogEntry {
            name: b.spec.name(),
            spec: b.spec,
            fingerprint: b.fingerprint,
            source: b.source,
            merged: b.merged,
            group: b.group,
        });
    }
    out
}

/// Families and their pairwise direct products up to `max_order`, one entry
/// per fingerprint, ordered by order then fingerprint.
pub fn enumerate_catalog(max_order: usize, filter: &CatalogFilter) -> Result<Catalog> {
    enumerate_catalog_with(max_order, filter, &[])
}

/// As [`enumerate_catalog`], with extra specs (e.g. imported files) joined in
/// before dedup.
pub fn enumerate_catalog_with(max_order: usize, filter: &CatalogFilter, extra: &[GroupSpec]) -> Result<Catalog> {
    if max_order > CATALOG_ORDER_CAP {
        return Err(Error::OrderCapExceeded { cap: CATALOG_ORDER_CAP });
    }
    let max = max_order as u64;
    let families: Vec<(GroupSpec, Source)> = family_specs(max_order)
        .into_iter()
        .filter(|s| s.order().is_some_and(|o| o <= max && filter.order_allowed(o)))
        .map(|s| (s, Source::Family))
        .collect();
    let bases = dedup(build_all(families)?);
    // Abelian-by-abelian products are already abelian family instances.
    let mut products = Vec::new();
    for (i, a) in bases.iter().enumerate() {
        for b in &bases[i..] {
            let order = (a.group.order() * b.group.order()) as u64;
            if a.group.order() == 1 || b.group.order() == 1 || order > max || !filter.order_allowed(order) {
                continue;
            }
            if a.group.is_abelian() && b.group.is_abelian() {
                continue;
            }
            if filter.solvable_only && !(a.group.is_solvable() && b.group.is_solvable()) {
                continue;
            }
            products.push((GroupSpec::product(a.spec.clone(), b.spec.clone()), Source::Product));
        }
    }
    let mut extras = Vec::new();
    for spec in extra {
        let group = generate_family(spec)?;
        if group.order() <= max_order {
            extras.push(Built {
                fingerprint: fingerprint(&group),
                spec: spec.clone(),
                source: Source::Extra,
                merged: 0,
                group,
            });
        }
    }
    let mut all: Vec<Built> = bases
        .into_iter()
        .map(|e| Built { spec: e.spec, fingerprint: e.fingerprint, source: e.source, merged: e.merged, group: e.group })
        .collect();
    all.extend(build_all(products)?);
    all.extend(extras);
    let mut entries = dedup(all);
    entries.retain(|e| filter.accepts(&e.group));
    Ok(Catalog { max_order, filter: filter.clone(), entries })
}

/// The JSON group document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    /// Permutations as 0-based image arrays.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<usize>>>,
}

pub fn import_group(document: &str) -> Result<FiniteGroup> {
    let file: GroupFile = serde_json::from_str(document)?;
    group_from_file(&file)
}

pub fn group_from_file(file: &GroupFile) -> Result<FiniteGroup> {
    match (&file.table, &file.generators) {
        (Some(table), None) => FiniteGroup::from_table(table),
        (None, Some(gens)) => FiniteGroup::from_permutations(gens),
        _ => Err(Error::Parse("group file needs exactly one of `table` or `generators`".into())),
    }
}

pub fn import_group_file(path: &Path) -> Result<FiniteGroup> {
    import_group(&std::fs::read_to_string(path)?)
}

pub fn export_group(g: &FiniteGroup, name: &str) -> GroupFile {
    GroupFile { name: name.to_string(), table: Some(g.table_rows()), generators: None }
}

pub fn export_group_string(g: &FiniteGroup, name: &str) -> String {
    serde_json::to_string(&export_group(g, name)).expect("group file serializes")
}

/// An automorphism file is a JSON array of image indices.
pub fn import_automorphism(g: &FiniteGroup, document: &str) -> Result<Automorphism> {
    let images: Vec<usize> = serde_json::from_str(document)?;
    Automorphism::new(g, &images)
}

pub fn export_automorphism(alpha: &Automorphism) -> String {
    serde_json::to_string(&alpha.images()).expect("images serialize")
}
