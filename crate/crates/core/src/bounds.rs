//! Exact evaluation of the explicit bound functions.
//!
//! Every asymptotic constant is a named entry of [`Constants`] (default 1)
//! and the linkage function `f_ul` is a plug-in ([`Ful`]). Logarithms are
//! `⌈log2 x⌉` with `log 0 = log 1 = 0`. Values are exact; a value longer
//! than the bit cap is recorded as beyond range, and every operation on
//! it stays beyond range (all catalog operations are nondecreasing).

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

/// An exact value, or `None` when it exceeds the bit cap.
pub type Num = Option<BigUint>;

/// Default bit cap on any value.
pub const DEFAULT_MAX_BITS: u64 = 1 << 20;

/// Named constants for the asymptotic bounds.
pub const CONSTANT_NAMES: &[(&str, &str)] = &[
    ("c_flatwall", "flat wall height factor c·t²"),
    ("c_folio", "exponent factor of the folio count"),
    ("c_var", "exponent factor of the variation count"),
    ("c_hom", "factor of the homogeneous wall height"),
    ("c_irr", "factor of the irrelevant wall height"),
    ("c_grid", "grid size containing every planar graph on n vertices, c·n"),
    ("c_wall_tw", "exponent factor of the treewidth forcing a wall"),
    ("c_detail", "detail of the obstructions, c·s²"),
    ("c_rep", "innermost exponent factor of the representative count"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants(pub BTreeMap<String, u64>);

impl Default for Constants {
    fn default() -> Self {
        Constants(CONSTANT_NAMES.iter().map(|(n, _)| (n.to_string(), 1)).collect())
    }
}

impl Constants {
    /// Defaults overridden by `json`, a map from constant names to values.
    pub fn from_json(json: &str) -> Result<Self> {
        let over: BTreeMap<String, u64> = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        let mut c = Constants::default();
        for (k, v) in over {
            if !c.0.contains_key(&k) {
                return Err(Error::Configuration(format!("unknown constant {k}")));
            }
            c.0.insert(k, v);
        }
        Ok(c)
    }

    pub fn get(&self, name: &str) -> u64 {
        self.0.get(name).copied().unwrap_or(1)
    }
}

/// The linkage function `f_ul`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Ful {
    /// Placeholder `f_ul(x) = x`, refused by bounds that need a real value.
    #[default]
    Identity,
    /// `Σ c_i x^i` with nonnegative coefficients.
    Polynomial(Vec<u64>),
    /// `2^(Σ c_i x^i)`.
    Exponential(Vec<u64>),
    /// Explicit values for `x = 0, 1, ...`; must be nondecreasing.
    Table(Vec<u64>),
}

impl Ful {
    pub fn from_json(json: &str) -> Result<Self> {
        let f: Ful = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        if let Ful::Table(t) = &f {
            if t.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Configuration("f_ul table must be nondecreasing".into()));
            }
        }
        Ok(f)
    }

    pub fn is_placeholder(&self) -> bool {
        matches!(self, Ful::Identity)
    }

    fn eval(&self, x: &BigUint, cap: u64) -> Result<Num> {
        let poly = |cs: &[u64]| -> Num {
            let mut acc = BigUint::zero();
            let mut pw = BigUint::one();
            for &c in cs {
                acc += &pw * c;
                pw = capped(&pw * x, cap)?;
            }
            capped(acc, cap)
        };
        Ok(match self {
            Ful::Identity => Some(x.clone()),
            Ful::Polynomial(cs) => poly(cs),
            Ful::Exponential(cs) => pow2(&poly(cs), cap),
            Ful::Table(t) => {
                let i = x.to_usize().filter(|&i| i < t.len()).ok_or_else(|| Error::Configuration(format!("f_ul table has no entry for {x}")))?;
                Some(BigUint::from(t[i]))
            }
        })
    }
}

fn capped(x: BigUint, cap: u64) -> Num {
    (x.bits() <= cap).then_some(x)
}

fn add(a: &Num, b: &Num, cap: u64) -> Num {
    capped(a.as_ref()? + b.as_ref()?, cap)
}

fn mul(a: &Num, b: &Num, cap: u64) -> Num {
    let (a, b) = (a.as_ref()?, b.as_ref()?);
    if a.is_zero() || b.is_zero() {
        return Some(BigUint::zero());
    }
    if a.bits() + b.bits() > cap + 1 {
        return None;
    }
    capped(a * b, cap)
}

fn pow(base: &Num, e: &Num, cap: u64) -> Num {
    let (b, e) = (base.as_ref()?, e.as_ref()?);
    if e.is_zero() || b.is_one() {
        return Some(BigUint::one());
    }
    if b.is_zero() {
        return Some(BigUint::zero());
    }
    let e = e.to_u64()?;
    if (b.bits() - 1).saturating_mul(e) > cap {
        return None;
    }
    capped(b.pow(e as u32), cap)
}

fn pow2(e: &Num, cap: u64) -> Num {
    let e = e.as_ref()?.to_u64()?;
    if e >= cap {
        return None;
    }
    Some(BigUint::one() << e)
}

/// `⌈log2 x⌉`, with `log 0 = log 1 = 0`.
fn log2(x: &Num) -> Num {
    let x = x.as_ref()?;
    if x <= &BigUint::one() {
        return Some(BigUint::zero());
    }
    let b = (x - 1u32).bits();
    Some(BigUint::from(b))
}

fn ceil_sqrt(x: &Num) -> Num {
    let x = x.as_ref()?;
    let s = x.sqrt();
    Some(if &(&s * &s) < x { s + 1u32 } else { s })
}

/// Least odd number not smaller than `x`.
fn odd(x: &Num) -> Num {
    let x = x.as_ref()?;
    Some(if x.bit(0) { x.clone() } else { x + 1u32 })
}

fn max(a: &Num, b: &Num) -> Num {
    Some(a.as_ref()?.max(b.as_ref()?).clone())
}

fn n(v: u64) -> Num {
    Some(BigUint::from(v))
}

/// `a − b`, clamped at zero.
fn monus(a: &Num, b: u64) -> Num {
    let a = a.as_ref()?;
    let b = BigUint::from(b);
    Some(if a > &b { a - b } else { BigUint::zero() })
}

fn binom(nn: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (nn - i) / (i + 1);
    }
    acc
}

/// One catalog entry: name, parameter names, description.
pub struct Entry {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub about: &'static str,
    pub needs_ful: bool,
}

pub const CATALOG: &[Entry] = &[
    Entry { name: "flatwall_factor", params: &["t"], about: "wall height factor odd(c·t²) for flat walls avoiding K_t", needs_ful: false },
    Entry { name: "apex_count", params: &["t"], about: "apex vertices t−5 for flat walls avoiding K_t", needs_ful: false },
    Entry { name: "folio_count", params: &["t", "l"], about: "number of distinct l-folios of t-boundaried graphs", needs_ful: false },
    Entry { name: "var_count", params: &["a", "at", "l"], about: "number of flap variations for apex sets of size at", needs_ful: false },
    Entry { name: "homogeneous_height", params: &["r", "a", "at", "l"], about: "wall height forcing a homogeneous subwall of height r", needs_ful: false },
    Entry { name: "irrelevant_height", params: &["a", "l", "q"], about: "wall height making a homogeneous compass irrelevant", needs_ful: false },
    Entry { name: "homogeneity_d", params: &["a", "l"], about: "homogeneity detail a+l+3", needs_ful: false },
    Entry { name: "acquaintance_height", params: &["a", "l", "q", "k"], about: "least odd r >= (k+1)(z+2)+q with z the irrelevant height", needs_ful: false },
    Entry { name: "packing_height", params: &["z", "x", "p"], about: "odd(⌈√z·(x+2)⌉)+2(p+1), height packing z subwalls of height x", needs_ful: false },
    Entry { name: "scattered_n", params: &["r", "a", "d"], about: "path length r²·a+(a−1)·d for scattered selection", needs_ful: false },
    Entry { name: "scattered_m", params: &["r"], about: "grid height 2(r²+r+1)+1 for scattered selection", needs_ful: false },
    Entry { name: "contraction_band", params: &["r", "a"], about: "band count b = l·(a+1)+2 of the panchromatic contraction", needs_ful: false },
    Entry { name: "contraction_central", params: &["r", "a"], about: "central grid size b·⌈√n⌉ of the panchromatic contraction", needs_ful: false },
    Entry { name: "contraction_set_size", params: &["r", "a"], about: "colour class size 2^(a−1)·r²·b²", needs_ful: false },
    Entry { name: "contraction_margin", params: &["r"], about: "margin l of the panchromatic contraction", needs_ful: false },
    Entry { name: "grid_universal", params: &["n"], about: "grid size c·n containing every planar graph on n vertices", needs_ful: false },
    Entry { name: "forcing_r", params: &["a", "s", "k"], about: "apex grid size ⌈√((k+a²+1)·m)⌉ forcing a solution through the apices", needs_ful: false },
    Entry { name: "apex_wall_height", params: &["a", "s", "k"], about: "flat wall height for the apex grid argument", needs_ful: false },
    Entry { name: "apex_bag_count", params: &["a", "s", "k"], about: "internal bags an apex must see", needs_ful: false },
    Entry { name: "apex_bag_depth", params: &["a", "s", "k"], about: "depth of those internal bags", needs_ful: false },
    Entry { name: "wall_tw", params: &["t"], about: "factor 2^(c·t²·log t) in the treewidth forcing a wall", needs_ful: false },
    Entry { name: "tw_bound", params: &["a", "s", "k"], about: "treewidth bound of the obstructions", needs_ful: false },
    Entry { name: "rep_exponent", params: &["h"], about: "tower exponent of the representative count", needs_ful: true },
    Entry { name: "rep_count", params: &["t", "h"], about: "number of t-representatives, 2^(f(h)·t·log t)", needs_ful: true },
    Entry { name: "pair_count", params: &["t", "h"], about: "size of the characteristic domain, Σ C(t,i)·rep_count(t−i,h)", needs_ful: true },
    Entry { name: "repeat_length", params: &["k", "y"], about: "chain length (k+2)·y+1 forcing a repeated characteristic", needs_ful: false },
    Entry { name: "repeat_bound", params: &["k", "t", "h"], about: "repeat_length with y the characteristic domain size", needs_ful: true },
    Entry { name: "size_bound", params: &["k", "tw", "l"], about: "vertex bound t·2^x for obstructions of treewidth tw", needs_ful: true },
    Entry { name: "obstruction_size", params: &["a", "s", "k"], about: "vertex bound of the obstructions", needs_ful: true },
];

pub fn entry(name: &str) -> Result<&'static Entry> {
    CATALOG.iter().find(|e| e.name == name).ok_or_else(|| Error::InvalidArgument(format!("unknown bound {name}")))
}

/// Named integer parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams(pub BTreeMap<String, u64>);

impl BoundParams {
    pub fn new(pairs: &[(&str, u64)]) -> Self {
        BoundParams(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    pub fn get(&self, k: &str) -> Result<u64> {
        self.0.get(k).copied().ok_or_else(|| Error::InvalidArgument(format!("missing parameter {k}")))
    }

    pub fn set(&mut self, k: &str, v: u64) {
        self.0.insert(k.to_string(), v);
    }
}

/// One evaluated entry: its arguments, named intermediates and value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub depth: usize,
    pub entry: String,
    pub args: Vec<(String, Option<String>)>,
    pub terms: Vec<(String, Option<String>)>,
    pub value: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    /// Steps in completion order; the last one is the requested entry.
    pub steps: Vec<Step>,
    pub warnings: Vec<String>,
    pub constants: Constants,
    pub max_bits: u64,
}

impl Trace {
    pub fn root(&self) -> &Step {
        self.steps.last().expect("nonempty trace")
    }

    /// Distinct catalog entries used below the root.
    pub fn dependencies(&self) -> Vec<String> {
        let root = self.root();
        let mut v: Vec<String> = self.steps.iter().filter(|s| s.depth > root.depth).map(|s| s.entry.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<String>| v.clone().unwrap_or_else(|| format!("> 2^{}", self.max_bits));
        for s in &self.steps {
            let args: Vec<String> = s.args.iter().map(|(k, v)| format!("{k}={}", show(v))).collect();
            writeln!(f, "{}{}({}) = {}", "  ".repeat(s.depth), s.entry, args.join(", "), show(&s.value))?;
            for (k, v) in &s.terms {
                writeln!(f, "{}  {k} = {}", "  ".repeat(s.depth), show(v))?;
            }
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

fn render(v: &Num) -> Option<String> {
    v.as_ref().map(|x| x.to_string())
}

pub struct Evaluator {
    pub constants: Constants,
    pub ful: Ful,
    pub max_bits: u64,
    steps: RefCell<Vec<Step>>,
    depth: RefCell<usize>,
    warnings: RefCell<Vec<String>>,
}

impl Evaluator {
    pub fn new(constants: Constants, ful: Ful) -> Self {
        Evaluator { constants, ful, max_bits: DEFAULT_MAX_BITS, steps: RefCell::default(), depth: RefCell::default(), warnings: RefCell::default() }
    }

    pub fn with_max_bits(mut self, bits: u64) -> Self {
        self.max_bits = bits;
        self
    }

    fn c(&self, name: &str) -> Num {
        n(self.constants.get(name))
    }

    fn ful_at(&self, x: &Num) -> Result<Num> {
        let Some(x) = x else { return Ok(None) };
        if self.ful.is_placeholder() {
            let w = "f_ul is the identity placeholder".to_string();
            let mut ws = self.warnings.borrow_mut();
            if !ws.contains(&w) {
                ws.push(w);
            }
        }
        self.ful.eval(x, self.max_bits)
    }

    fn require_ful(&self, name: &str) -> Result<()> {
        if self.ful.is_placeholder() {
            return Err(Error::Configuration(format!("{name} needs an explicit f_ul")));
        }
        Ok(())
    }

    /// Evaluates `name` on explicit arguments, recording a step.
    pub fn call(&self, name: &str, args: &[Num]) -> Result<Num> {
        let e = entry(name)?;
        if args.len() != e.params.len() {
            return Err(Error::InvalidArgument(format!("{name} takes {} arguments", e.params.len())));
        }
        if e.needs_ful {
            self.require_ful(name)?;
        }
        *self.depth.borrow_mut() += 1;
        let mut terms: Vec<(String, Num)> = Vec::new();
        let out = self.body(name, args, &mut terms);
        *self.depth.borrow_mut() -= 1;
        let value = out?;
        self.steps.borrow_mut().push(Step {
            depth: *self.depth.borrow(),
            entry: name.to_string(),
            args: e.params.iter().zip(args).map(|(p, v)| (p.to_string(), render(v))).collect(),
            terms: terms.iter().map(|(k, v)| (k.clone(), render(v))).collect(),
            value: render(&value),
        });
        Ok(value)
    }

    fn body(&self, name: &str, a: &[Num], terms: &mut Vec<(String, Num)>) -> Result<Num> {
        let cap = self.max_bits;
        let mut term = |k: &str, v: Num| -> Num {
            terms.push((k.to_string(), v.clone()));
            v
        };
        Ok(match name {
            "flatwall_factor" => odd(&mul(&self.c("c_flatwall"), &pow(&a[0], &n(2), cap), cap)),
            "apex_count" => monus(&a[0], 5),
            "folio_count" => {
                let tl = add(&a[0], &a[1], cap);
                let e = mul(&mul(&self.c("c_folio"), &tl, cap), &log2(&tl), cap);
                pow2(&pow2(&e, cap), cap)
            }
            "var_count" => {
                let (aa, at, l) = (&a[0], &a[1], &a[2]);
                let s = add(at, l, cap);
                let inner = pow2(&mul(&mul(&self.c("c_var"), &s, cap), &log2(&s), cap), cap);
                pow2(&mul(&pow(aa, at, cap), &inner, cap), cap)
            }
            "homogeneous_height" => {
                let v = self.call("var_count", &a[1..4])?;
                let v = term("variations", v);
                odd(&mul(&self.c("c_hom"), &pow(&a[0], &v, cap), cap))
            }
            "irrelevant_height" => {
                let arg = add(&mul(&n(16), &a[0], cap), &mul(&n(12), &a[1], cap), cap);
                let f = self.ful_at(&arg)?;
                let f = term("f_ul(16a+12l)", f);
                odd(&mul(&self.c("c_irr"), &add(&pow(&f, &n(3), cap), &a[2], cap), cap))
            }
            "homogeneity_d" => add(&add(&a[0], &a[1], cap), &n(3), cap),
            "acquaintance_height" => {
                let z = self.call("irrelevant_height", &a[0..3])?;
                let z = term("z", z);
                let k1 = add(&a[3], &n(1), cap);
                odd(&add(&mul(&k1, &add(&z, &n(2), cap), cap), &a[2], cap))
            }
            "packing_height" => {
                let (z, x, p) = (&a[0], &a[1], &a[2]);
                let x2 = add(x, &n(2), cap);
                let root = ceil_sqrt(&mul(z, &mul(&x2, &x2, cap), cap));
                let r = term("r", odd(&root));
                add(&r, &mul(&n(2), &add(p, &n(1), cap), cap), cap)
            }
            "scattered_n" => {
                let (r, aa, d) = (&a[0], &a[1], &a[2]);
                add(&mul(&mul(r, r, cap), aa, cap), &mul(&monus(aa, 1), d, cap), cap)
            }
            "scattered_m" => {
                let r = &a[0];
                add(&mul(&n(2), &add(&add(&mul(r, r, cap), r, cap), &n(1), cap), cap), &n(1), cap)
            }
            "contraction_margin" => {
                let r = &a[0];
                let m = self.call("scattered_m", &[r.clone()])?;
                max(&mul(&n(2), &mul(r, r, cap), cap), &m)
            }
            "contraction_band" => {
                let l = self.call("contraction_margin", &a[0..1])?;
                let l = term("l", l);
                add(&mul(&l, &add(&a[1], &n(1), cap), cap), &n(2), cap)
            }
            "contraction_central" => {
                let l = self.call("contraction_margin", &a[0..1])?;
                let l = term("l", l);
                let nn = self.call("scattered_n", &[a[0].clone(), a[1].clone(), l])?;
                let z = term("z", ceil_sqrt(&nn));
                let b = self.call("contraction_band", a)?;
                mul(&b, &z, cap)
            }
            "contraction_set_size" => {
                let b = self.call("contraction_band", a)?;
                let b = term("b", b);
                let two = pow2(&monus(&a[1], 1), cap);
                mul(&mul(&two, &mul(&a[0], &a[0], cap), cap), &mul(&b, &b, cap), cap)
            }
            "grid_universal" => mul(&self.c("c_grid"), &a[0], cap),
            "forcing_r" => {
                let (aa, s, k) = (&a[0], &a[1], &a[2]);
                let sa = term("s-a", monus(s, aa.as_ref().and_then(|x| x.to_u64()).unwrap_or(u64::MAX)));
                let m = self.call("grid_universal", &[sa])?;
                let m = term("m", m);
                let f = add(&add(k, &mul(aa, aa, cap), cap), &n(1), cap);
                ceil_sqrt(&mul(&f, &m, cap))
            }
            "apex_wall_height" | "apex_bag_count" | "apex_bag_depth" => {
                let r = self.call("forcing_r", a)?;
                let r = term("r", r);
                let ra = [r.clone(), a[0].clone()];
                match name {
                    "apex_wall_height" => {
                        let c = self.call("contraction_central", &ra)?;
                        let l = self.call("contraction_margin", &[r])?;
                        add(&add(&c, &mul(&n(2), &l, cap), cap), &n(2), cap)
                    }
                    "apex_bag_count" => self.call("contraction_set_size", &ra)?,
                    _ => self.call("contraction_margin", &[r])?,
                }
            }
            "wall_tw" => {
                let t = &a[0];
                pow2(&mul(&mul(&self.c("c_wall_tw"), &mul(t, t, cap), cap), &log2(t), cap), cap)
            }
            "tw_bound" => {
                let (aa, s, k) = (&a[0], &a[1], &a[2]);
                let at = term("at", monus(aa, 1));
                let l = term("l", mul(&self.c("c_detail"), &mul(s, s, cap), cap));
                let b = self.call("acquaintance_height", &[at.clone(), l.clone(), n(3), k.clone()])?;
                let b = term("b", b);
                let apices = self.call("apex_count", &[s.clone()])?;
                let d = self.call("homogeneity_d", &[apices.clone(), l])?;
                let d = term("d", d);
                let z = term("z", add(&add(&apices, k, cap), &n(1), cap));
                let k1 = add(k, &n(1), cap);
                let ask = [aa.clone(), s.clone(), k1];
                let m = self.call("apex_wall_height", &ask)?;
                let m = term("m", m);
                let x = self.call("apex_bag_count", &ask)?;
                let x = term("x", x);
                let ll = term("l'", mul(&z, &x, cap));
                let p = self.call("apex_bag_depth", &ask)?;
                let p = term("p", p);
                let h = self.call("packing_height", &[add(&ll, &n(1), cap), b, p])?;
                let h = term("h", h);
                let r = term("r", odd(&max(&m, &h)));
                let w = self.call("homogeneous_height", &[r, z, at, d])?;
                let w = term("w", w);
                let fw = self.call("flatwall_factor", &[s.clone()])?;
                let q = term("q", mul(&fw, &w, cap));
                let g = self.call("wall_tw", &[s.clone()])?;
                add(&mul(&g, &q, cap), &add(k, &n(1), cap), cap)
            }
            "rep_exponent" => {
                let h = &a[0];
                let inner = pow2(&mul(&mul(&self.c("c_rep"), h, cap), &log2(h), cap), cap);
                let inner = term("2^(c·h·log h)", pow2(&inner, cap));
                let c = self.ful_at(h)?;
                let c = term("f_ul(h)", c);
                pow2(&pow2(&pow2(&pow(&c, &inner, cap), cap), cap), cap)
            }
            "rep_count" => {
                let (t, h) = (&a[0], &a[1]);
                let f = self.call("rep_exponent", &[h.clone()])?;
                pow2(&mul(&mul(&f, t, cap), &log2(t), cap), cap)
            }
            "pair_count" => {
                let (t, h) = (&a[0], &a[1]);
                let Some(tv) = t.as_ref().and_then(|x| x.to_u64()).filter(|&x| x <= 64) else {
                    return Ok(None);
                };
                let mut acc = n(0);
                for i in 0..=tv {
                    let r = self.call("rep_count", &[n(tv - i), h.clone()])?;
                    acc = add(&acc, &mul(&Some(binom(tv, i)), &r, cap), cap);
                }
                acc
            }
            "repeat_length" => add(&mul(&add(&a[0], &n(2), cap), &a[1], cap), &n(1), cap),
            "repeat_bound" => {
                let y = self.call("pair_count", &a[1..3])?;
                let y = term("y", y);
                self.call("repeat_length", &[a[0].clone(), y])?
            }
            "size_bound" => {
                let (k, tw, l) = (&a[0], &a[1], &a[2]);
                let t = term("t", add(tw, &n(1), cap));
                let d = self.call("repeat_bound", &[k.clone(), t.clone(), l.clone()])?;
                let d = term("d", d);
                let pairs = t.as_ref().map(|t| t * (t + 1u32) / 2u32 - t);
                let m = term("m", mul(&add(&pow2(&pairs, cap), &n(1), cap), &d, cap));
                let x = term("x", pow(&m, &t, cap));
                mul(&t, &pow2(&x, cap), cap)
            }
            "obstruction_size" => {
                let tw = self.call("tw_bound", a)?;
                let tw = term("tw", tw);
                let l = term("l", mul(&self.c("c_detail"), &mul(&a[1], &a[1], cap), cap));
                self.call("size_bound", &[a[2].clone(), tw, l])?
            }
            _ => return Err(Error::InvalidArgument(format!("unknown bound {name}"))),
        })
    }

    fn args_for(&self, name: &str, p: &BoundParams) -> Result<Vec<Num>> {
        let e = entry(name)?;
        check_params(p)?;
        e.params.iter().map(|k| p.get(k).map(n)).collect()
    }

    /// Value and derivation of `name`; the value is `None` past the bit cap.
    pub fn explain(&self, name: &str, p: &BoundParams) -> Result<(Num, Trace)> {
        self.steps.borrow_mut().clear();
        self.warnings.borrow_mut().clear();
        let args = self.args_for(name, p)?;
        let v = self.call(name, &args)?;
        let trace = Trace {
            steps: self.steps.borrow().clone(),
            warnings: self.warnings.borrow().clone(),
            constants: self.constants.clone(),
            max_bits: self.max_bits,
        };
        Ok((v, trace))
    }

    pub fn evaluate(&self, name: &str, p: &BoundParams) -> Result<BigUint> {
        let (v, _) = self.explain(name, p)?;
        v.ok_or_else(|| Error::ResourceLimit(format!("{name} exceeds {} bits", self.max_bits)))
    }

    /// Recomputes every step from its recorded arguments.
    pub fn recheck(&self, trace: &Trace) -> Result<bool> {
        for s in &trace.steps {
            let mut args = Vec::new();
            for (_, v) in &s.args {
                match v {
                    Some(x) => args.push(Some(x.parse::<BigUint>().map_err(|e| Error::Parse(e.to_string()))?)),
                    None => args.push(None),
                }
            }
            let saved = std::mem::take(&mut *self.steps.borrow_mut());
            let v = self.call(&s.entry, &args);
            *self.steps.borrow_mut() = saved;
            if render(&v?) != s.value {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_params(p: &BoundParams) -> Result<()> {
    if let (Some(a), Some(s)) = (p.0.get("a"), p.0.get("s")) {
        if a > s {
            return Err(Error::InvalidArgument(format!("a={a} exceeds s={s}")));
        }
    }
    if let (Some(at), Some(a)) = (p.0.get("at"), p.0.get("a")) {
        if at > a {
            return Err(Error::InvalidArgument(format!("at={at} exceeds a={a}")));
        }
    }
    Ok(())
}

/// Evaluates with default constants and the given `f_ul`.
pub fn evaluate(name: &str, p: &BoundParams, ful: Ful) -> Result<BigUint> {
    Evaluator::new(Constants::default(), ful).evaluate(name, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(name: &str, p: &[(&str, u64)]) -> BigUint {
        Evaluator::new(Constants::default(), Ful::Polynomial(vec![0, 1])).evaluate(name, &BoundParams::new(p)).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(ev("apex_count", &[("t", 6)]), BigUint::from(1u32));
        assert_eq!(ev("homogeneity_d", &[("a", 2), ("l", 3)]), BigUint::from(8u32));
        assert_eq!(ev("scattered_m", &[("r", 2)]), BigUint::from(15u32));
        assert_eq!(ev("repeat_length", &[("k", 0), ("y", 1)]), BigUint::from(3u32));
        assert_eq!(ev("scattered_n", &[("r", 2), ("a", 3), ("d", 5)]), BigUint::from(22u32));
        // odd(⌈√4·(3+2)⌉) + 2·(1+1) = 11 + 4.
        assert_eq!(ev("packing_height", &[("z", 4), ("x", 3), ("p", 1)]), BigUint::from(15u32));
        // r = 3, a = 1: l = max(18, 27) = 27, b = 56, n = 9, central = 56·3.
        assert_eq!(ev("contraction_central", &[("r", 3), ("a", 1)]), BigUint::from(168u32));
        assert_eq!(ev("contraction_set_size", &[("r", 3), ("a", 1)]), BigUint::from(9u32 * 56 * 56));
        // ⌈√((0+1+1)·4)⌉ = 3.
        assert_eq!(ev("forcing_r", &[("a", 1), ("s", 5), ("k", 0)]), BigUint::from(3u32));
    }

    #[test]
    fn helpers() {
        assert_eq!(log2(&n(1)), n(0));
        assert_eq!(log2(&n(8)), n(3));
        assert_eq!(log2(&n(9)), n(4));
        assert_eq!(ceil_sqrt(&n(10)), n(4));
        assert_eq!(ceil_sqrt(&n(16)), n(4));
        assert_eq!(odd(&n(4)), n(5));
        assert_eq!(pow2(&n(100), 50), None);
        assert_eq!(mul(&None, &n(3), 10), None);
    }

    #[test]
    fn ful_is_required_where_it_matters() {
        let e = Evaluator::new(Constants::default(), Ful::Identity);
        let p = BoundParams::new(&[("t", 2), ("h", 1)]);
        assert!(matches!(e.evaluate("rep_count", &p), Err(Error::Configuration(_))));
        let (_, tr) = e.explain("irrelevant_height", &BoundParams::new(&[("a", 1), ("l", 1), ("q", 3)])).unwrap();
        assert_eq!(tr.warnings.len(), 1);
    }

    #[test]
    fn traces() {
        let e = Evaluator::new(Constants::default(), Ful::Polynomial(vec![0, 1]));
        let (v, tr) = e.explain("tw_bound", &BoundParams::new(&[("a", 1), ("s", 5), ("k", 1)])).unwrap();
        let names: Vec<&str> = tr.root().terms.iter().map(|(k, _)| k.as_str()).collect();
        for t in ["b", "d", "z", "m", "x", "l'", "p", "h", "r", "w", "q"] {
            assert!(names.contains(&t), "{t} missing from {names:?}");
        }
        assert_eq!(render(&v), tr.root().value);
        assert!(e.recheck(&tr).unwrap());
        let (_, tr) = e.explain("contraction_set_size", &BoundParams::new(&[("r", 2), ("a", 2)])).unwrap();
        assert_eq!(tr.dependencies(), vec!["contraction_band", "contraction_margin", "scattered_m"]);
    }

    #[test]
    fn parameters_are_checked() {
        let e = Evaluator::new(Constants::default(), Ful::Identity);
        assert!(e.evaluate("forcing_r", &BoundParams::new(&[("a", 3), ("s", 2), ("k", 0)])).is_err());
        assert!(e.evaluate("forcing_r", &BoundParams::new(&[("a", 1)])).is_err());
        assert!(e.evaluate("nonsense", &BoundParams::default()).is_err());
        assert!(Constants::from_json(r#"{"c_nope": 2}"#).is_err());
        assert_eq!(Constants::from_json(r#"{"c_grid": 2}"#).unwrap().get("c_grid"), 2);
        assert_eq!(Ful::from_json(r#"{"polynomial": [1, 2]}"#).unwrap(), Ful::Polynomial(vec![1, 2]));
    }
}
