//! Frobenius class resolution: for each sweep row, the conjugacy class of
//! the permutation the Frobenius at `p` induces on the three elliptic
//! factors is determined arithmetically — either by a congruence condition
//! on `p` (for rows split by a cyclotomic field) or by the cycle type of a
//! resolvent polynomial mod `p` (distinct-degree factorization).
//!
//! Only the class in the symmetric group S₄ is resolved — never the exact
//! group element — because the coefficient functions downstream depend on a
//! class only through `(tr g, tr g², tr g³, det g)`, which coincide for the
//! two order-2 classes.  The transposition/double-transposition distinction
//! is still reported where the cycle type reveals it, since the two classes
//! have different expected densities.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::ffield::{poly_powmod, PolyFp, PrimeModulus};
use crate::Error;

/// Conjugacy-class label for the image of the Frobenius in S₄.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    /// The identity (order 1).
    Identity,
    /// An order-2 element with fixed points in the degree-4 action
    /// (a transposition).
    TwoTransposition,
    /// An order-2 element without fixed points (a double transposition).
    TwoDouble,
    /// An order-2 element whose kind a congruence resolver cannot see.
    TwoUnspecified,
    /// An order-3 element.
    Three,
    /// An order-4 element.
    Four,
}

impl ClassLabel {
    /// Order of any element in the class.
    pub fn order(self) -> u8 {
        match self {
            ClassLabel::Identity => 1,
            ClassLabel::TwoTransposition | ClassLabel::TwoDouble | ClassLabel::TwoUnspecified => 2,
            ClassLabel::Three => 3,
            ClassLabel::Four => 4,
        }
    }

    pub fn is_identity(self) -> bool {
        self == ClassLabel::Identity
    }

    /// Stable short name, used in report tables.
    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::Identity => "id",
            ClassLabel::TwoTransposition => "2T",
            ClassLabel::TwoDouble => "2D",
            ClassLabel::TwoUnspecified => "2",
            ClassLabel::Three => "3",
            ClassLabel::Four => "4",
        }
    }
}

/// Multiset of irreducible-factor degrees of a squarefree polynomial mod
/// `p`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType(Vec<u8>);

impl CycleType {
    pub fn new(mut degrees: Vec<u8>) -> Result<Self, Error> {
        if degrees.is_empty() || degrees.iter().any(|&d| d == 0) {
            return Err(Error::BadCatalog(
                "cycle type needs positive factor degrees".into(),
            ));
        }
        degrees.sort_unstable();
        Ok(CycleType(degrees))
    }

    pub fn parts(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&d| u32::from(d)).sum()
    }
}

/// Result of factoring a resolvent mod `p`: the cycle type, or the marker
/// that `p` ramifies (repeated factor, or leading coefficient vanishing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleTypeOutcome {
    Type(CycleType),
    Ramified,
}

/// Degrees of the irreducible factors of `f` mod `p` (distinct-degree
/// factorization — the factors themselves are never needed).  Returns
/// [`CycleTypeOutcome::Ramified`] when `f` mod `p` has a repeated factor or
/// drops degree.
pub fn cycle_type(f: &[i64], p: PrimeModulus) -> Result<CycleTypeOutcome, Error> {
    let deg_z = {
        let mut d = f.len();
        while d > 0 && f[d - 1] == 0 {
            d -= 1;
        }
        d.saturating_sub(1)
    };
    if deg_z == 0 {
        return Err(Error::BadCatalog(
            "cycle type of a constant polynomial is undefined".into(),
        ));
    }
    let fp = PolyFp::from_i64(f, p);
    if fp.degree() != Some(deg_z) {
        return Ok(CycleTypeOutcome::Ramified);
    }
    if !fp.is_squarefree() {
        return Ok(CycleTypeOutcome::Ramified);
    }

    let pv = p.get();
    let mut rem = fp.monic();
    let mut h = PolyFp::x(p).rem(&rem); // x mod f, in case deg f = 1
    let mut parts: Vec<u8> = Vec::new();
    let mut d = 1u8;
    while let Some(deg) = rem.degree() {
        if deg == 0 {
            break;
        }
        if usize::from(2 * d) > deg {
            // No factor of degree ≤ deg/2 remains: rem is irreducible.
            parts.push(deg as u8);
            break;
        }
        // h = x^(p^d) mod rem; gcd(h − x, rem) is the product of the
        // irreducible factors of degree exactly d (smaller ones are gone).
        h = poly_powmod(&h, u128::from(pv), &rem);
        let g = h.sub(&PolyFp::x(p)).gcd(&rem);
        if let Some(gd) = g.degree() {
            if gd > 0 {
                debug_assert_eq!(gd % usize::from(d), 0);
                for _ in 0..gd / usize::from(d) {
                    parts.push(d);
                }
                rem = rem.divrem(&g).0;
                h = h.rem(&rem);
            }
        }
        d += 1;
    }
    debug_assert_eq!(
        parts.iter().map(|&x| usize::from(x)).sum::<usize>(),
        deg_z,
        "factor degrees must sum to deg f"
    );
    Ok(CycleTypeOutcome::Type(CycleType::new(parts)?))
}

/// How a sweep row turns a good prime into a Frobenius class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResolverSpec {
    /// Trivial splitting field: every good prime is the identity.
    AlwaysIdentity,
    /// Splitting field inside a cyclotomic field: the class depends only on
    /// `p mod modulus`.  Primes dividing the modulus ramify and are skipped.
    CongruenceMod {
        modulus: u64,
        #[serde(with = "residue_keys")]
        classes: BTreeMap<u64, ClassLabel>,
    },
    /// General splitting field: the class is read off the cycle type of a
    /// resolvent polynomial mod `p` (ascending integer coefficients).
    PolyCycleType {
        poly: Vec<i64>,
        classes: Vec<(CycleType, ClassLabel)>,
    },
}

/// Outcome of resolving one prime: a class, or an instruction to leave the
/// prime out of the statistics (it ramifies in the splitting field).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    Class(ClassLabel),
    Skip,
}

impl ResolverSpec {
    /// Structural validation: congruence tables must cover every unit
    /// residue, cycle-type tables must key genuine partitions of the
    /// resolvent degree.  (Completeness of a cycle-type table over the
    /// actual Galois group only surfaces at resolve time.)
    pub fn validate(&self) -> Result<(), Error> {
        match self {
            ResolverSpec::AlwaysIdentity => Ok(()),
            ResolverSpec::CongruenceMod { modulus, classes } => {
                if *modulus < 2 {
                    return Err(Error::BadCatalog("congruence modulus must be ≥ 2".into()));
                }
                for r in 1..*modulus {
                    if num_integer::gcd(r, *modulus) == 1 && !classes.contains_key(&r) {
                        return Err(Error::BadCatalog(format!(
                            "congruence table misses unit residue {r} mod {modulus}"
                        )));
                    }
                }
                Ok(())
            }
            ResolverSpec::PolyCycleType { poly, classes } => {
                let deg = poly.len().saturating_sub(1);
                if deg == 0 || *poly.last().unwrap_or(&0) == 0 {
                    return Err(Error::BadCatalog(
                        "resolvent must have nonvanishing positive degree".into(),
                    ));
                }
                if classes.is_empty() {
                    return Err(Error::BadCatalog("cycle-type table is empty".into()));
                }
                for (ct, _) in classes {
                    if ct.degree() != deg as u32 {
                        return Err(Error::BadCatalog(format!(
                            "cycle type {:?} does not partition degree {deg}",
                            ct.parts()
                        )));
                    }
                }
                for (i, (ct, _)) in classes.iter().enumerate() {
                    if classes[i + 1..].iter().any(|(other, _)| other == ct) {
                        return Err(Error::BadCatalog(format!(
                            "cycle type {:?} mapped twice",
                            ct.parts()
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Resolve the Frobenius class at a good prime.
    pub fn resolve(&self, p: PrimeModulus) -> Result<Resolution, Error> {
        match self {
            ResolverSpec::AlwaysIdentity => Ok(Resolution::Class(ClassLabel::Identity)),
            ResolverSpec::CongruenceMod { modulus, classes } => {
                let pv = p.get();
                if num_integer::gcd(pv, *modulus) != 1 {
                    return Ok(Resolution::Skip);
                }
                match classes.get(&(pv % modulus)) {
                    Some(&label) => Ok(Resolution::Class(label)),
                    None => Err(Error::BadCatalog(format!(
                        "no class for residue {} mod {modulus}",
                        pv % modulus
                    ))),
                }
            }
            ResolverSpec::PolyCycleType { poly, classes } => match cycle_type(poly, p)? {
                CycleTypeOutcome::Ramified => Ok(Resolution::Skip),
                CycleTypeOutcome::Type(ct) => classes
                    .iter()
                    .find(|(key, _)| *key == ct)
                    .map(|&(_, label)| Resolution::Class(label))
                    .ok_or_else(|| {
                        Error::BadCatalog(format!(
                            "cycle type {:?} of the resolvent at p = {} has no class entry",
                            ct.parts(),
                            p.get()
                        ))
                    }),
            },
        }
    }
}

/// JSON object keys are strings, and the tagged-enum decoder re-reads them
/// as buffered strings, so the residue→class table converts its `u64` keys
/// explicitly at the serde boundary.
mod residue_keys {
    use super::ClassLabel;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<u64, ClassLabel>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        let keyed: BTreeMap<String, ClassLabel> =
            map.iter().map(|(&k, &v)| (k.to_string(), v)).collect();
        keyed.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<u64, ClassLabel>, D::Error> {
        let keyed = BTreeMap::<String, ClassLabel>::deserialize(de)?;
        keyed
            .into_iter()
            .map(|(k, v)| {
                k.parse::<u64>()
                    .map(|r| (r, v))
                    .map_err(|_| D::Error::custom(format!("residue key `{k}` is not an integer")))
            })
            .collect()
    }
}

/// Convenience for building congruence tables in code and tests.
pub fn congruence_table(entries: &[(u64, ClassLabel)]) -> BTreeMap<u64, ClassLabel> {
    entries.iter().copied().collect()
}

/// Convenience for building cycle-type tables: entries are (sorted factor
/// degrees, class).
pub fn cycle_type_table(entries: &[(&[u8], ClassLabel)]) -> Result<Vec<(CycleType, ClassLabel)>, Error> {
    entries
        .iter()
        .map(|&(parts, label)| Ok((CycleType::new(parts.to_vec())?, label)))
        .collect()
}
