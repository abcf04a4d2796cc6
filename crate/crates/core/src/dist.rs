//! Finite-support probability distributions with exact rational weights.
//!
//! [`Dist`] is the distribution monad: [`Dist::delta`] is the unit,
//! [`Dist::flatten`] the multiplication and [`Dist::pushforward`] the action on
//! maps. [`glue`] is the gluing operation over a pullback of sets.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds the rational `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational as `p/q`, or as an integer when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A probability distribution with finite support.
///
/// Weights are strictly positive and sum to exactly one. Keys are kept in
/// their `Ord` order, so equality is exact and structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dist<K: Ord> {
    weights: BTreeMap<K, Rational>,
}

/// A distribution over distributions.
pub type NestedDist<K> = Dist<Dist<K>>;

impl<K: Ord + Clone> Dist<K> {
    /// The point mass at `x`.
    pub fn delta(x: K) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(x, Rational::one());
        Dist { weights }
    }

    /// Builds a distribution from weighted keys. Repeated keys are summed and
    /// zero weights dropped; negative weights or a total other than one are
    /// rejected.
    pub fn from_weights(pairs: impl IntoIterator<Item = (K, Rational)>) -> Result<Self> {
        let mut weights: BTreeMap<K, Rational> = BTreeMap::new();
        for (k, w) in pairs {
            if w.is_negative() {
                return Err(Error::Domain(format!(
                    "negative weight {}",
                    format_rational(&w)
                )));
            }
            *weights.entry(k).or_insert_with(Rational::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        let total: Rational = weights.values().sum();
        if !total.is_one() {
            return Err(Error::Domain(format!(
                "weights sum to {}, expected 1",
                format_rational(&total)
            )));
        }
        Ok(Dist { weights })
    }

    /// The uniform distribution on the given (deduplicated) keys.
    pub fn uniform(keys: impl IntoIterator<Item = K>) -> Result<Self> {
        let keys: Vec<K> = keys
            .into_iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        if keys.is_empty() {
            return Err(Error::Domain("uniform distribution on an empty set".into()));
        }
        let w = ratio(1, keys.len() as i64);
        Ok(Dist {
            weights: keys.into_iter().map(|k| (k, w.clone())).collect(),
        })
    }

    /// Accumulates weights that are known to be nonnegative and to sum to one.
    pub(crate) fn collect_exact(pairs: impl IntoIterator<Item = (K, Rational)>) -> Self {
        let mut weights: BTreeMap<K, Rational> = BTreeMap::new();
        for (k, w) in pairs {
            *weights.entry(k).or_insert_with(Rational::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        debug_assert!(weights.values().sum::<Rational>().is_one());
        Dist { weights }
    }

    /// Weight of `x`, zero outside the support.
    pub fn weight(&self, x: &K) -> Rational {
        self.weights.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.weights.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_delta(&self) -> bool {
        self.weights.len() == 1
    }

    /// The image distribution `D(f)(p)`.
    pub fn pushforward<L: Ord + Clone>(&self, f: impl Fn(&K) -> L) -> Dist<L> {
        Dist::collect_exact(self.weights.iter().map(|(k, w)| (f(k), w.clone())))
    }

    /// Kleisli extension: `x ↦ f(x)` averaged over `self`.
    pub fn bind<L: Ord + Clone>(&self, f: impl Fn(&K) -> Dist<L>) -> Dist<L> {
        let mut pairs = Vec::new();
        for (k, w) in &self.weights {
            for (l, v) in &f(k).weights {
                pairs.push((l.clone(), w * v));
            }
        }
        Dist::collect_exact(pairs)
    }

    /// Monad multiplication `D(D(X)) → D(X)`.
    pub fn flatten(nested: &NestedDist<K>) -> Self {
        nested.bind(|inner| inner.clone())
    }

    /// The mixture `t·p + (1−t)·q`.
    pub fn convex(t: &Rational, p: &Self, q: &Self) -> Result<Self> {
        if t.is_negative() || *t > Rational::one() {
            return Err(Error::Domain(format!(
                "mixing weight {} outside [0,1]",
                format_rational(t)
            )));
        }
        let s = Rational::one() - t;
        let pairs = p
            .weights
            .iter()
            .map(|(k, w)| (k.clone(), w * t))
            .chain(q.weights.iter().map(|(k, w)| (k.clone(), w * &s)));
        Ok(Dist::collect_exact(pairs))
    }

    /// A finite mixture `Σ tᵢ·pᵢ`; the weights must form a distribution.
    pub fn mixture(parts: &[(Rational, Self)]) -> Result<Self> {
        let total: Rational = parts.iter().map(|(t, _)| t.clone()).sum();
        if !total.is_one() || parts.iter().any(|(t, _)| t.is_negative()) {
            return Err(Error::Domain(
                "mixture weights must be nonnegative and sum to 1".into(),
            ));
        }
        let pairs = parts
            .iter()
            .flat_map(|(t, p)| p.weights.iter().map(move |(k, w)| (k.clone(), w * t)));
        Ok(Dist::collect_exact(pairs))
    }

    /// The independent product distribution.
    pub fn product<L: Ord + Clone>(&self, other: &Dist<L>) -> Dist<(K, L)> {
        let mut weights = BTreeMap::new();
        for (k, w) in &self.weights {
            for (l, v) in &other.weights {
                weights.insert((k.clone(), l.clone()), w * v);
            }
        }
        Dist { weights }
    }
}

impl<K: Ord + fmt::Display> Dist<K> {
    /// Canonical serialization: `key=num/den` pairs in key order, joined by `;`.
    pub fn canonical_string(&self) -> String {
        self.weights
            .iter()
            .map(|(k, w)| format!("{}={}", k, format_rational(w)))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl<K: Ord + fmt::Display> fmt::Display for Dist<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.canonical_string())
    }
}

/// The gluing `m_{f,g}(p,q)` on the pullback `X ×_Z Y`:
/// `(x,y) ↦ p(x)·q(y) / D(f)(p)(f(x))` whenever `f(x) = g(y)`.
///
/// Fails unless `D(f)(p) = D(g)(q)` exactly.
pub fn glue<X, Y, Z>(
    f: impl Fn(&X) -> Z,
    g: impl Fn(&Y) -> Z,
    p: &Dist<X>,
    q: &Dist<Y>,
) -> Result<Dist<(X, Y)>>
where
    X: Ord + Clone,
    Y: Ord + Clone,
    Z: Ord + Clone,
{
    let marginal = p.pushforward(&f);
    if marginal != q.pushforward(&g) {
        return Err(Error::Precondition(
            "gluing legs have different marginals".into(),
        ));
    }
    let mut over: BTreeMap<Z, Vec<(&Y, &Rational)>> = BTreeMap::new();
    for (y, w) in q.iter() {
        over.entry(g(y)).or_default().push((y, w));
    }
    let mut weights = BTreeMap::new();
    for (x, px) in p.iter() {
        let z = f(x);
        let scale = px / marginal.weight(&z);
        for (y, qy) in &over[&z] {
            weights.insert((x.clone(), (*y).clone()), &scale * *qy);
        }
    }
    Ok(Dist { weights })
}

/// Gluing with a deterministic right leg, `η_{f,g}(p, y) = m_{f,g}(p, δ^y)`.
pub fn glue_deterministic<X, Y, Z>(
    f: impl Fn(&X) -> Z,
    g: impl Fn(&Y) -> Z,
    p: &Dist<X>,
    y: &Y,
) -> Result<Dist<(X, Y)>>
where
    X: Ord + Clone,
    Y: Ord + Clone,
    Z: Ord + Clone,
{
    let z = g(y);
    if p.support().any(|x| f(x) != z) {
        return Err(Error::Precondition(
            "left leg is not supported over g(y)".into(),
        ));
    }
    Ok(p.pushforward(|x| (x.clone(), y.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(pairs: &[(&'static str, i64, i64)]) -> Dist<&'static str> {
        Dist::from_weights(pairs.iter().map(|&(k, n, m)| (k, ratio(n, m)))).unwrap()
    }

    #[test]
    fn rational_strings_round_trip() {
        for s in ["0", "1", "-3", "1/2", "-7/12"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn weights_must_sum_to_one() {
        assert!(Dist::from_weights([("a", ratio(1, 2))]).is_err());
        assert!(Dist::from_weights([("a", ratio(3, 2)), ("b", ratio(-1, 2))]).is_err());
        let p = Dist::from_weights([("a", ratio(1, 2)), ("a", ratio(1, 2)), ("b", ratio(0, 1))])
            .unwrap();
        assert_eq!(p, Dist::delta("a"));
    }

    #[test]
    fn pushforward_of_delta_is_delta() {
        assert_eq!(Dist::delta(3).pushforward(|x| x * 2), Dist::delta(6));
    }

    #[test]
    fn flatten_of_double_delta() {
        let nested = Dist::delta(Dist::delta("x"));
        assert_eq!(Dist::flatten(&nested), Dist::delta("x"));
    }

    #[test]
    fn convex_half_half() {
        let p = Dist::convex(&ratio(1, 2), &Dist::delta("a"), &Dist::delta("b")).unwrap();
        assert_eq!(p, d(&[("a", 1, 2), ("b", 1, 2)]));
        assert!(Dist::convex(&ratio(3, 2), &Dist::delta("a"), &Dist::delta("b")).is_err());
    }

    #[test]
    fn canonical_string_is_sorted() {
        let p = d(&[("b", 1, 3), ("a", 2, 3)]);
        assert_eq!(p.canonical_string(), "a=2/3;b=1/3");
    }

    #[test]
    fn glue_of_deltas_is_delta_of_pair() {
        let z = |_: &&str| ();
        let r = glue(z, z, &Dist::delta("x"), &Dist::delta("y")).unwrap();
        assert_eq!(r, Dist::delta(("x", "y")));
    }

    #[test]
    fn glue_over_a_point() {
        let p = d(&[("x1", 1, 2), ("x2", 1, 2)]);
        let r = glue(|_: &&str| 0, |_: &&str| 0, &p, &Dist::delta("y")).unwrap();
        let expected =
            Dist::from_weights([(("x1", "y"), ratio(1, 2)), (("x2", "y"), ratio(1, 2))]).unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn glue_rejects_mismatched_marginals() {
        let p = d(&[("a", 1, 2), ("b", 1, 2)]);
        let q = Dist::delta("a");
        assert!(matches!(
            glue(|x: &&str| *x, |y: &&str| *y, &p, &q),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn deterministic_gluing_matches_general_gluing() {
        let f = |x: &u8| x % 2;
        let p = Dist::from_weights([(1u8, ratio(1, 3)), (3, ratio(2, 3))]).unwrap();
        let g = |y: &u8| y % 2;
        assert_eq!(
            glue_deterministic(f, g, &p, &5).unwrap(),
            glue(f, g, &p, &Dist::delta(5)).unwrap()
        );
        assert!(glue_deterministic(f, g, &p, &4).is_err());
    }
}
