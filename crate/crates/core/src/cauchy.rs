//! Sequences of objects with explicit connecting maps: Cauchy certificates
//! over a finite horizon, trivialisation, cohomology bounds, the small object
//! construction and homotopy colimit models for the supported families.

use std::fmt;

use num_bigint::BigInt;

use crate::classify::Probe;
use crate::derived::{cone_of_module_map, is_unit_after_inverting, MapData, ModuleMap, SplitObject};
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::indec::{Indecomposable, RingDescriptor};
use crate::labels::{Label, LabelSet, PointSet, PrimeSet, ProjPoint, Universe};
use crate::metric::{BallMembership, MetricNF};
use crate::thick::ThickDescriptor;

/// How one entry of a sequence maps to the next.
#[derive(Debug, Clone, PartialEq)]
pub enum MapWitness {
    /// Module maps in each listed degree; the map is diagonal in degrees and
    /// every degree of source and target must be listed.
    Module(Vec<(i64, ModuleMap)>),
    /// Multiplication by an integer on every summand (over `Z`).
    Multiplication(i64),
    /// A map known only through its cone.
    FormalCone(SplitObject),
    Identity,
}

impl fmt::Display for MapWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapWitness::Module(parts) => {
                let degrees: Vec<String> = parts.iter().map(|(d, _)| d.to_string()).collect();
                write!(f, "module map in degrees {}", degrees.join(","))
            }
            MapWitness::Multiplication(m) => write!(f, "*{m}"),
            MapWitness::FormalCone(c) => write!(f, "formal map with cone {c}"),
            MapWitness::Identity => write!(f, "id"),
        }
    }
}

fn sorted(mut v: Vec<Indecomposable>) -> Vec<Indecomposable> {
    v.sort();
    v
}

fn k0_difference(source: &SplitObject, target: &SplitObject) -> Vec<i64> {
    let s = source.k0_class();
    let t = target.k0_class();
    let n = s.len().max(t.len());
    (0..n)
        .map(|i| t.get(i).copied().unwrap_or(0) - s.get(i).copied().unwrap_or(0))
        .collect()
}

fn same_class(a: &[i64], b: &[i64]) -> bool {
    let n = a.len().max(b.len());
    (0..n).all(|i| a.get(i).copied().unwrap_or(0) == b.get(i).copied().unwrap_or(0))
}

impl MapWitness {
    fn check(&self, source: &SplitObject, target: &SplitObject) -> Result<()> {
        let mismatch = |why: String| Err(Error::InvalidArgument(format!("{self}: {why}")));
        match self {
            MapWitness::Identity => {
                if source != target {
                    return mismatch(format!("{source} differs from {target}"));
                }
            }
            MapWitness::Multiplication(_) => {
                if source != target {
                    return mismatch(format!("{source} differs from {target}"));
                }
                if *source.ring() != RingDescriptor::IntegerRing {
                    return mismatch(format!("multiplication witnesses need Z, not {}", source.ring()));
                }
            }
            MapWitness::Module(parts) => {
                let mut degrees: Vec<i64> = source.degrees();
                degrees.extend(target.degrees());
                degrees.sort();
                degrees.dedup();
                let listed: Vec<i64> = parts.iter().map(|(d, _)| *d).collect();
                for d in &degrees {
                    if !listed.contains(d) {
                        return mismatch(format!("degree {d} has no map"));
                    }
                }
                for (d, map) in parts {
                    if map.ring() != source.ring() {
                        return Err(Error::MixedRings(format!("{} and {}", map.ring(), source.ring())));
                    }
                    if sorted(map.source().to_vec()) != sorted(source.degree_part(*d))
                        || sorted(map.target().to_vec()) != sorted(target.degree_part(*d))
                    {
                        return mismatch(format!("shapes in degree {d} do not match the entries"));
                    }
                }
            }
            MapWitness::FormalCone(c) => {
                if c.ring() != source.ring() {
                    return Err(Error::MixedRings(format!("{} and {}", c.ring(), source.ring())));
                }
                validate_formal(c, source, target)?;
            }
        }
        Ok(())
    }

    /// The cone of the map between the given entries.
    fn cone(&self, source: &SplitObject, target: &SplitObject) -> Result<SplitObject> {
        match self {
            MapWitness::Identity => Ok(SplitObject::zero(source.ring().clone())),
            MapWitness::FormalCone(c) => Ok(c.clone()),
            MapWitness::Multiplication(m) => {
                let mut cone = SplitObject::zero(source.ring().clone());
                for d in source.degrees() {
                    let map = ModuleMap::multiplication(source.degree_part(d), *m)?;
                    cone = cone.direct_sum(&cone_of_module_map(&map)?.shift(-d))?;
                }
                Ok(cone)
            }
            MapWitness::Module(parts) => {
                let mut cone = SplitObject::zero(source.ring().clone());
                for (d, map) in parts {
                    cone = cone.direct_sum(&cone_of_module_map(map)?.shift(-d))?;
                }
                let _ = target;
                Ok(cone)
            }
        }
    }
}

/// A declared cone must have the class `[target] - [source]` in the
/// Grothendieck group.
fn validate_formal(cone: &SplitObject, source: &SplitObject, target: &SplitObject) -> Result<()> {
    if same_class(&cone.k0_class(), &k0_difference(source, target)) {
        Ok(())
    } else {
        Err(Error::UnverifiableWitness(format!(
            "declared cone {cone} does not have the class of [{target}] - [{source}]"
        )))
    }
}

/// `E_0 -> E_1 -> E_2 -> ...`, truncated to the listed entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectSequence {
    ring: RingDescriptor,
    entries: Vec<SplitObject>,
    maps: Vec<MapWitness>,
}

impl ObjectSequence {
    pub fn new(ring: RingDescriptor, entries: Vec<SplitObject>, maps: Vec<MapWitness>) -> Result<Self> {
        if entries.len() != maps.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} entries need {} maps, got {}",
                entries.len(),
                entries.len().saturating_sub(1),
                maps.len()
            )));
        }
        for e in &entries {
            if *e.ring() != ring {
                return Err(Error::MixedRings(format!("{ring} and {}", e.ring())));
            }
        }
        for (i, m) in maps.iter().enumerate() {
            m.check(&entries[i], &entries[i + 1])?;
        }
        Ok(ObjectSequence { ring, entries, maps })
    }

    /// `X -> X -> ... -> X` with identity maps.
    pub fn constant(x: SplitObject, steps: usize) -> Self {
        ObjectSequence {
            ring: x.ring().clone(),
            entries: vec![x; steps + 1],
            maps: vec![MapWitness::Identity; steps],
        }
    }

    /// `Z -> Z -> ...` with the given multipliers.
    pub fn multiplication_chain(factors: &[i64]) -> Result<Self> {
        let z = SplitObject::module(RingDescriptor::IntegerRing, Indecomposable::ZFree)?;
        ObjectSequence::new(
            RingDescriptor::IntegerRing,
            vec![z; factors.len() + 1],
            factors.iter().map(|&m| MapWitness::Multiplication(m)).collect(),
        )
    }

    /// `P_start -> P_start+1 -> ...` along the canonical maps whose cokernels
    /// are the quasi-simples at the given points.
    pub fn preprojective_chain(field: FieldDescriptor, start: u32, points: &[ProjPoint]) -> Result<Self> {
        let ring = RingDescriptor::Kronecker(field.clone());
        let mut entries = vec![SplitObject::module(ring.clone(), Indecomposable::Preprojective(start))?];
        let mut maps = Vec::new();
        for (i, pt) in points.iter().enumerate() {
            let n = start + i as u32 + 1;
            let map = ModuleMap::canonical_preprojective(field.clone(), n, pt)?;
            entries.push(SplitObject::module(ring.clone(), Indecomposable::Preprojective(n))?);
            maps.push(MapWitness::Module(vec![(0, map)]));
        }
        ObjectSequence::new(ring, entries, maps)
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn entries(&self) -> &[SplitObject] {
        &self.entries
    }

    pub fn maps(&self) -> &[MapWitness] {
        &self.maps
    }

    /// Number of connecting maps.
    pub fn steps(&self) -> usize {
        self.maps.len()
    }

    /// The cone of the `n`-th map `E_{n-1} -> E_n`, for `n >= 1`.
    pub fn cone(&self, n: usize) -> Result<SplitObject> {
        if n == 0 || n > self.maps.len() {
            return Err(Error::InvalidArgument(format!("map index {n} outside 1..={}", self.maps.len())));
        }
        self.maps[n - 1].cone(&self.entries[n - 1], &self.entries[n])
    }

    pub fn cones(&self) -> Result<Vec<SplitObject>> {
        (1..=self.maps.len()).map(|n| self.cone(n)).collect()
    }

    /// Keep only the summands satisfying `keep` in every entry, restricting
    /// the maps to the kept summands.
    fn component(&self, keep: impl Fn(i64, &Indecomposable) -> bool) -> Result<ObjectSequence> {
        let entries: Vec<SplitObject> = self.entries.iter().map(|e| e.filter(|d, m| keep(d, m))).collect();
        let mut maps = Vec::with_capacity(self.maps.len());
        for (i, w) in self.maps.iter().enumerate() {
            let (src, tgt) = (&entries[i], &entries[i + 1]);
            let new = match w {
                MapWitness::Identity => MapWitness::Identity,
                MapWitness::Multiplication(m) => MapWitness::Multiplication(*m),
                MapWitness::Module(parts) => {
                    let mut out = Vec::new();
                    for (d, map) in parts {
                        let ks: Vec<bool> = map.source().iter().map(|m| keep(*d, m)).collect();
                        let kt: Vec<bool> = map.target().iter().map(|m| keep(*d, m)).collect();
                        let r = map
                            .restrict(&ks, &kt)
                            .map_err(|e| Error::WitnessLost(format!("degree {d} of map {}: {e}", i + 1)))?;
                        out.push((*d, r));
                    }
                    MapWitness::Module(out)
                }
                MapWitness::FormalCone(c) => {
                    let c = c.filter(|d, m| keep(d, m));
                    validate_formal(&c, src, tgt).map_err(|e| Error::WitnessLost(format!("map {}: {e}", i + 1)))?;
                    MapWitness::FormalCone(c)
                }
            };
            new.check(src, tgt).map_err(|e| Error::WitnessLost(format!("map {}: {e}", i + 1)))?;
            maps.push(new);
        }
        Ok(ObjectSequence {
            ring: self.ring.clone(),
            entries,
            maps,
        })
    }
}

impl fmt::Display for ObjectSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " --{}--> ", self.maps[i - 1])?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CauchyCertificate {
    pub horizon: usize,
    /// `(m, N(m))`: from map `N(m)` up to the horizon every cone lies in
    /// ball `m`.
    pub stabilization: Vec<(u64, usize)>,
    /// For each map index, its cone and the verdict for the finest ball it
    /// is certified in (ball 1 when it precedes every stabilisation index).
    pub cone_witnesses: Vec<(usize, SplitObject, BallMembership)>,
}

impl CauchyCertificate {
    pub fn stabilization_index(&self, m: u64) -> Option<usize> {
        self.stabilization.iter().find(|(b, _)| *b == m).map(|(_, n)| *n)
    }
}

/// Why a sequence failed to be Cauchy within the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyFailure {
    /// Ball that the last cone within the horizon does not belong to.
    pub ball: u64,
    /// Index of the offending map.
    pub index: usize,
    pub cone: SplitObject,
    pub verdict: BallMembership,
}

impl fmt::Display for CauchyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cone {} of map {} is {} ball {}",
            self.cone, self.index, self.verdict, self.ball
        )
    }
}

/// Check the Cauchy condition for balls `1..=horizon` and maps
/// `1..=horizon`: for each ball there must be an index from which every cone
/// up to the horizon lies in it.
pub fn is_cauchy(
    seq: &ObjectSequence,
    m: &MetricNF,
    horizon: usize,
) -> Result<std::result::Result<CauchyCertificate, CauchyFailure>> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    if seq.steps() < horizon {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} exceeds the {} maps of the sequence",
            seq.steps()
        )));
    }
    if seq.ring() != m.ring() {
        return Err(Error::MixedRings(format!("{} and {}", seq.ring(), m.ring())));
    }
    let cones: Vec<SplitObject> = (1..=horizon).map(|n| seq.cone(n)).collect::<Result<_>>()?;
    let mut verdicts = Vec::with_capacity(horizon);
    for ball in 1..=horizon as u64 {
        let row: Vec<BallMembership> = cones.iter().map(|c| m.ball_contains(ball, c)).collect::<Result<_>>()?;
        verdicts.push(row);
    }
    let mut stabilization = Vec::with_capacity(horizon);
    for (b, row) in verdicts.iter().enumerate() {
        let ball = b as u64 + 1;
        // First index after the last cone outside the ball.
        let start = row
            .iter()
            .rposition(|v| *v != BallMembership::In)
            .map_or(1, |last| last + 2);
        if start > horizon {
            return Ok(Err(CauchyFailure {
                ball,
                index: horizon,
                cone: cones[horizon - 1].clone(),
                verdict: row[horizon - 1],
            }));
        }
        stabilization.push((ball, start));
    }
    let cone_witnesses = cones
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let n = i + 1;
            let finest = stabilization
                .iter()
                .filter(|(_, s)| *s <= n)
                .map(|(b, _)| *b)
                .max()
                .unwrap_or(1);
            (n, c, verdicts[finest as usize - 1][i])
        })
        .collect();
    Ok(Ok(CauchyCertificate {
        horizon,
        stabilization,
        cone_witnesses,
    }))
}

/// Remove from every entry the summands lying in `b`.
pub fn trivialize(seq: &ObjectSequence, b: &ThickDescriptor) -> Result<ObjectSequence> {
    if !b.fits(seq.ring()) {
        return Err(Error::MixedRings(format!("{b} over {}", seq.ring())));
    }
    seq.component(|_, m| !b.contains_module(m))
}

/// Remove every summand outside degrees `[low, high + 1]`.
pub fn bound_cohomology(seq: &ObjectSequence, low: i64, high: i64) -> Result<ObjectSequence> {
    if low > high + 1 {
        return Err(Error::InvalidArgument(format!("empty window [{low}, {}]", high + 1)));
    }
    seq.component(|d, _| low <= d && d <= high + 1)
}

/// The labels of `s` in enumeration order, each repeated infinitely often:
/// round robin for a finite set, `l1; l1 l2; l1 l2 l3; ...` otherwise.
fn schedule(s: &LabelSet, steps: usize) -> Vec<Label> {
    if let Some(finite) = s.as_finite() {
        return finite.iter().cycle().take(steps).cloned().collect();
    }
    let mut out = Vec::with_capacity(steps);
    let mut known: Vec<Label> = Vec::new();
    let mut hi = s.max_mentioned_key() + 8;
    let mut round = 1;
    while out.len() < steps {
        while known.len() < round {
            known = s.members_in(0, hi);
            hi *= 2;
        }
        out.extend(known.iter().take(round).cloned());
        round += 1;
    }
    out.truncate(steps);
    out
}

/// Build a Cauchy sequence for the constant metric at `c` starting from
/// `start`, by killing one generator of `c` per step.
pub fn small_object_sequence(
    ring: &RingDescriptor,
    c: &ThickDescriptor,
    start: &SplitObject,
    steps: usize,
) -> Result<ObjectSequence> {
    if start.ring() != ring {
        return Err(Error::MixedRings(format!("{ring} and {}", start.ring())));
    }
    if !c.is_countably_generated() {
        return Err(Error::NotCountablyGenerated(c.to_string()));
    }
    let unsupported = || Error::UnsupportedStart(format!("{start} towards {c} over {ring}"));
    match (ring, c) {
        (_, ThickDescriptor::Zero) => Ok(ObjectSequence::constant(start.clone(), steps)),
        (RingDescriptor::IntegerRing, ThickDescriptor::Torsion(s)) => {
            if start.is_zero() || start.summands().any(|(_, m)| *m != Indecomposable::ZFree) {
                return Err(unsupported());
            }
            let maps = schedule(s, steps)
                .into_iter()
                .map(|l| MapWitness::Multiplication(l.key() as i64))
                .collect();
            ObjectSequence::new(ring.clone(), vec![start.clone(); steps + 1], maps)
        }
        (RingDescriptor::Kronecker(field), ThickDescriptor::Regular(d)) => {
            let first = match start.summands().collect::<Vec<_>>().as_slice() {
                [(0, Indecomposable::Preprojective(n))] => *n,
                _ => return Err(unsupported()),
            };
            let points: Vec<ProjPoint> = schedule(d, steps)
                .into_iter()
                .map(|l| match l {
                    Label::Point(p) => p,
                    Label::Prime(_) => unreachable!(),
                })
                .collect();
            ObjectSequence::preprojective_chain(field.clone(), first, &points)
        }
        _ => Err(unsupported()),
    }
}

/// The integer by which a witness multiplies a single copy of `Z`.
fn scalar_on_z(w: &MapWitness) -> Option<BigInt> {
    match w {
        MapWitness::Multiplication(m) => Some(BigInt::from(*m)),
        MapWitness::Identity => Some(BigInt::from(1)),
        MapWitness::Module(parts) => match parts.as_slice() {
            [(0, map)] => match map.data() {
                MapData::Integer(mat) if mat.rows() == 1 && mat.cols() == 1 => Some(mat.get(0, 0).clone()),
                _ => None,
            },
            _ => None,
        },
        MapWitness::FormalCone(_) => None,
    }
}

/// A model of the homotopy colimit of a sequence in one of the supported
/// families: identity chains, multiplication chains on `Z`, and preprojective
/// chains over the Kronecker quiver whose cones are quasi-simple regular.
/// Every connecting map is checked to become invertible after the model's
/// localisation.
pub fn hocolim_model(seq: &ObjectSequence) -> Result<Probe> {
    let unsupported = |why: &str| Error::UnsupportedFamily(format!("{seq}: {why}"));
    if seq.maps().iter().all(|w| *w == MapWitness::Identity) {
        return Ok(Probe::Object(seq.entries()[0].clone()));
    }
    match seq.ring() {
        RingDescriptor::IntegerRing => {
            let z = SplitObject::module(RingDescriptor::IntegerRing, Indecomposable::ZFree)?;
            if seq.entries().iter().any(|e| *e != z) {
                return Err(unsupported("entries must be Z in degree 0"));
            }
            let mut factors = Vec::new();
            for w in seq.maps() {
                let m = scalar_on_z(w).ok_or_else(|| unsupported("maps must be multiplications"))?;
                if num_traits::Zero::is_zero(&m) {
                    return Err(unsupported("a zero map kills the colimit's generator"));
                }
                factors.push(m);
            }
            let mut primes = Vec::new();
            for m in &factors {
                let v = num_traits::ToPrimitive::to_u64(&num_traits::Signed::abs(m))
                    .ok_or_else(|| unsupported("multiplier too large"))?;
                primes.extend(crate::arith::factor(v).into_iter().map(|(p, _)| p));
            }
            let s = LabelSet::primes(primes);
            if !factors.iter().all(|m| is_unit_after_inverting(m, &s)) {
                return Err(unsupported("a map stays non-invertible after localisation"));
            }
            Ok(Probe::LocalizedFree(s))
        }
        RingDescriptor::Kronecker(field) => {
            let indices: Vec<Option<u32>> = seq
                .entries()
                .iter()
                .map(|e| match e.summands().collect::<Vec<_>>().as_slice() {
                    [(0, Indecomposable::Preprojective(n))] => Some(*n),
                    _ => None,
                })
                .collect();
            let consecutive = indices.windows(2).all(|w| matches!(w, [Some(a), Some(b)] if a + 1 == *b));
            if indices[0].is_none() || !consecutive {
                return Err(unsupported("entries must be consecutive preprojectives"));
            }
            let mut points = Vec::new();
            for n in 1..=seq.steps() {
                let cone = seq.cone(n)?;
                match cone.summands().collect::<Vec<_>>().as_slice() {
                    [(0, Indecomposable::Regular { point, length: 1 })] => points.push(point.clone()),
                    _ => return Err(unsupported("cones must be quasi-simple regular modules")),
                }
            }
            let d: PointSet = LabelSet::points(field.clone(), points);
            // Each cone lies in the tubes at d, so every map becomes invertible
            // after localising at them.
            debug_assert!(seq.cones()?.iter().all(|c| ThickDescriptor::regular(d.clone()).contains(c).unwrap_or(false)));
            Ok(Probe::KroneckerColimit(d))
        }
        _ => Err(unsupported("unsupported ring")),
    }
}

/// The primes that a multiplication chain inverts.
pub fn inverted_primes(seq: &ObjectSequence) -> Result<PrimeSet> {
    match hocolim_model(seq)? {
        Probe::LocalizedFree(s) => Ok(s),
        Probe::Object(_) => Ok(LabelSet::empty(Universe::Primes)),
        p => Err(Error::UnsupportedFamily(format!("{p} is not a localisation of Z"))),
    }
}
