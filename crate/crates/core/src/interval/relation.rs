//! Relations on finite unions of rational intervals, built from six kinds
//! of closed primitives.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

use super::set::{Interval, IntervalSet};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Primitive {
    /// `I × J`.
    Box { i: (Rational, Rational), j: (Rational, Rational) },
    /// `{(x, x) : x ∈ I}`.
    Diag { i: (Rational, Rational) },
    /// `{(x, a x + b) : x ∈ I}`.
    Affine { i: (Rational, Rational), a: Rational, b: Rational },
    /// `{c} × J`.
    VLine { c: Rational, j: (Rational, Rational) },
    /// `I × {c}`.
    HLine { i: (Rational, Rational), c: Rational },
    Point { x: Rational, y: Rational },
}

/// Every primitive is a box or an affine segment over a closed interval.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    Box(Interval, Interval),
    Affine(Interval, Rational, Rational),
}

fn closed(range: &(Rational, Rational)) -> Result<Interval> {
    Interval::closed(range.0.clone(), range.1.clone()).ok_or_else(|| {
        Error::Relation(format!(
            "interval [{}, {}] is empty",
            rational::format(&range.0),
            rational::format(&range.1)
        ))
    })
}

fn range(i: &Interval) -> (Rational, Rational) {
    (i.lo().clone(), i.hi().clone())
}

impl Primitive {
    pub fn rect(i: (Rational, Rational), j: (Rational, Rational)) -> Self {
        Primitive::Box { i, j }
    }

    fn shape(&self) -> Result<Shape> {
        Ok(match self {
            Primitive::Box { i, j } => Shape::Box(closed(i)?, closed(j)?),
            Primitive::Diag { i } => Shape::Affine(closed(i)?, int(1), int(0)),
            Primitive::Affine { i, a, b } => Shape::Affine(closed(i)?, a.clone(), b.clone()),
            Primitive::VLine { c, j } => Shape::Box(Interval::point(c.clone()), closed(j)?),
            Primitive::HLine { i, c } => Shape::Box(closed(i)?, Interval::point(c.clone())),
            Primitive::Point { x, y } => Shape::Box(Interval::point(x.clone()), Interval::point(y.clone())),
        })
    }

    fn from_shape(s: Shape) -> Self {
        match s {
            Shape::Box(i, j) => match (i.is_point(), j.is_point()) {
                (true, true) => Primitive::Point {
                    x: i.lo().clone(),
                    y: j.lo().clone(),
                },
                (true, false) => Primitive::VLine {
                    c: i.lo().clone(),
                    j: range(&j),
                },
                (false, true) => Primitive::HLine {
                    i: range(&i),
                    c: j.lo().clone(),
                },
                (false, false) => Primitive::Box {
                    i: range(&i),
                    j: range(&j),
                },
            },
            Shape::Affine(i, a, b) => {
                if i.is_point() {
                    let y = &a * i.lo() + &b;
                    Primitive::Point { x: i.lo().clone(), y }
                } else if a == int(1) && b.is_zero() {
                    Primitive::Diag { i: range(&i) }
                } else if a.is_zero() {
                    Primitive::HLine { i: range(&i), c: b }
                } else {
                    Primitive::Affine { i: range(&i), a, b }
                }
            }
        }
    }
}

impl fmt::Debug for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = rational::format;
        let iv = |i: &(Rational, Rational)| format!("[{}, {}]", r(&i.0), r(&i.1));
        match self {
            Primitive::Box { i, j } => write!(f, "{} × {}", iv(i), iv(j)),
            Primitive::Diag { i } => write!(f, "diag {}", iv(i)),
            Primitive::Affine { i, a, b } => write!(f, "y = {}x + {} on {}", r(a), r(b), iv(i)),
            Primitive::VLine { c, j } => write!(f, "{{{}}} × {}", r(c), iv(j)),
            Primitive::HLine { i, c } => write!(f, "{} × {{{}}}", iv(i), r(c)),
            Primitive::Point { x, y } => write!(f, "({}, {})", r(x), r(y)),
        }
    }
}

/// A closed relation on `domain`, the union of its primitives.
#[derive(Clone, PartialEq, Eq)]
pub struct PlanarRelation {
    domain: IntervalSet,
    primitives: Vec<Primitive>,
    shapes: Vec<Shape>,
}

impl PlanarRelation {
    pub fn new(domain: IntervalSet, primitives: Vec<Primitive>) -> Result<Self> {
        if primitives.is_empty() {
            return Err(Error::Relation("a relation needs at least one primitive".into()));
        }
        if !domain.is_closed() || domain.is_empty() {
            return Err(Error::Domain("the domain must be a non-empty union of closed intervals".into()));
        }
        let shapes = primitives.iter().map(Primitive::shape).collect::<Result<Vec<_>>>()?;
        for (p, s) in primitives.iter().zip(&shapes) {
            let (xs, ys) = match s {
                Shape::Box(i, j) => (IntervalSet::interval(i.clone()), IntervalSet::interval(j.clone())),
                Shape::Affine(i, a, b) => (IntervalSet::interval(i.clone()), IntervalSet::interval(i.affine_image(a, b))),
            };
            if !xs.is_subset(&domain) || !ys.is_subset(&domain) {
                return Err(Error::Domain(format!("primitive {p:?} leaves the domain {domain:?}")));
            }
        }
        Ok(PlanarRelation {
            domain,
            primitives,
            shapes,
        })
    }

    fn from_shapes(domain: IntervalSet, shapes: Vec<Shape>) -> Self {
        PlanarRelation {
            domain,
            primitives: shapes.iter().cloned().map(Primitive::from_shape).collect(),
            shapes,
        }
    }

    pub fn domain(&self) -> &IntervalSet {
        &self.domain
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    fn check_domain(&self, s: &IntervalSet) -> Result<()> {
        if s.is_subset(&self.domain) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{s:?} is not inside {:?}", self.domain)))
        }
    }

    /// `R(S)`; `S` must lie in the domain.
    pub fn image(&self, s: &IntervalSet) -> Result<IntervalSet> {
        self.check_domain(s)?;
        Ok(self.image_unchecked(s))
    }

    pub(crate) fn image_unchecked(&self, s: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for shape in &self.shapes {
            match shape {
                Shape::Box(i, j) => {
                    if s.intersects(&IntervalSet::interval(i.clone())) {
                        out.push(j.clone());
                    }
                }
                Shape::Affine(i, a, b) => {
                    let part = s.intersection(&IntervalSet::interval(i.clone()));
                    out.extend(part.parts().iter().map(|p| p.affine_image(a, b)));
                }
            }
        }
        IntervalSet::from_intervals(out)
    }

    /// Domain endpoints and every endpoint of every primitive, in both
    /// coordinates.
    pub fn landmarks(&self) -> Vec<Rational> {
        let mut v = self.domain.endpoints();
        for s in &self.shapes {
            let (i, j) = match s {
                Shape::Box(i, j) => (i.clone(), j.clone()),
                Shape::Affine(i, a, b) => (i.clone(), i.affine_image(a, b)),
            };
            v.extend([i.lo().clone(), i.hi().clone(), j.lo().clone(), j.hi().clone()]);
        }
        v.sort();
        v.dedup();
        v
    }

    /// `R(x)`.
    pub fn fiber(&self, x: &Rational) -> IntervalSet {
        self.image_unchecked(&IntervalSet::point(x.clone()))
    }

    /// `{x : R(x) ∩ S ≠ ∅}`.
    pub fn preimage_exists(&self, s: &IntervalSet) -> IntervalSet {
        let mut out = IntervalSet::empty();
        for shape in &self.shapes {
            let part = match shape {
                Shape::Box(i, j) => {
                    if s.intersects(&IntervalSet::interval(j.clone())) {
                        IntervalSet::interval(i.clone())
                    } else {
                        IntervalSet::empty()
                    }
                }
                Shape::Affine(i, a, b) => s.affine_preimage(a, b, i),
            };
            out = out.union(&part);
        }
        out
    }

    /// `ND(R) = {x : R(x) ≠ ∅}`.
    pub fn nondegenerate(&self) -> IntervalSet {
        self.preimage_exists(&self.domain)
    }

    /// `{x ∈ ND(R) : R(x) ⊆ S}`.
    pub fn universal_preimage(&self, s: &IntervalSet) -> IntervalSet {
        self.nondegenerate()
            .difference(&self.preimage_exists(&s.complement_in(&self.domain)))
    }

    /// Iterates `L_{m+1} = L_m ∩ pre(R, L_m)` from `L_0 = ND(R)`. Returns
    /// the last set, whether it is a fixpoint, and the number of
    /// iterations performed.
    pub fn legal_iterate(&self, max_iter: usize) -> (IntervalSet, bool, usize) {
        let mut l = self.nondegenerate();
        for it in 1..=max_iter.max(1) {
            let next = l.intersection(&self.preimage_exists(&l));
            if next == l {
                return (l, true, it);
            }
            l = next;
        }
        (l, false, max_iter.max(1))
    }

    /// `self` followed by `other`: `{(x, z) : ∃y, (x, y) ∈ self, (y, z) ∈ other}`,
    /// composed primitive by primitive.
    pub fn then(&self, other: &PlanarRelation) -> PlanarRelation {
        let mut shapes = Vec::new();
        for s in &self.shapes {
            for t in &other.shapes {
                shapes.extend(compose(s, t));
            }
        }
        PlanarRelation::from_shapes(self.domain.clone(), shapes)
    }

    pub fn power(&self, n: usize) -> PlanarRelation {
        if n == 0 {
            return self.diagonal_of_domain();
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.then(self);
        }
        acc
    }

    fn diagonal_of_domain(&self) -> PlanarRelation {
        let shapes = self
            .domain
            .parts()
            .iter()
            .map(|p| Shape::Affine(p.clone(), int(1), int(0)))
            .collect();
        PlanarRelation::from_shapes(self.domain.clone(), shapes)
    }

    /// Abscissae where the fiber structure may change: interval endpoints,
    /// and points where a segment meets a box edge or another segment.
    fn breakpoints(&self, other: &PlanarRelation) -> Vec<Rational> {
        let shapes: Vec<&Shape> = self.shapes.iter().chain(&other.shapes).collect();
        let mut xs: Vec<Rational> = self.domain.endpoints();
        xs.extend(other.domain.endpoints());
        let mut levels = Vec::new();
        let mut lines = Vec::new();
        for s in &shapes {
            match s {
                Shape::Box(i, j) => {
                    xs.extend([i.lo().clone(), i.hi().clone()]);
                    levels.extend([j.lo().clone(), j.hi().clone()]);
                }
                Shape::Affine(i, a, b) => {
                    xs.extend([i.lo().clone(), i.hi().clone()]);
                    lines.push((a.clone(), b.clone()));
                }
            }
        }
        for (a, b) in &lines {
            if !a.is_zero() {
                xs.extend(levels.iter().map(|c| (c - b) / a));
            }
            for (a2, b2) in &lines {
                if a != a2 {
                    xs.push((b2 - b) / (a - a2));
                }
            }
        }
        xs.sort();
        xs.dedup();
        xs
    }

    /// Equality as planar sets: fibers agree at every breakpoint and at
    /// the midpoint of every gap between consecutive breakpoints. Within a
    /// gap no segment crosses a box edge or another segment, so the fibers
    /// agree throughout.
    pub fn set_eq(&self, other: &PlanarRelation) -> bool {
        if self.domain != other.domain {
            return false;
        }
        let xs = self.breakpoints(other);
        let two = int(2);
        let mut probes = xs.clone();
        probes.extend(xs.windows(2).map(|w| (&w[0] + &w[1]) / &two));
        probes
            .iter()
            .filter(|x| self.domain.contains(x))
            .all(|x| self.fiber(x) == other.fiber(x))
    }

    /// Planar relation of isolated points.
    pub fn from_points(points: &[Rational], pairs: &[(usize, usize)]) -> Result<Self> {
        let prims = pairs
            .iter()
            .map(|&(x, y)| Primitive::Point {
                x: points[x].clone(),
                y: points[y].clone(),
            })
            .collect();
        PlanarRelation::new(IntervalSet::points(points.iter().cloned()), prims)
    }
}

fn compose(s: &Shape, t: &Shape) -> Option<Shape> {
    let meet = |a: &Interval, b: &Interval| a.intersect(b);
    match (s, t) {
        (Shape::Box(i1, j1), Shape::Box(i2, j2)) => meet(j1, i2).map(|_| Shape::Box(i1.clone(), j2.clone())),
        (Shape::Box(i1, j1), Shape::Affine(i2, a, b)) => meet(j1, i2).map(|m| Shape::Box(i1.clone(), m.affine_image(a, b))),
        (Shape::Affine(i1, a, b), Shape::Box(i2, j2)) => {
            let dom = IntervalSet::interval(i2.clone()).affine_preimage(a, b, i1);
            let part = dom.parts().first()?.clone();
            Some(Shape::Box(part, j2.clone()))
        }
        (Shape::Affine(i1, a1, b1), Shape::Affine(i2, a2, b2)) => {
            let dom = IntervalSet::interval(i2.clone()).affine_preimage(a1, b1, i1);
            let part = dom.parts().first()?.clone();
            Some(Shape::Affine(part, a2 * a1, a2 * b1 + b2))
        }
    }
}

impl fmt::Debug for PlanarRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.primitives).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarDoc {
    pub domain: Vec<[String; 2]>,
    pub primitives: Vec<PrimitiveDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PrimitiveDoc {
    Box {
        #[serde(rename = "I")]
        i: [String; 2],
        #[serde(rename = "J")]
        j: [String; 2],
    },
    Diag {
        #[serde(rename = "I")]
        i: [String; 2],
    },
    Affine {
        #[serde(rename = "I")]
        i: [String; 2],
        a: String,
        b: String,
    },
    Vline {
        c: String,
        #[serde(rename = "J")]
        j: [String; 2],
    },
    Hline {
        #[serde(rename = "I")]
        i: [String; 2],
        c: String,
    },
    Point {
        x: String,
        y: String,
    },
}

fn pair_doc(r: &(Rational, Rational)) -> [String; 2] {
    [rational::format(&r.0), rational::format(&r.1)]
}

fn pair_parse(r: &[String; 2]) -> Result<(Rational, Rational)> {
    Ok((rational::parse(&r[0])?, rational::parse(&r[1])?))
}

impl PlanarRelation {
    pub fn to_doc(&self) -> PlanarDoc {
        let f = rational::format;
        PlanarDoc {
            domain: self.domain.parts().iter().map(|p| [f(p.lo()), f(p.hi())]).collect(),
            primitives: self
                .primitives
                .iter()
                .map(|p| match p {
                    Primitive::Box { i, j } => PrimitiveDoc::Box {
                        i: pair_doc(i),
                        j: pair_doc(j),
                    },
                    Primitive::Diag { i } => PrimitiveDoc::Diag { i: pair_doc(i) },
                    Primitive::Affine { i, a, b } => PrimitiveDoc::Affine {
                        i: pair_doc(i),
                        a: f(a),
                        b: f(b),
                    },
                    Primitive::VLine { c, j } => PrimitiveDoc::Vline { c: f(c), j: pair_doc(j) },
                    Primitive::HLine { i, c } => PrimitiveDoc::Hline { i: pair_doc(i), c: f(c) },
                    Primitive::Point { x, y } => PrimitiveDoc::Point { x: f(x), y: f(y) },
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &PlanarDoc) -> Result<Self> {
        let p = rational::parse;
        let domain = doc
            .domain
            .iter()
            .map(|r| {
                let (lo, hi) = pair_parse(r)?;
                Interval::closed(lo, hi).ok_or_else(|| Error::Domain(format!("empty domain interval {r:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let prims = doc
            .primitives
            .iter()
            .map(|d| {
                Ok(match d {
                    PrimitiveDoc::Box { i, j } => Primitive::Box {
                        i: pair_parse(i)?,
                        j: pair_parse(j)?,
                    },
                    PrimitiveDoc::Diag { i } => Primitive::Diag { i: pair_parse(i)? },
                    PrimitiveDoc::Affine { i, a, b } => Primitive::Affine {
                        i: pair_parse(i)?,
                        a: p(a)?,
                        b: p(b)?,
                    },
                    PrimitiveDoc::Vline { c, j } => Primitive::VLine { c: p(c)?, j: pair_parse(j)? },
                    PrimitiveDoc::Hline { i, c } => Primitive::HLine { i: pair_parse(i)?, c: p(c)? },
                    PrimitiveDoc::Point { x, y } => Primitive::Point { x: p(x)?, y: p(y)? },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PlanarRelation::new(IntervalSet::from_intervals(domain), prims)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn unit() -> (Rational, Rational) {
        (int(0), int(1))
    }

    fn unit_set() -> IntervalSet {
        IntervalSet::closed(int(0), int(1))
    }

    fn diag_plus_base() -> PlanarRelation {
        PlanarRelation::new(
            unit_set(),
            vec![Primitive::Diag { i: unit() }, Primitive::HLine { i: unit(), c: int(0) }],
        )
        .unwrap()
    }

    fn comb3() -> PlanarRelation {
        let mut prims = vec![Primitive::HLine { i: unit(), c: int(0) }, Primitive::VLine { c: int(0), j: unit() }];
        prims.extend((1..=3).map(|n| Primitive::VLine { c: ratio(1, n), j: unit() }));
        PlanarRelation::new(unit_set(), prims).unwrap()
    }

    #[test]
    fn image_examples() {
        let s = IntervalSet::closed(ratio(1, 4), ratio(1, 2));
        assert_eq!(diag_plus_base().image(&s).unwrap(), s.union(&IntervalSet::point(int(0))));
        let d = PlanarRelation::new(unit_set(), vec![Primitive::Diag { i: unit() }]).unwrap();
        assert_eq!(d.image(&s).unwrap(), s);
        assert_eq!(comb3().image(&IntervalSet::point(ratio(1, 2))).unwrap(), unit_set());
        assert!(d.image(&IntervalSet::point(int(2))).is_err());
    }

    #[test]
    fn preimage_examples() {
        let s = IntervalSet::closed(ratio(1, 4), ratio(1, 2));
        let d = PlanarRelation::new(unit_set(), vec![Primitive::Diag { i: unit() }]).unwrap();
        assert_eq!(d.preimage_exists(&s), s);
        let base = PlanarRelation::new(unit_set(), vec![Primitive::HLine { i: unit(), c: int(0) }]).unwrap();
        assert_eq!(base.preimage_exists(&IntervalSet::point(int(0))), unit_set());
        let l1 = PlanarRelation::new(
            unit_set(),
            vec![Primitive::Affine {
                i: (int(0), ratio(1, 2)),
                a: int(1),
                b: ratio(1, 2),
            }],
        )
        .unwrap();
        assert_eq!(
            l1.preimage_exists(&IntervalSet::closed(ratio(3, 4), int(1))),
            IntervalSet::closed(ratio(1, 4), ratio(1, 2))
        );
    }

    #[test]
    fn universal_preimage_examples() {
        let half = IntervalSet::closed(int(0), ratio(1, 2));
        assert_eq!(diag_plus_base().universal_preimage(&half), half);
        let teeth = IntervalSet::points([int(0), ratio(1, 3), ratio(1, 2), int(1)]);
        assert_eq!(
            comb3().universal_preimage(&IntervalSet::point(int(0))),
            teeth.complement_in(&unit_set())
        );
    }

    #[test]
    fn legal_examples() {
        let (l, done, it) = diag_plus_base().legal_iterate(8);
        assert_eq!(l, unit_set());
        assert!(done);
        assert_eq!(it, 1);
    }

    #[test]
    fn json_round_trip() {
        let r = comb3();
        let doc = r.to_doc();
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("\"kind\":\"vline\""));
        let back = PlanarRelation::from_doc(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn set_equality_sees_through_presentation() {
        let a = PlanarRelation::new(unit_set(), vec![Primitive::Diag { i: unit() }]).unwrap();
        let b = PlanarRelation::new(
            unit_set(),
            vec![
                Primitive::Diag { i: (int(0), ratio(1, 2)) },
                Primitive::Affine {
                    i: (ratio(1, 3), int(1)),
                    a: int(1),
                    b: int(0),
                },
            ],
        )
        .unwrap();
        assert!(a.set_eq(&b));
        let c = PlanarRelation::new(unit_set(), vec![Primitive::Diag { i: (int(0), ratio(1, 2)) }]).unwrap();
        assert!(!a.set_eq(&c));
        let boxed = PlanarRelation::new(unit_set(), vec![Primitive::rect(unit(), unit()), Primitive::Diag { i: unit() }]).unwrap();
        let only_box = PlanarRelation::new(unit_set(), vec![Primitive::rect(unit(), unit())]).unwrap();
        assert!(boxed.set_eq(&only_box));
    }
}
