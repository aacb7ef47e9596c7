//! Finite sets as a second cocartesian symmetric monoidal base.

use serde::{Deserialize, Serialize};

use super::CatError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinSetObj {
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSetMap {
    pub source: FinSetObj,
    pub target: FinSetObj,
    /// `images[k]` is the index in `target` of the image of source element `k`.
    pub images: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FinSetPushout {
    pub apex: FinSetObj,
    pub inj_left: FinSetMap,
    pub inj_right: FinSetMap,
}

impl FinSetObj {
    pub fn new(elements: Vec<String>) -> Result<Self, CatError> {
        let mut s = elements.clone();
        s.sort();
        s.dedup();
        if s.len() != elements.len() {
            return Err(CatError::Invalid(
                "finite set elements must be distinct".into(),
            ));
        }
        Ok(FinSetObj { elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// The one-point tensor unit.
    pub fn unit() -> Self {
        FinSetObj {
            elements: vec!["*".into()],
        }
    }

    /// Cartesian product, left-factor-major, elements named `(a,b)`.
    pub fn tensor(&self, other: &FinSetObj) -> FinSetObj {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for a in &self.elements {
            for b in &other.elements {
                elements.push(format!("({a},{b})"));
            }
        }
        FinSetObj { elements }
    }

    /// Disjoint union with elements tagged `k.name` by summand index.
    pub fn coproduct(objs: &[FinSetObj]) -> (FinSetObj, Vec<FinSetMap>) {
        let mut elements = Vec::new();
        let mut offsets = Vec::new();
        for (k, o) in objs.iter().enumerate() {
            offsets.push(elements.len());
            elements.extend(o.elements.iter().map(|e| format!("{k}.{e}")));
        }
        let apex = FinSetObj { elements };
        let inj = objs
            .iter()
            .zip(offsets)
            .map(|(o, off)| FinSetMap {
                source: o.clone(),
                target: apex.clone(),
                images: (off..off + o.len()).collect(),
            })
            .collect();
        (apex, inj)
    }
}

impl FinSetMap {
    pub fn new(source: FinSetObj, target: FinSetObj, images: Vec<usize>) -> Result<Self, CatError> {
        if images.len() != source.len() || images.iter().any(|&i| i >= target.len()) {
            return Err(CatError::Invalid(
                "finite set map images out of range".into(),
            ));
        }
        Ok(FinSetMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(o: &FinSetObj) -> Self {
        FinSetMap {
            source: o.clone(),
            target: o.clone(),
            images: (0..o.len()).collect(),
        }
    }

    pub fn compose(&self, f: &FinSetMap) -> Result<FinSetMap, CatError> {
        if f.target != self.source {
            return Err(CatError::DomainMismatch {
                expected: self.source.len(),
                found: f.target.len(),
            });
        }
        Ok(FinSetMap {
            source: f.source.clone(),
            target: self.target.clone(),
            images: f.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn tensor(&self, g: &FinSetMap) -> FinSetMap {
        let mut images = Vec::with_capacity(self.images.len() * g.images.len());
        for &a in &self.images {
            for &b in &g.images {
                images.push(a * g.target.len() + b);
            }
        }
        FinSetMap {
            source: self.source.tensor(&g.source),
            target: self.target.tensor(&g.target),
            images,
        }
    }

    pub fn symmetry(a: &FinSetObj, b: &FinSetObj) -> FinSetMap {
        let mut images = Vec::with_capacity(a.len() * b.len());
        for i in 0..a.len() {
            for j in 0..b.len() {
                images.push(j * a.len() + i);
            }
        }
        FinSetMap {
            source: a.tensor(b),
            target: b.tensor(a),
            images,
        }
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Push-out of `f: X -> A`, `g: X -> B` as the quotient of `A ⊔ B` by the
/// equivalence generated by `f(x) ~ g(x)`. Each class is named by its
/// lexicographically least tagged member; classes are listed in order of
/// their first member in `A ⊔ B`.
pub fn finset_pushout(f: &FinSetMap, g: &FinSetMap) -> Result<FinSetPushout, CatError> {
    if f.source != g.source {
        return Err(CatError::DomainMismatch {
            expected: f.source.len(),
            found: g.source.len(),
        });
    }
    let (du, _) = FinSetObj::coproduct(&[f.target.clone(), g.target.clone()]);
    let a = f.target.len();
    let mut parent: Vec<usize> = (0..du.len()).collect();
    for (x, y) in f.images.iter().zip(&g.images) {
        let rx = find(&mut parent, *x);
        let ry = find(&mut parent, a + *y);
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
    }
    let mut class_of_root = std::collections::BTreeMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut class = vec![0usize; du.len()];
    for (e, slot) in class.iter_mut().enumerate() {
        let r = find(&mut parent, e);
        let k = *class_of_root.entry(r).or_insert_with(|| {
            names.push(du.elements[e].clone());
            names.len() - 1
        });
        if du.elements[e] < names[k] {
            names[k] = du.elements[e].clone();
        }
        *slot = k;
    }
    let apex = FinSetObj { elements: names };
    Ok(FinSetPushout {
        inj_left: FinSetMap {
            source: f.target.clone(),
            target: apex.clone(),
            images: class[..a].to_vec(),
        },
        inj_right: FinSetMap {
            source: g.target.clone(),
            target: apex.clone(),
            images: class[a..].to_vec(),
        },
        apex,
    })
}

impl FinSetPushout {
    /// The unique map out of the apex restricting to the given legs.
    pub fn mediate(&self, h_left: &FinSetMap, h_right: &FinSetMap) -> Result<FinSetMap, CatError> {
        let mut images = vec![None; self.apex.len()];
        let mut assign = |cls: usize, v: usize| -> Result<(), CatError> {
            match images[cls] {
                Some(w) if w != v => Err(CatError::IncompatibleCocone),
                _ => {
                    images[cls] = Some(v);
                    Ok(())
                }
            }
        };
        for (k, &c) in self.inj_left.images.iter().enumerate() {
            assign(c, h_left.images[k])?;
        }
        for (k, &c) in self.inj_right.images.iter().enumerate() {
            assign(c, h_right.images[k])?;
        }
        Ok(FinSetMap {
            source: self.apex.clone(),
            target: h_left.target.clone(),
            images: images
                .into_iter()
                .map(|i| i.expect("injections are jointly surjective"))
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(xs: &[&str]) -> FinSetObj {
        FinSetObj::new(xs.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn pushout_glues_classes() {
        let x = obj(&["p", "q"]);
        let a = obj(&["a", "b", "c"]);
        let b = obj(&["u", "v"]);
        let f = FinSetMap::new(x.clone(), a, vec![0, 1]).unwrap();
        let g = FinSetMap::new(x, b, vec![0, 0]).unwrap();
        let po = finset_pushout(&f, &g).unwrap();
        // {a, b, u} glued, c alone, v alone.
        assert_eq!(po.apex.elements, vec!["0.a", "0.c", "1.v"]);
        assert_eq!(
            po.inj_left.compose(&f).unwrap(),
            po.inj_right.compose(&g).unwrap()
        );
    }

    #[test]
    fn symmetry_is_involution() {
        let a = obj(&["0", "1"]);
        let b = obj(&["x", "y", "z"]);
        let s = FinSetMap::symmetry(&a, &b);
        let t = FinSetMap::symmetry(&b, &a);
        assert_eq!(t.compose(&s).unwrap(), FinSetMap::identity(&a.tensor(&b)));
    }
}
